#include "fnls/random_fields.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace fnls {

namespace {

// Portable uniform double in [0, 1).
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

Field gaussian(GridPtr grid, double width, double amplitude) {
  const double w2 = width * width;
  return Field::sample(std::move(grid), [&](std::span<const double> x) {
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    return cplx(amplitude * std::exp(-0.5 * r2 / w2), 0.0);
  });
}

Field random_smooth_field(GridPtr grid, std::uint64_t seed, double width, bool complex_phase) {
  std::mt19937_64 rng(seed);
  const int dim = grid->dim();
  const double L = grid->half_extent();
  const int bumps = 2 + static_cast<int>(rng() % 4);
  struct Bump {
    std::vector<double> centre;
    double width;
    cplx amplitude;
  };
  std::vector<Bump> list;
  for (int b = 0; b < bumps; ++b) {
    Bump bump;
    for (int d = 0; d < dim; ++d) bump.centre.push_back((2.0 * uniform(rng) - 1.0) * 0.4 * L);
    bump.width = width * (0.5 + uniform(rng));
    const double a = 0.2 + uniform(rng);
    const double phase = complex_phase ? 2.0 * std::numbers::pi * uniform(rng) : 0.0;
    bump.amplitude = std::polar(a, phase);
    list.push_back(std::move(bump));
  }
  return Field::sample(std::move(grid), [&](std::span<const double> x) {
    cplx acc = 0.0;
    for (const Bump& bump : list) {
      double r2 = 0.0;
      for (int d = 0; d < dim; ++d) {
        const double dx = x[static_cast<std::size_t>(d)] - bump.centre[static_cast<std::size_t>(d)];
        r2 += dx * dx;
      }
      acc += bump.amplitude * std::exp(-0.5 * r2 / (bump.width * bump.width));
    }
    return acc;
  });
}

}  // namespace fnls
