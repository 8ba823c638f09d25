#include "fnls/grid.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fnls/error.hpp"

namespace fnls {

Grid::Grid(int dim, double half_extent, int points_per_dim)
    : dim_(dim), half_extent_(half_extent), points_(points_per_dim) {
  if (dim < 1) throw Error(ErrorKind::InvalidGrid, "dim must be >= 1");
  if (!(half_extent > 0.0) || !std::isfinite(half_extent))
    throw Error(ErrorKind::InvalidGrid, "half_extent must be positive and finite");
  if (points_per_dim < 8 || points_per_dim % 2 != 0)
    throw Error(ErrorKind::InvalidGrid,
                "points_per_dim must be even and >= 8, got " + std::to_string(points_per_dim));

  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) {
    if (total > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(points_per_dim) /
                    (2 * sizeof(double)))
      throw Error(ErrorKind::InvalidGrid, "grid too large for the address space");
    total *= static_cast<std::size_t>(points_per_dim);
  }
  size_ = total;

  spacing_ = 2.0 * half_extent / points_per_dim;
  // keep h*M == 2L exact in the stored values
  half_extent_ = spacing_ * points_per_dim / 2.0;

  cell_volume_ = std::pow(spacing_, dim);
  spectral_weight_ = std::pow(1.0 / (2.0 * half_extent_), dim);

  const double dk = std::numbers::pi / half_extent_;
  const int half = points_per_dim / 2;
  frequencies_.resize(static_cast<std::size_t>(points_per_dim));
  fft_wavenumbers_.resize(static_cast<std::size_t>(points_per_dim));
  for (int m = -half; m < half; ++m) frequencies_[static_cast<std::size_t>(m + half)] = dk * m;
  for (int j = 0; j < points_per_dim; ++j) {
    const int m = j < half ? j : j - points_per_dim;
    fft_wavenumbers_[static_cast<std::size_t>(j)] = dk * m;
  }

  k_squared_.assign(size_, 0.0);
  std::vector<int> idx(static_cast<std::size_t>(dim));
  for (std::size_t n = 0; n < size_; ++n) {
    unravel(n, idx.data());
    double k2 = 0.0;
    for (int d = 0; d < dim; ++d) {
      const double k = fft_wavenumbers_[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
      k2 += k * k;
    }
    k_squared_[n] = k2;
  }
}

void Grid::unravel(std::size_t flat, int* idx) const {
  for (int d = dim_ - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % static_cast<std::size_t>(points_));
    flat /= static_cast<std::size_t>(points_);
  }
}

bool Grid::same_shape(const Grid& other) const {
  return dim_ == other.dim_ && points_ == other.points_ && half_extent_ == other.half_extent_;
}

GridPtr make_grid(int dim, double half_extent, int points_per_dim) {
  return std::make_shared<const Grid>(dim, half_extent, points_per_dim);
}

}  // namespace fnls
