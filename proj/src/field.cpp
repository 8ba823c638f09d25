#include "fnls/field.hpp"

#include <cmath>
#include <string>

#include "fnls/error.hpp"

namespace fnls {

Field::Field(GridPtr grid, std::vector<cplx> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw Error(ErrorKind::InvalidGrid, "field without grid");
  if (values_.size() != grid_->size())
    throw Error(ErrorKind::GridMismatch, "value count " + std::to_string(values_.size()) +
                                             " does not match grid size " + std::to_string(grid_->size()));
  for (const cplx& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorKind::NonFiniteField, "field contains NaN or Inf");
  }
}

Field Field::zeros(GridPtr grid) {
  const std::size_t n = grid->size();
  return Field(std::move(grid), std::vector<cplx>(n));
}

Field Field::sample(GridPtr grid, const std::function<cplx(std::span<const double>)>& f) {
  const int dim = grid->dim();
  std::vector<cplx> v(grid->size());
  std::vector<int> idx(static_cast<std::size_t>(dim));
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (std::size_t n = 0; n < v.size(); ++n) {
    grid->unravel(n, idx.data());
    for (int d = 0; d < dim; ++d) x[static_cast<std::size_t>(d)] = grid->coordinate(idx[static_cast<std::size_t>(d)]);
    v[n] = f(std::span<const double>(x));
  }
  return Field(std::move(grid), std::move(v));
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!a.same_shape(b)) throw Error(ErrorKind::GridMismatch, "fields live on different grids");
}

cplx inner(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  cplx acc = 0.0;
  const auto& va = a.values();
  const auto& vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) acc += std::conj(va[i]) * vb[i];
  return acc * a.grid().cell_volume();
}

double real_inner(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  double acc = 0.0;
  const auto& va = a.values();
  const auto& vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) acc += va[i].real() * vb[i].real() + va[i].imag() * vb[i].imag();
  return acc * a.grid().cell_volume();
}

double mass(const Field& f) {
  double acc = 0.0;
  for (const cplx& v : f.values()) acc += std::norm(v);
  return acc * f.grid().cell_volume();
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (const cplx& v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

Field operator+(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  std::vector<cplx> v(a.values());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += b[i];
  return Field(a.grid_ptr(), std::move(v));
}

Field operator-(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  std::vector<cplx> v(a.values());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= b[i];
  return Field(a.grid_ptr(), std::move(v));
}

Field operator*(cplx alpha, const Field& f) {
  std::vector<cplx> v(f.values());
  for (cplx& x : v) x *= alpha;
  return Field(f.grid_ptr(), std::move(v));
}

Field operator*(double alpha, const Field& f) {
  std::vector<cplx> v(f.values());
  for (cplx& x : v) x *= alpha;
  return Field(f.grid_ptr(), std::move(v));
}

Field axpy(const Field& a, double alpha, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  std::vector<cplx> v(a.values());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += alpha * b[i];
  return Field(a.grid_ptr(), std::move(v));
}

Field multiply_pointwise(const Field& f, const std::vector<double>& w) {
  if (w.size() != f.size()) throw Error(ErrorKind::GridMismatch, "weight array size mismatch");
  std::vector<cplx> v(f.values());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= w[i];
  return Field(f.grid_ptr(), std::move(v));
}

Field conj(const Field& f) {
  std::vector<cplx> v(f.values());
  for (cplx& x : v) x = std::conj(x);
  return Field(f.grid_ptr(), std::move(v));
}

Field normalize_mass(const Field& f, double c) {
  const double m = mass(f);
  if (!(m > 0.0)) throw Error(ErrorKind::ZeroField, "cannot normalize a zero field");
  return std::sqrt(c / m) * f;
}

Field roll(const Field& f, std::span<const int> shift) {
  const Grid& g = f.grid();
  const int dim = g.dim();
  const int M = g.points_per_dim();
  if (static_cast<int>(shift.size()) != dim) throw Error(ErrorKind::InvalidInput, "shift rank mismatch");
  std::vector<cplx> out(f.size());
  std::vector<int> idx(static_cast<std::size_t>(dim));
  for (std::size_t n = 0; n < f.size(); ++n) {
    g.unravel(n, idx.data());
    std::size_t target = 0;
    for (int d = 0; d < dim; ++d) {
      int j = (idx[static_cast<std::size_t>(d)] + shift[static_cast<std::size_t>(d)]) % M;
      if (j < 0) j += M;
      target = target * static_cast<std::size_t>(M) + static_cast<std::size_t>(j);
    }
    out[target] = f[n];
  }
  return Field(f.grid_ptr(), std::move(out));
}

std::size_t argmax_density(const Field& f) {
  std::size_t best = 0;
  double bv = -1.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = std::norm(f[i]);
    if (v > bv) {
      bv = v;
      best = i;
    }
  }
  return best;
}

}  // namespace fnls
