#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "fnls/grid.hpp"

namespace fnls {

using cplx = std::complex<double>;

// Immutable complex samples on a Grid. Every value is finite.
class Field {
 public:
  Field(GridPtr grid, std::vector<cplx> values);

  static Field zeros(GridPtr grid);
  // Samples f at the grid points; f receives the N coordinates of a point.
  static Field sample(GridPtr grid, const std::function<cplx(std::span<const double>)>& f);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const std::vector<cplx>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  cplx operator[](std::size_t i) const { return values_[i]; }

 private:
  GridPtr grid_;
  std::vector<cplx> values_;
};

void require_same_grid(const Grid& a, const Grid& b);

// h^N * sum conj(a) b
cplx inner(const Field& a, const Field& b);
double real_inner(const Field& a, const Field& b);
double mass(const Field& f);
double max_abs(const Field& f);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(cplx alpha, const Field& f);
Field operator*(double alpha, const Field& f);
// a + alpha*b
Field axpy(const Field& a, double alpha, const Field& b);
// pointwise product with a real array on the same grid
Field multiply_pointwise(const Field& f, const std::vector<double>& w);
Field conj(const Field& f);

// Rescale amplitude so that mass(f) == c.
Field normalize_mass(const Field& f, double c);

// Cyclic integer shift: out[i] = f[i - shift] per axis.
Field roll(const Field& f, std::span<const int> shift);

// Flat index of the largest |f|^2.
std::size_t argmax_density(const Field& f);

}  // namespace fnls
