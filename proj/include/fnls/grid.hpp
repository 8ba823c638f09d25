#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace fnls {

// Uniform periodic box [-L, L)^N with M points per axis, row-major (axis 0 slowest).
class Grid {
 public:
  Grid(int dim, double half_extent, int points_per_dim);

  int dim() const { return dim_; }
  double half_extent() const { return half_extent_; }
  int points_per_dim() const { return points_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return size_; }

  // Wavenumbers pi*m/L for m = -M/2 .. M/2-1 (ascending).
  const std::vector<double>& frequencies() const { return frequencies_; }
  // Wavenumber of FFT-ordered index j along one axis.
  double wavenumber(int j) const { return fft_wavenumbers_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& fft_wavenumbers() const { return fft_wavenumbers_; }
  // |k|^2 for every spectral index in FFT order, same layout as field values.
  const std::vector<double>& k_squared() const { return k_squared_; }

  double coordinate(int j) const { return -half_extent_ + spacing_ * j; }
  double cell_volume() const { return cell_volume_; }   // h^N
  double spectral_weight() const { return spectral_weight_; }  // (1/(2L))^N

  // Decompose a flat index into per-axis indices.
  void unravel(std::size_t flat, int* idx) const;

  bool same_shape(const Grid& other) const;

 private:
  int dim_;
  double half_extent_;
  int points_;
  double spacing_;
  std::size_t size_;
  double cell_volume_;
  double spectral_weight_;
  std::vector<double> frequencies_;
  std::vector<double> fft_wavenumbers_;
  std::vector<double> k_squared_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int dim, double half_extent, int points_per_dim);

}  // namespace fnls
