#pragma once

#include <vector>

#include "fnls/field.hpp"

namespace fnls {

// Fourier coefficients in FFT index order. Forward carries h^N and the phase of
// the centred coordinates x_j = -L + j h, so F(k) approximates the continuum
// transform  int f(x) e^{-i k.x} dx.
struct Spectrum {
  GridPtr grid;
  std::vector<cplx> coeffs;
};

Spectrum transform_forward(const Field& f);
Field transform_inverse(const Spectrum& s);

// (1/(2L))^N sum |F|^2, equal to h^N sum |f|^2.
double spectral_energy(const Spectrum& s);

// Multiplier |k|^{2s}, 0 < s <= 1.
Field fractional_laplacian(const Field& f, double s);
// Multiplier |k|^{2t} for any t >= 0 (t = 0 is the identity).
Field fractional_power(const Field& f, double t);
// Solve (|k|^{2s} + shift) g = f spectrally; shift > 0.
Field resolvent(const Field& f, double s, double shift);

// Components i k_j f, Nyquist mode zeroed.
std::vector<Field> gradient(const Field& f);

// int |xi|^{2s} |f^(xi)|^2 dxi / (2 pi)^N
double hs_seminorm_sq(const Field& f, double s);

// Trigonometric interpolant of f evaluated at lambda * x on the same grid
// (per-axis chirp-z). The Nyquist coefficient is split symmetrically.
Field dilate(const Field& f, double lambda);

// Cached |k|^{2t} table for a grid, FFT order.
const std::vector<double>& symbol_power(const Grid& grid, double t);

}  // namespace fnls
