#pragma once

#include "fnls/field.hpp"

namespace fnls {

// W = |x|^{-gamma} * rho as a free-space convolution of the trigonometric
// interpolant of rho (zero outside the box). The kernel is truncated at the
// box diameter, which leaves the result inside the box unchanged, and its exact
// Fourier transform is sampled on a padded lattice once per (grid, gamma).
Field riesz_convolve(const Field& f_abs2, double gamma);

// pi^{N/2} 2^{N-gamma} Gamma((N-gamma)/2) / Gamma(gamma/2): the Fourier
// multiplier of |x|^{-gamma} is this constant times |k|^{gamma-N}.
double riesz_constant(int dim, double gamma);

// Fourier transform of |x|^{-gamma} restricted to |x| < radius, at |k| = k.
double truncated_riesz_transform(int dim, double gamma, double radius, double k);

}  // namespace fnls
