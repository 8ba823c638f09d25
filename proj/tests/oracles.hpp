#pragma once
#include <functional>
#include <vector>

#include "fnls/field.hpp"

// Reference computations that do not go through the spectral machinery.
namespace oracle {

// Corrected-trapezoid direct sum of |x|^{-gamma} * rho on a 2-D grid. zeta0 and
// zeta2 are the Epstein zeta values Z(gamma) and Z(gamma - 2) of the square
// lattice (analytic continuation); they remove the self-cell error through
// second order.
std::vector<double> riesz_direct_sum_2d(const fnls::Field& rho, double gamma, double zeta0, double zeta2);

// (-Delta)^s exp(-|x|^2/2) in 2-D at radius r by Hankel quadrature.
double gaussian_fractional_laplacian_2d(double r, double s);

// int_{R^2} |x - y|^{-gamma} exp(-|y|^2/2) dy at |x| = r, by polar quadrature.
double gaussian_riesz_2d(double r, double gamma);

// Periodic (-Delta)^s of the Gaussian exp(-|x|^2/2) on the box of g, summed as
// a Fourier series from the analytic transform (2 pi)^{N/2} exp(-|k|^2/2).
double gaussian_fractional_laplacian_series(const fnls::Grid& g, const double* x, double s);

// h^N sum over the k-lattice of |k|^{2s} |F(k)|^2 / (2L)^N, F the analytic transform
// of lambda^{N/2} exp(-|lambda x|^2/2).
double gaussian_hs_lattice(const fnls::Grid& g, double s, double lambda = 1.0);

// The same samples on the box [-L/lambda, L/lambda)^N with amplitude lambda^{N/2}:
// an exact representation of u^lambda(x) = lambda^{N/2} u(lambda x).
fnls::Field scaled_grid_copy(const fnls::Field& u, double lambda, double amplitude = -1.0);

// Maximizer of a unimodal function on [a, b].
double golden_section_max(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

}  // namespace oracle
