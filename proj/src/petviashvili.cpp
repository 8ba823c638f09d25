#include <cmath>
#include <limits>
#include <string>

#include "fnls/error.hpp"
#include "fnls/ground_state.hpp"
#include "fnls/spectral.hpp"

namespace fnls {

namespace {

void check_oracle_params(const ModelParams& params, const Field& init) {
  if (!(params.s > 0.0 && params.s <= 1.0)) throw Error(ErrorKind::InvalidOrder, "s must lie in (0, 1]");
  if (params.is_power() && !(params.exponent() > 0.0))
    throw Error(ErrorKind::InvalidExponent, "power exponent must be positive");
  if (!params.is_power() && !(params.exponent() > 0.0 && params.exponent() < params.dim))
    throw Error(ErrorKind::InvalidExponent, "gamma must lie in (0, N)");
  if (init.grid().dim() != params.dim) throw Error(ErrorKind::GridMismatch, "init dimension mismatch");
  if (!(mass(init) > 0.0)) throw Error(ErrorKind::DegenerateInit, "zero initial field");
}

}  // namespace

PetviashviliResult petviashvili_solve(const ModelParams& params, double omega, const Field& init,
                                      const PetviashviliOptions& opts) {
  if (!(omega > 0.0)) throw Error(ErrorKind::InvalidParams, "omega must be positive");
  check_oracle_params(params, init);
  const double alpha = params.is_power() ? (params.exponent() + 1.0) / params.exponent() : 1.5;

  Field u = init;
  double prev = std::numeric_limits<double>::infinity();
  int growing = 0;
  for (int it = 0; it <= opts.max_iterations; ++it) {
    const Field W = nonlinear_potential(u, params);
    std::vector<cplx> fv(u.values());
    for (std::size_t i = 0; i < fv.size(); ++i) fv[i] *= W[i].real();
    const Field fu(u.grid_ptr(), std::move(fv));
    const Field Lu = fractional_laplacian(u, params.s);
    const double m = mass(u);
    const Field res = axpy(Lu - fu, omega, u);
    const double residual = std::sqrt(real_inner(res, res) / m);
    if (residual < opts.tol) return PetviashviliResult{u, omega, residual, it};
    if (residual > prev) {
      if (++growing >= opts.divergence_window)
        throw Error(ErrorKind::Diverged, "Petviashvili residual grew for " + std::to_string(growing) +
                                             " consecutive iterations");
    } else {
      growing = 0;
    }
    prev = residual;
    const double num = real_inner(u, Lu) + omega * m;
    const double den = real_inner(fu, u);
    if (!(den > 0.0)) throw Error(ErrorKind::Diverged, "stabilizing factor undefined (nonpositive pairing)");
    u = std::pow(num / den, alpha) * resolvent(fu, params.s, omega);
  }
  throw Error(ErrorKind::NotConverged,
              "Petviashvili did not reach tolerance in " + std::to_string(opts.max_iterations) + " iterations");
}

Field omega_scaling(const Field& u, double omega0, double omega1, const ModelParams& params) {
  const double rho = omega1 / omega0;
  const double s = params.s;
  const double amp = params.is_power() ? 1.0 / params.exponent()
                                       : 0.5 * (1.0 + (params.dim - params.exponent()) / (2.0 * s));
  return std::pow(rho, amp) * dilate(u, std::pow(rho, 1.0 / (2.0 * s)));
}

MassMatchedResult petviashvili_mass_matched(const ModelParams& params, double omega_guess, const Field& init,
                                            const PetviashviliOptions& opts, double mass_tol) {
  const double target = params.c;
  const double kappa = params.mass_omega_exponent();
  MassMatchedResult out{init};
  PetviashviliResult a = petviashvili_solve(params, omega_guess, init, opts);
  out.iterations += a.iterations;
  double la = std::log(a.omega), ma = std::log(mass(a.u));
  if (std::abs(mass(a.u) - target) / target < mass_tol) {
    out.u = a.u;
    out.omega = a.omega;
    out.mass_error = std::abs(mass(a.u) - target) / target;
    return out;
  }
  double lb = la + (std::log(target) - ma) / kappa;
  PetviashviliResult b = petviashvili_solve(params, std::exp(lb), omega_scaling(a.u, a.omega, std::exp(lb), params), opts);
  out.iterations += b.iterations;
  double mb = std::log(mass(b.u));
  out.secant_steps = 1;
  for (int k = 0; k < 40; ++k) {
    const double err = std::abs(std::exp(mb) - target) / target;
    if (err < mass_tol) {
      out.u = b.u;
      out.omega = b.omega;
      out.mass_error = err;
      return out;
    }
    double slope = (mb - ma) / (lb - la);
    if (!std::isfinite(slope) || slope == 0.0) slope = kappa;
    const double lc = lb + (std::log(target) - mb) / slope;
    PetviashviliResult c =
        petviashvili_solve(params, std::exp(lc), omega_scaling(b.u, b.omega, std::exp(lc), params), opts);
    out.iterations += c.iterations;
    la = lb;
    ma = mb;
    lb = lc;
    mb = std::log(mass(c.u));
    b = std::move(c);
    ++out.secant_steps;
  }
  throw Error(ErrorKind::NotConverged, "omega secant did not match the mass");
}

}  // namespace fnls
