#include "fnls/functionals.hpp"

#include <cmath>
#include <cstdio>

#include "fnls/error.hpp"
#include "fnls/log.hpp"
#include "fnls/riesz.hpp"
#include "fnls/spectral.hpp"

namespace fnls {

namespace {

void check_compatible(const Field& u, const ModelParams& params) {
  if (u.grid().dim() != params.dim)
    throw Error(ErrorKind::GridMismatch, "field dimension does not match model dimension");
}

void require_nonzero(const FunctionalReport& r) {
  if (!(r.mass > 0.0)) throw Error(ErrorKind::ZeroField, "zero field");
}

}  // namespace

Field nonlinear_potential(const Field& u, const ModelParams& params) {
  check_compatible(u, params);
  std::vector<cplx> dens(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) dens[i] = std::norm(u[i]);
  if (params.is_power()) {
    const double half_p = 0.5 * params.exponent();
    for (cplx& v : dens) v = v.real() > 0.0 ? std::pow(v.real(), half_p) : 0.0;
    return Field(u.grid_ptr(), std::move(dens));
  }
  return riesz_convolve(Field(u.grid_ptr(), std::move(dens)), params.exponent());
}

FunctionalReport report_from_parts(double mass_value, double hs_sq, double nonlinear, const ModelParams& params) {
  FunctionalReport r;
  r.mass = mass_value;
  r.hs_sq = hs_sq;
  r.nonlinear = nonlinear;
  r.energy = 0.5 * hs_sq - params.energy_weight() * nonlinear;
  r.q_value = params.s * hs_sq - params.q_weight() * nonlinear;
  return r;
}

FunctionalReport report(const Field& u, const ModelParams& params) {
  check_compatible(u, params);
  const Field W = nonlinear_potential(u, params);
  double nl = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) nl += W[i].real() * std::norm(u[i]);
  nl *= u.grid().cell_volume();
  return report_from_parts(mass(u), hs_seminorm_sq(u, params.s), nl, params);
}

nlohmann::json to_json(const FunctionalReport& r, const ModelParams& params) {
  nlohmann::json j;
  j["mass"] = r.mass;
  j["hs_sq"] = r.hs_sq;
  j["nonlinear"] = r.nonlinear;
  j["energy"] = r.energy;
  j["q_value"] = r.q_value;
  j["params"] = {{"dim", params.dim},
                 {"s", params.s},
                 {"kind", params.is_power() ? "power" : "hartree"},
                 {"exponent", params.exponent()},
                 {"c", params.c}};
  return j;
}

Field rescale(const Field& u, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::InvalidParams, "lambda must be positive");
  if (lambda == 1.0) return u;
  const double m0 = mass(u);
  Field out = std::pow(lambda, 0.5 * u.grid().dim()) * dilate(u, lambda);
  if (m0 > 0.0) {
    const double drift = std::abs(mass(out) - m0) / m0;
    if (drift > 1e-6)
      throw Error(ErrorKind::ScalePrecisionLoss,
                  "rescale by " + std::to_string(lambda) + " changed the mass by " + std::to_string(drift));
    if (drift > 1e-8) {
      char msg[96];
      std::snprintf(msg, sizeof(msg), "rescale mass drift %.3g at lambda %.6g", drift, lambda);
      warn("rescale", msg);
    }
  }
  return out;
}

double fibering_energy(double hs_sq, double nonlinear, double lambda, const ModelParams& params) {
  return 0.5 * std::pow(lambda, 2.0 * params.s) * hs_sq -
         params.energy_weight() * std::pow(lambda, params.dilation_degree()) * nonlinear;
}

double fibering_lambda(double hs_sq, double nonlinear, const ModelParams& params) {
  if (!(hs_sq > 0.0) || !(nonlinear > 0.0)) throw Error(ErrorKind::ZeroField, "fibering needs a nonzero field");
  const double sigma = params.dilation_degree();
  return std::pow(params.s * hs_sq / (params.q_weight() * nonlinear), 1.0 / (sigma - 2.0 * params.s));
}

double fibering_max_closed_form(double hs_sq, double nonlinear, const ModelParams& params) {
  const double N = params.dim;
  const double s = params.s;
  if (params.is_power()) {
    const double p = params.exponent();
    const double d = N * p - 4.0 * s;
    return (d / (2.0 * N * p)) * std::pow(2.0 * s * (p + 2.0) / (N * p), 4.0 * s / d) *
           std::pow(hs_sq, N * p / d) / std::pow(nonlinear, 4.0 * s / d);
  }
  const double g = params.exponent();
  const double d = g - 2.0 * s;
  return ((g - 2.0 * s) / (2.0 * g)) * std::pow(4.0 * s / g, 2.0 * s / d) * std::pow(hs_sq, g / d) /
         std::pow(nonlinear, 2.0 * s / d);
}

FiberingPoint fibering_maximizer(const Field& u, const ModelParams& params) {
  const FunctionalReport r = report(u, params);
  require_nonzero(r);
  FiberingPoint fp;
  fp.lambda0 = fibering_lambda(r.hs_sq, r.nonlinear, params);
  fp.energy_at_max = fibering_energy(r.hs_sq, r.nonlinear, fp.lambda0, params);
  return fp;
}

double pohozaev_residual(const FunctionalReport& r, double omega, const ModelParams& params) {
  require_nonzero(r);
  const double N = params.dim;
  const double s = params.s;
  const double nl_coef = params.is_power() ? 2.0 * N / (params.exponent() + 2.0) : 0.5 * (2.0 * N - params.exponent());
  const double num = (N - 2.0 * s) * r.hs_sq + N * omega * r.mass - nl_coef * r.nonlinear;
  const double den = r.hs_sq + std::abs(omega) * r.mass + r.nonlinear;
  return std::abs(num) / den;
}

double pohozaev_residual(const Field& u, double omega, const ModelParams& params) {
  return pohozaev_residual(report(u, params), omega, params);
}

double nehari_residual(const FunctionalReport& r, double omega, const ModelParams& params) {
  (void)params;
  require_nonzero(r);
  const double num = r.hs_sq + omega * r.mass - r.nonlinear;
  const double den = r.hs_sq + std::abs(omega) * r.mass + r.nonlinear;
  return std::abs(num) / den;
}

double nehari_residual(const Field& u, double omega, const ModelParams& params) {
  return nehari_residual(report(u, params), omega, params);
}

double action(const FunctionalReport& r, double omega) { return r.energy + 0.5 * omega * r.mass; }

double action(const Field& u, double omega, const ModelParams& params) { return action(report(u, params), omega); }

double gn_ratio(const FunctionalReport& r, const ModelParams& params) {
  require_nonzero(r);
  const double N = params.dim;
  const double s = params.s;
  if (params.is_power()) {
    const double p = params.exponent();
    return r.nonlinear /
           (std::pow(r.hs_sq, N * p / (4.0 * s)) * std::pow(r.mass, ((p + 2.0) - p * N / (2.0 * s)) / 2.0));
  }
  const double g = params.exponent();
  return r.nonlinear / (std::pow(r.hs_sq, g / (2.0 * s)) * std::pow(r.mass, (4.0 * s - g) / (2.0 * s)));
}

double gn_ratio(const Field& u, const ModelParams& params) { return gn_ratio(report(u, params), params); }

}  // namespace fnls
