#pragma once

#include <json.hpp>

#include "fnls/field.hpp"
#include "fnls/params.hpp"

namespace fnls {

struct FunctionalReport {
  double mass = 0.0;
  double hs_sq = 0.0;
  double nonlinear = 0.0;  // int |u|^{p+2}  or  D(u) = int (|x|^{-gamma} * |u|^2) |u|^2
  double energy = 0.0;
  double q_value = 0.0;
};

struct FiberingPoint {
  double lambda0 = 1.0;
  double energy_at_max = 0.0;
};

// Real potential W with f(u) = W u: |u|^p or |x|^{-gamma} * |u|^2.
Field nonlinear_potential(const Field& u, const ModelParams& params);

FunctionalReport report(const Field& u, const ModelParams& params);
// Fills energy and q_value from the three primitive integrals.
FunctionalReport report_from_parts(double mass, double hs_sq, double nonlinear, const ModelParams& params);
nlohmann::json to_json(const FunctionalReport& r, const ModelParams& params);

// u^lambda(x) = lambda^{N/2} u(lambda x) by spectral resampling.
Field rescale(const Field& u, double lambda);

// g(lambda) = E(u^lambda) from the scaling laws of the three integrals.
double fibering_energy(double hs_sq, double nonlinear, double lambda, const ModelParams& params);
double fibering_lambda(double hs_sq, double nonlinear, const ModelParams& params);
double fibering_max_closed_form(double hs_sq, double nonlinear, const ModelParams& params);
FiberingPoint fibering_maximizer(const Field& u, const ModelParams& params);

double pohozaev_residual(const FunctionalReport& r, double omega, const ModelParams& params);
double pohozaev_residual(const Field& u, double omega, const ModelParams& params);
double nehari_residual(const FunctionalReport& r, double omega, const ModelParams& params);
double nehari_residual(const Field& u, double omega, const ModelParams& params);

// J_omega = E + omega/2 * mass
double action(const FunctionalReport& r, double omega);
double action(const Field& u, double omega, const ModelParams& params);

double gn_ratio(const FunctionalReport& r, const ModelParams& params);
double gn_ratio(const Field& u, const ModelParams& params);

}  // namespace fnls
