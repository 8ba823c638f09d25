#pragma once

#include <string>
#include <variant>

#include "fnls/grid.hpp"

namespace fnls {

struct Power {
  double p;
};
struct Hartree {
  double gamma;
};
using Nonlinearity = std::variant<Power, Hartree>;

enum class ParamsMode { Variational, Dynamics };

// N, s, nonlinearity and mass level c. Construct through make_params.
struct ModelParams {
  int dim = 2;
  double s = 0.7;
  Nonlinearity kind = Power{2.0};
  double c = 1.0;

  bool is_power() const { return std::holds_alternative<Power>(kind); }
  double exponent() const;
  // E = hs/2 - energy_weight * nonlinear
  double energy_weight() const;
  // sigma with nonlinear(u^lambda) = lambda^sigma nonlinear(u): N p / 2 or gamma
  double dilation_degree() const;
  // Q = s hs - q_weight * nonlinear
  double q_weight() const { return dilation_degree() * energy_weight(); }
  // homogeneity degree of nonlinear in the amplitude: p + 2 or 4
  double amplitude_degree() const;
  // theta with m(c) = m(1) c^theta
  double mc_exponent() const;
  // length scale of the minimizer grows like c^length_exponent
  double length_exponent() const;
  // V-preserving map u_1 -> u_c: u_c(x) = c^amplitude_exponent u_1(c^{-length_exponent} x)
  double amplitude_exponent() const;
  // mass of the fixed-omega solution scales like omega^mass_omega_exponent
  double mass_omega_exponent() const;
  std::string describe() const;
};

ModelParams make_params(int dim, double s, Nonlinearity kind, double c, ParamsMode mode = ParamsMode::Variational);

// Non-throwing check; returns an empty string when valid, else the violated inequality.
std::string validate_params(const ModelParams& params, ParamsMode mode);

}  // namespace fnls
