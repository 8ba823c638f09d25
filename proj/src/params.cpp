#include "fnls/params.hpp"

#include <cmath>
#include <sstream>

#include "fnls/error.hpp"
#include "fnls/log.hpp"

namespace fnls {

double ModelParams::exponent() const {
  return is_power() ? std::get<Power>(kind).p : std::get<Hartree>(kind).gamma;
}

double ModelParams::energy_weight() const { return is_power() ? 1.0 / (exponent() + 2.0) : 0.25; }

double ModelParams::dilation_degree() const { return is_power() ? 0.5 * dim * exponent() : exponent(); }

double ModelParams::amplitude_degree() const { return is_power() ? exponent() + 2.0 : 4.0; }

double ModelParams::mc_exponent() const {
  const double N = dim;
  if (is_power()) {
    const double p = exponent();
    return (N * p - 2.0 * p * s - 4.0 * s) / (N * p - 4.0 * s);
  }
  const double g = exponent();
  return -(4.0 * s - g) / (g - 2.0 * s);
}

double ModelParams::length_exponent() const {
  if (is_power()) {
    const double p = exponent();
    return p / (dim * p - 4.0 * s);
  }
  return 1.0 / (exponent() - 2.0 * s);
}

double ModelParams::amplitude_exponent() const {
  if (is_power()) return -2.0 * s / (dim * exponent() - 4.0 * s);
  const double g = exponent();
  return -(2.0 * s + dim - g) / (2.0 * (g - 2.0 * s));
}

double ModelParams::mass_omega_exponent() const {
  if (is_power()) return 2.0 / exponent() - dim / (2.0 * s);
  return 1.0 - exponent() / (2.0 * s);
}

std::string ModelParams::describe() const {
  std::ostringstream os;
  os << "N=" << dim << " s=" << s << (is_power() ? " p=" : " gamma=") << exponent() << " c=" << c;
  return os.str();
}

std::string validate_params(const ModelParams& params, ParamsMode mode) {
  std::ostringstream os;
  const double N = params.dim;
  const double s = params.s;
  if (params.dim < 1) return "dimension N >= 1 required";
  if (!(s > 0.0 && s < 1.0)) {
    os << "0 < s < 1 violated (s = " << s << ")";
    return os.str();
  }
  if (!(params.c > 0.0) || !std::isfinite(params.c)) {
    os << "mass level c > 0 violated (c = " << params.c << ")";
    return os.str();
  }
  if (params.is_power()) {
    const double p = params.exponent();
    if (!(p > 4.0 * s / N)) {
      os << "p > 4s/N violated: p = " << p << ", 4s/N = " << 4.0 * s / N;
      return os.str();
    }
    if (N > 2.0 * s && !(p < 4.0 * s / (N - 2.0 * s))) {
      os << "p < 4s/(N-2s) violated: p = " << p << ", 4s/(N-2s) = " << 4.0 * s / (N - 2.0 * s);
      return os.str();
    }
  } else {
    const double g = params.exponent();
    const double upper = std::min(N, 4.0 * s);
    if (!(g > 2.0 * s && g < upper)) {
      os << "2s < gamma < min{N, 4s} violated: gamma = " << g << ", 2s = " << 2.0 * s << ", min{N, 4s} = " << upper;
      return os.str();
    }
  }
  if (mode == ParamsMode::Dynamics) {
    if (params.dim < 2) return "dynamics requires N >= 2";
    if (!(s >= N / (2.0 * N - 1.0))) {
      os << "dynamics requires s >= N/(2N-1): s = " << s << ", N/(2N-1) = " << N / (2.0 * N - 1.0);
      return os.str();
    }
  }
  return {};
}

ModelParams make_params(int dim, double s, Nonlinearity kind, double c, ParamsMode mode) {
  ModelParams params{dim, s, kind, c};
  const std::string problem = validate_params(params, mode);
  if (!problem.empty()) throw Error(ErrorKind::InvalidParams, problem);
  if (params.is_power() && dim <= 2.0 * s)
    warn("window", "N <= 2s, upper bound on p treated as +infinity");
  return params;
}

}  // namespace fnls
