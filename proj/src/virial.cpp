#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "fnls/dynamics.hpp"
#include "fnls/error.hpp"
#include "fnls/spectral.hpp"

namespace fnls {

namespace {

double smoothstep(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
double smoothstep_d1(double t) { return 30.0 * t * t * (1.0 - t) * (1.0 - t); }

constexpr double kInner = 1.0;
constexpr double kOuter = 10.0;
constexpr double kWidth = kOuter - kInner;

}  // namespace

double cutoff_dphi(double r) {
  if (r <= kInner) return 2.0 * r;
  if (r >= kOuter) return 0.0;
  return 2.0 * r * (1.0 - smoothstep((r - kInner) / kWidth));
}

double cutoff_d2phi(double r) {
  if (r <= kInner) return 2.0;
  if (r >= kOuter) return 0.0;
  const double t = (r - kInner) / kWidth;
  return 2.0 * (1.0 - smoothstep(t)) - 2.0 * r * smoothstep_d1(t) / kWidth;
}

double cutoff_phi(double r) {
  if (r <= kInner) return r * r;
  const double b = std::min(r, kOuter);
  // polynomial of degree 6 on [1, b]: exact with 7 nodes
  return 1.0 + boost::math::quadrature::gauss<double, 7>::integrate([](double x) { return cutoff_dphi(x); }, kInner, b);
}

CutoffTable build_cutoff(GridPtr grid, double R) {
  if (!(R > 0.0)) throw Error(ErrorKind::InvalidParams, "cutoff radius must be positive");
  if (!(10.0 * R < grid->half_extent()))
    throw Error(ErrorKind::CutoffTooLarge, "10R = " + std::to_string(10.0 * R) + " does not fit in L = " +
                                               std::to_string(grid->half_extent()));
  const int N = grid->dim();
  CutoffTable tab;
  tab.grid = grid;
  tab.R = R;
  const std::size_t n = grid->size();
  tab.radius.resize(n);
  tab.phi.resize(n);
  tab.dphi.resize(n);
  tab.d2phi.resize(n);
  tab.laplacian.resize(n);
  tab.grad.assign(static_cast<std::size_t>(N), std::vector<double>(n));
  std::vector<int> idx(static_cast<std::size_t>(N));
  std::vector<double> x(static_cast<std::size_t>(N));
  for (std::size_t k = 0; k < n; ++k) {
    grid->unravel(k, idx.data());
    double r2 = 0.0;
    for (int d = 0; d < N; ++d) {
      x[static_cast<std::size_t>(d)] = grid->coordinate(idx[static_cast<std::size_t>(d)]);
      r2 += x[static_cast<std::size_t>(d)] * x[static_cast<std::size_t>(d)];
    }
    const double r = std::sqrt(r2);
    const double rho = r / R;
    tab.radius[k] = r;
    tab.phi[k] = R * R * cutoff_phi(rho);
    tab.dphi[k] = R * cutoff_dphi(rho);
    tab.d2phi[k] = cutoff_d2phi(rho);
    // phi_R'(r)/r, with the limit 2 at the origin
    const double over_r = rho <= kInner ? 2.0 : cutoff_dphi(rho) / rho;
    tab.laplacian[k] = tab.d2phi[k] + (N - 1) * over_r;
    for (int d = 0; d < N; ++d) tab.grad[static_cast<std::size_t>(d)][k] = over_r * x[static_cast<std::size_t>(d)];
  }
  return tab;
}

double virial_action(const Field& psi, const CutoffTable& cutoff) {
  require_same_grid(psi.grid(), *cutoff.grid);
  const auto grads = gradient(psi);
  double acc = 0.0;
  for (std::size_t d = 0; d < grads.size(); ++d) {
    const auto& gd = cutoff.grad[d];
    const auto& dpsi = grads[d];
    for (std::size_t k = 0; k < psi.size(); ++k) acc += gd[k] * (std::conj(psi[k]) * dpsi[k]).imag();
  }
  return 2.0 * acc * psi.grid().cell_volume();
}

std::vector<double> centered_derivative(const std::vector<double>& t, const std::vector<double>& y) {
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double h1 = t[i] - t[i - 1], h2 = t[i + 1] - t[i];
    out.push_back(-h2 / (h1 * (h1 + h2)) * y[i - 1] + (h2 - h1) / (h1 * h2) * y[i] + h1 / (h2 * (h1 + h2)) * y[i + 1]);
  }
  return out;
}

VirialEstimateReport virial_estimate_check(const std::vector<TrajectorySample>& trajectory, double R,
                                           double epsilon, const ModelParams& params) {
  if (!params.is_power()) throw Error(ErrorKind::InvalidParams, "virial estimate is stated for the power case");
  const double N = params.dim, s = params.s, p = params.exponent();
  VirialEstimateReport rep;
  rep.R = R;
  rep.epsilon = epsilon;
  std::vector<double> t, m;
  for (const auto& smp : trajectory) {
    t.push_back(smp.t);
    m.push_back(smp.m_virial);
  }
  const std::vector<double> dm = centered_derivative(t, m);
  const double hs_power = p / (4.0 * s) + 0.5 * epsilon;
  auto remainder = [&](double radius, double hs) {
    return std::pow(radius, -2.0 * s) + std::pow(radius, -p * (N - 1.0) / 2.0 + epsilon * s) * std::pow(hs, hs_power);
  };
  double cmin = 0.0;
  for (std::size_t i = 0; i < dm.size(); ++i) {
    const TrajectorySample& smp = trajectory[i + 1];
    const double nl = (0.5 * smp.hs_sq - smp.energy) / params.energy_weight();
    const double base = 4.0 * s * smp.hs_sq - 2.0 * N * p / (p + 2.0) * nl;
    const double rem = remainder(R, smp.hs_sq);
    rep.t.push_back(smp.t);
    rep.dmdt.push_back(dm[i]);
    rep.four_q.push_back(base);
    rep.remainder.push_back(rem);
    rep.remainder_2r.push_back(remainder(2.0 * R, smp.hs_sq));
    cmin = std::max(cmin, (dm[i] - base) / rem);
  }
  rep.c_min = cmin;
  int ok = 0;
  for (std::size_t i = 0; i < rep.dmdt.size(); ++i) {
    const double rhs = rep.four_q[i] + cmin * rep.remainder[i];
    if (rep.dmdt[i] <= rhs + 1e-12 * std::abs(rhs)) ++ok;
  }
  rep.fraction_satisfied = rep.dmdt.empty() ? 0.0 : static_cast<double>(ok) / rep.dmdt.size();
  return rep;
}

VirialIdentityReport virial_identity_check(const std::vector<TrajectorySample>& trajectory, double tail_threshold) {
  VirialIdentityReport rep;
  std::vector<double> t, m;
  for (const auto& smp : trajectory) {
    t.push_back(smp.t);
    m.push_back(smp.m_virial);
  }
  const std::vector<double> dm = centered_derivative(t, m);
  for (std::size_t i = 0; i < dm.size(); ++i) {
    const TrajectorySample& smp = trajectory[i + 1];
    const double eq = 8.0 * smp.q_value;
    const double err = std::abs(dm[i] - eq) / std::abs(eq);
    // the gate needs the neighbours inside the region too
    bool gate = true;
    for (std::size_t k = i; k <= i + 2; ++k) gate = gate && trajectory[k].tail_mass < tail_threshold;
    rep.t.push_back(smp.t);
    rep.dmdt.push_back(dm[i]);
    rep.eight_q.push_back(eq);
    rep.rel_error.push_back(err);
    rep.gated.push_back(gate);
    if (gate) {
      ++rep.gated_count;
      rep.max_gated_error = std::max(rep.max_gated_error, err);
    }
  }
  return rep;
}

}  // namespace fnls
