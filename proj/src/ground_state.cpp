#include "fnls/ground_state.hpp"

#include <array>
#include <cmath>
#include <future>
#include <iostream>
#include <limits>

#include "fnls/error.hpp"
#include "fnls/random_fields.hpp"
#include "fnls/spectral.hpp"

namespace fnls {

namespace {

struct Evaluated {
  Field u;
  Field W;
  Field Lu;
  FunctionalReport r;
};

Evaluated evaluate(const Field& u, const ModelParams& params) {
  Field W = nonlinear_potential(u, params);
  Field Lu = fractional_laplacian(u, params.s);
  double nl = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) nl += W[i].real() * std::norm(u[i]);
  nl *= u.grid().cell_volume();
  FunctionalReport r = report_from_parts(mass(u), hs_seminorm_sq(u, params.s), nl, params);
  return Evaluated{u, std::move(W), std::move(Lu), r};
}

Field times_potential(const Field& u, const Field& W) {
  std::vector<cplx> v(u.values());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= W[i].real();
  return Field(u.grid_ptr(), std::move(v));
}

// Solve the symmetric 2x2 system; falls back to the first equation when singular.
std::array<double, 2> solve2(double a11, double a12, double a22, double b1, double b2) {
  const double det = a11 * a22 - a12 * a12;
  if (std::abs(det) <= 1e-14 * std::abs(a11 * a22)) return {b1 / a11, 0.0};
  return {(b1 * a22 - b2 * a12) / det, (a11 * b2 - a12 * b1) / det};
}

double l2_norm(const Field& f) { return std::sqrt(real_inner(f, f)); }

Field recenter(const Field& u) {
  const Grid& g = u.grid();
  std::vector<int> idx(static_cast<std::size_t>(g.dim()));
  g.unravel(argmax_density(u), idx.data());
  std::vector<int> shift(idx.size());
  for (std::size_t d = 0; d < idx.size(); ++d) shift[d] = g.points_per_dim() / 2 - idx[d];
  bool moved = false;
  for (int v : shift) moved = moved || v != 0;
  return moved ? roll(u, shift) : u;
}

}  // namespace

Field project_to_vc(const Field& u, const ModelParams& params) {
  Field v = normalize_mass(u, params.c);
  for (int it = 0; it < 8; ++it) {
    const FunctionalReport r = report(v, params);
    if (!(r.nonlinear > 0.0)) throw Error(ErrorKind::DegenerateInit, "field has no nonlinear energy");
    if (std::abs(r.q_value) <= 1e-13 * r.hs_sq) break;
    const double lambda = fibering_lambda(r.hs_sq, r.nonlinear, params);
    if (std::abs(lambda - 1.0) < 1e-14) break;
    v = normalize_mass(rescale(v, lambda), params.c);
  }
  return v;
}

double recover_omega_formula(double hs_sq, double c, const ModelParams& params) {
  const double N = params.dim;
  const double s = params.s;
  if (params.is_power()) {
    const double p = params.exponent();
    return (4.0 * s + 2.0 * p * s - p * N) * hs_sq / (N * p * c);
  }
  const double g = params.exponent();
  return (4.0 * s - g) * hs_sq / (g * c);
}

double euler_lagrange_residual(const Field& u, double omega, const ModelParams& params) {
  const Field Lu = fractional_laplacian(u, params.s);
  const Field fu = times_potential(u, nonlinear_potential(u, params));
  const Field res = axpy(Lu - fu, omega, u);
  return l2_norm(res) / (l2_norm(Lu) + std::abs(omega) * l2_norm(u) + l2_norm(fu));
}

double recover_omega(const Field& u, const ModelParams& params) {
  const FunctionalReport r = report(u, params);
  if (!(r.mass > 0.0)) throw Error(ErrorKind::ZeroField, "zero field");
  const double omega = recover_omega_formula(r.hs_sq, r.mass, params);
  const double res = euler_lagrange_residual(u, omega, params);
  if (!(res < 1e-3))
    throw Error(ErrorKind::NotCritical, "Euler-Lagrange residual " + std::to_string(res) + " exceeds 1e-3");
  return omega;
}

GroundStateResult minimize_on_vc(const ModelParams& params, const Field& init, const SolverOptions& opts) {
  if (!(mass(init) > 0.0)) throw Error(ErrorKind::DegenerateInit, "initial field has zero mass");
  if (init.grid().dim() != params.dim) throw Error(ErrorKind::GridMismatch, "init dimension mismatch");
  const double s = params.s;
  const double qw = params.q_weight() * params.amplitude_degree();

  Evaluated cur = evaluate(project_to_vc(init, params), params);
  GroundStateResult out{cur.u, params};
  double grad_norm = std::numeric_limits<double>::infinity();
  int it = 0;
  bool converged = false;
  for (; it <= opts.max_iterations; ++it) {
    const FunctionalReport r = cur.r;
    const Field Wu = times_potential(cur.u, cur.W);
    const Field g = cur.Lu - Wu;
    const Field gq = (2.0 * s) * cur.Lu - qw * Wu;

    // L2 projection of the gradient onto the tangent space of V(c)
    const double a11 = real_inner(cur.u, cur.u), a12 = real_inner(cur.u, gq), a22 = real_inner(gq, gq);
    const auto lc = solve2(a11, a12, a22, real_inner(cur.u, g), real_inner(gq, g));
    const Field resid = axpy(axpy(g, -lc[0], cur.u), -lc[1], gq);
    grad_norm = l2_norm(resid);
    const double q_res = std::abs(r.q_value) / r.hs_sq;
    if (opts.log_every > 0 && it % opts.log_every == 0)
      std::cerr << "iter " << it << " E " << r.energy << " |grad| " << grad_norm / std::sqrt(r.hs_sq) << " q "
                << q_res << "\n";
    if (grad_norm < opts.gradient_tol * std::sqrt(r.hs_sq) && q_res < opts.q_tol) {
      converged = true;
      break;
    }
    if (it == opts.max_iterations) break;

    // preconditioned direction, constrained to the same tangent space
    const double omega_est = (r.nonlinear - r.hs_sq) / r.mass;
    const double shift = omega_est > 0.0 ? omega_est : r.hs_sq / r.mass;
    const Field Pr = resolvent(resid, s, shift);
    const Field Pu = resolvent(cur.u, s, shift);
    const Field Pgq = resolvent(gq, s, shift);
    const auto co = solve2(real_inner(cur.u, Pu), real_inner(cur.u, Pgq), real_inner(gq, Pgq),
                           real_inner(cur.u, Pr), real_inner(gq, Pr));
    const Field d = -1.0 * axpy(axpy(Pr, -co[0], Pu), -co[1], Pgq);
    const double slope = real_inner(resid, d);
    if (!(slope < 0.0)) {
      if (opts.log_every > 0) std::cerr << "non-descent direction at iter " << it << "\n";
      break;
    }

    const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                         (0.5 * r.hs_sq + params.energy_weight() * r.nonlinear);
    double tau = opts.initial_step;
    bool accepted = false;
    for (int bt = 0; bt < opts.max_backtracks; ++bt, tau *= opts.backtrack) {
      Field trial = axpy(cur.u, tau, d);
      try {
        trial = project_to_vc(trial, params);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::ScalePrecisionLoss) continue;
        throw;
      }
      Evaluated next = evaluate(trial, params);
      if (next.r.energy <= r.energy + opts.armijo * tau * slope + noise) {
        cur = std::move(next);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (opts.log_every > 0) std::cerr << "line search failed at iter " << it << " slope " << slope << "\n";
      break;
    }
    if (opts.recenter_every > 0 && (it + 1) % opts.recenter_every == 0) cur = evaluate(recenter(cur.u), params);
  }

  const FunctionalReport& r = cur.r;
  out.u_c = cur.u;
  out.energy = r.energy;
  out.hs_sq = r.hs_sq;
  out.nonlinear = r.nonlinear;
  out.omega_c = recover_omega_formula(r.hs_sq, r.mass, params);
  out.omega_lagrange = (r.nonlinear - r.hs_sq) / r.mass;
  out.q_residual = std::abs(r.q_value) / r.hs_sq;
  out.pohozaev_residual = pohozaev_residual(r, out.omega_c, params);
  out.nehari_residual = nehari_residual(r, out.omega_c, params);
  out.gradient_norm = grad_norm;
  out.iterations = it;
  out.converged = converged && out.pohozaev_residual < 1e-6 && out.nehari_residual < 1e-6 && out.omega_c > 0.0;
  return out;
}

nlohmann::json to_json(const GroundStateResult& r) {
  nlohmann::json j;
  j["omega_c"] = r.omega_c;
  j["omega_lagrange"] = r.omega_lagrange;
  j["energy"] = r.energy;
  j["mass"] = mass(r.u_c);
  j["hs_sq"] = r.hs_sq;
  j["nonlinear"] = r.nonlinear;
  j["q_residual"] = r.q_residual;
  j["pohozaev_residual"] = r.pohozaev_residual;
  j["nehari_residual"] = r.nehari_residual;
  j["gradient_norm"] = r.gradient_norm;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["params"] = {{"dim", r.params.dim},
                 {"s", r.params.s},
                 {"kind", r.params.is_power() ? "power" : "hartree"},
                 {"exponent", r.params.exponent()},
                 {"c", r.params.c}};
  j["grid"] = {{"dim", r.u_c.grid().dim()},
               {"half_extent", r.u_c.grid().half_extent()},
               {"points_per_dim", r.u_c.grid().points_per_dim()}};
  return j;
}

GridPtr grid_for_mass(const Grid& reference, double reference_c, double c, const ModelParams& params,
                      GridPolicy policy) {
  if (policy == GridPolicy::Fixed)
    return make_grid(reference.dim(), reference.half_extent(), reference.points_per_dim());
  const double L = reference.half_extent() * std::pow(c / reference_c, params.length_exponent());
  return make_grid(reference.dim(), L, reference.points_per_dim());
}

Field v_preserving_scale(const Field& u0, double c0, double c1, const ModelParams& params, GridPtr target) {
  const double ratio = c1 / c0;
  const double amp = std::pow(ratio, params.amplitude_exponent());
  const double len = std::pow(ratio, params.length_exponent());
  const Grid& src = u0.grid();
  if (target->dim() != src.dim() || target->points_per_dim() != src.points_per_dim())
    throw Error(ErrorKind::GridMismatch, "target grid shape differs");
  const double stretch = target->half_extent() / src.half_extent();
  // u1(x) = amp * u0(x / len); on the target grid x = stretch * x_src
  const double lambda = stretch / len;
  Field resampled = std::abs(lambda - 1.0) < 1e-14 ? u0 : dilate(u0, lambda);
  return Field(target, (amp * resampled).values());
}

McCurve mc_curve(const ModelParams& tmpl, GridPtr reference_grid, const std::vector<double>& c_list,
                 const McCurveOptions& opts) {
  if (c_list.empty()) throw Error(ErrorKind::InvalidParams, "empty c list");
  for (std::size_t i = 0; i < c_list.size(); ++i) {
    if (!(c_list[i] > 0.0)) throw Error(ErrorKind::InvalidParams, "c values must be positive");
    if (i > 0 && !(c_list[i] > c_list[i - 1]))
      throw Error(ErrorKind::InvalidParams, "c list must be sorted strictly ascending");
  }
  auto solve_one = [&](double c, const Field* warm, double warm_c) {
    ModelParams params = tmpl;
    params.c = c;
    GridPtr grid = grid_for_mass(*reference_grid, opts.reference_c, c, params, opts.policy);
    Field init = warm ? v_preserving_scale(*warm, warm_c, c, params, grid)
                      : gaussian(grid, opts.init_width_fraction * grid->half_extent());
    return minimize_on_vc(params, init, opts.solver);
  };

  McCurve curve;
  curve.results.reserve(c_list.size());
  if (opts.warm_start) {
    for (std::size_t i = 0; i < c_list.size(); ++i) {
      if (i == 0)
        curve.results.push_back(solve_one(c_list[i], nullptr, 0.0));
      else
        curve.results.push_back(solve_one(c_list[i], &curve.results.back().u_c, c_list[i - 1]));
    }
  } else {
    const std::size_t workers = static_cast<std::size_t>(std::max(1, opts.threads));
    std::vector<std::optional<GroundStateResult>> slots(c_list.size());
    for (std::size_t start = 0; start < c_list.size(); start += workers) {
      std::vector<std::future<GroundStateResult>> jobs;
      for (std::size_t i = start; i < std::min(c_list.size(), start + workers); ++i)
        jobs.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred,
                                  [&, i] { return solve_one(c_list[i], nullptr, 0.0); }));
      for (std::size_t k = 0; k < jobs.size(); ++k) slots[start + k] = jobs[k].get();
    }
    for (auto& s : slots) curve.results.push_back(std::move(*s));
  }
  for (std::size_t i = 0; i < c_list.size(); ++i) {
    const GroundStateResult& r = curve.results[i];
    McCurvePoint pt;
    pt.c = c_list[i];
    pt.m = r.energy;
    pt.omega = r.omega_c;
    pt.hs_sq = r.hs_sq;
    pt.q_residual = r.q_residual;
    pt.pohozaev_residual = r.pohozaev_residual;
    pt.converged = r.converged;
    pt.iterations = r.iterations;
    pt.half_extent = r.u_c.grid().half_extent();
    curve.points.push_back(pt);
  }
  return curve;
}

double fit_exponent(const std::vector<double>& c, const std::vector<double>& m) {
  const std::size_t n = c.size();
  if (n < 2 || m.size() != n) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(c[i]), y = std::log(std::abs(m[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

AsymptoticsReport asymptotics_probe(const ModelParams& tmpl, GridPtr reference_grid, double c_small,
                                    double c_large, const McCurveOptions& opts) {
  if (!(c_small < c_large)) throw Error(ErrorKind::InvalidParams, "c_small must be below c_large");
  McCurveOptions o = opts;
  o.warm_start = false;
  const McCurve curve = mc_curve(tmpl, reference_grid, {c_small, c_large}, o);
  const double N = tmpl.dim;
  const double s = tmpl.s;
  double k_hs, k_omega;
  if (tmpl.is_power()) {
    const double p = tmpl.exponent();
    k_hs = 2.0 * N * p / (N * p - 4.0 * s);
    k_omega = (2.0 * s * (p + 2.0) - N * p) / (N * p);
  } else {
    const double g = tmpl.exponent();
    k_hs = 2.0 * g / (g - 2.0 * s);
    k_omega = (4.0 * s - g) / g;
  }
  auto row = [&](const McCurvePoint& pt) {
    AsymptoticsRow r;
    r.c = pt.c;
    r.m = pt.m;
    r.omega = pt.omega;
    r.hs_sq = pt.hs_sq;
    r.hs_identity_error = std::abs(pt.hs_sq - k_hs * pt.m) / pt.hs_sq;
    r.omega_identity_error = std::abs(pt.omega * pt.c - k_omega * pt.hs_sq) / std::abs(pt.omega * pt.c);
    r.converged = pt.converged;
    return r;
  };
  AsymptoticsReport rep;
  rep.small = row(curve.points[0]);
  rep.large = row(curve.points[1]);
  rep.hs_decreases = rep.small.hs_sq > rep.large.hs_sq;
  rep.omega_decreases = rep.small.omega > rep.large.omega;
  rep.energy_decreases = rep.small.m > rep.large.m;
  rep.energy_positive = rep.large.m > 0.0;
  rep.max_identity_error = std::max({rep.small.hs_identity_error, rep.small.omega_identity_error,
                                     rep.large.hs_identity_error, rep.large.omega_identity_error});
  return rep;
}

}  // namespace fnls
