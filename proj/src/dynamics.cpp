#include "fnls/dynamics.hpp"

#include <cmath>

#include "fft.hpp"
#include "fnls/error.hpp"
#include "fnls/functionals.hpp"
#include "fnls/spectral.hpp"

namespace fnls {

namespace {

Field phase_rotate(const Field& psi, const Field& W, double angle) {
  std::vector<cplx> v(psi.values());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= std::polar(1.0, angle * W[i].real());
  return Field(psi.grid_ptr(), std::move(v));
}

double nonlinear_integral(const Field& psi, const Field& W) {
  double nl = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) nl += W[i].real() * std::norm(psi[i]);
  return nl * psi.grid().cell_volume();
}

}  // namespace

const std::vector<cplx>& StrangIntegrator::propagator(const Grid& g, double dt) {
  auto it = propagators_.find(dt);
  if (it != propagators_.end() && it->second.size() == g.size()) return it->second;
  if (propagators_.size() > 6) propagators_.clear();
  const auto& sym = symbol_power(g, params_.s);
  std::vector<cplx> prop(sym.size());
  const double scale = 1.0 / static_cast<double>(g.size());
  for (std::size_t i = 0; i < sym.size(); ++i) prop[i] = std::polar(scale, -dt * sym[i]);
  return propagators_[dt] = std::move(prop);
}

Field StrangIntegrator::linear_flow(const Field& psi, double dt) {
  const Grid& g = psi.grid();
  const auto& prop = propagator(g, dt);
  std::vector<cplx> buf(psi.values());
  detail::fft_inplace(g.dim(), g.points_per_dim(), buf.data(), -1);
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= prop[i];
  detail::fft_inplace(g.dim(), g.points_per_dim(), buf.data(), +1);
  return Field(psi.grid_ptr(), std::move(buf));
}

Field StrangIntegrator::step(const Field& psi, const Field& W, double dt, Field* W_out) {
  const Field half = phase_rotate(psi, W, 0.5 * dt);
  const Field lin = linear_flow(half, dt);
  Field W2 = nonlinear_potential(lin, params_);
  Field out = phase_rotate(lin, W2, 0.5 * dt);
  if (W_out) *W_out = std::move(W2);
  return out;
}

Field strang_step(const Field& psi, double dt, const ModelParams& params) {
  if (!(dt != 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::InvalidParams, "dt must be nonzero and finite");
  StrangIntegrator integrator(params);
  return integrator.step(psi, nonlinear_potential(psi, params), dt, nullptr);
}

std::string to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Global: return "Global";
    case VerdictKind::BlowUp: return "BlowUp";
    case VerdictKind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

nlohmann::json to_json(const Verdict& v) {
  return {{"verdict", to_string(v.kind)}, {"t_detect", v.t_detect}, {"trigger", v.trigger}, {"threshold", v.threshold}};
}

EvolveOutcome evolve(const Field& psi0, const ModelParams& params, double horizon, const EvolveOptions& opts) {
  if (!(horizon > 0.0)) throw Error(ErrorKind::InvalidParams, "horizon must be positive");
  if (!(opts.dt > 0.0)) throw Error(ErrorKind::InvalidParams, "dt must be positive");
  const std::string problem = validate_params(params, ParamsMode::Dynamics);
  if (!problem.empty()) throw Error(ErrorKind::InvalidParams, problem);

  std::optional<CutoffTable> cutoff;
  if (opts.virial_R) cutoff = build_cutoff(psi0.grid_ptr(), *opts.virial_R);

  StrangIntegrator integrator(params);
  EvolveOutcome out{Verdict{}, {}, psi0};
  Field psi = psi0;
  Field W = nonlinear_potential(psi, params);
  const double weight = params.energy_weight();

  auto make_sample = [&](double t, double hs, double nl, double dt) {
    TrajectorySample smp;
    smp.t = t;
    smp.mass = mass(psi);
    smp.hs_sq = hs;
    const FunctionalReport r = report_from_parts(smp.mass, hs, nl, params);
    smp.energy = r.energy;
    smp.q_value = r.q_value;
    smp.dt = dt;
    if (cutoff) {
      smp.m_virial = virial_action(psi, *cutoff);
      smp.tail_mass = mass_beyond(psi, 0.5 * cutoff->R);
    }
    if (opts.record_hartree_variance) smp.hartree_variance = hartree_variance(psi, params.s);
    smp.shell_fraction = shell_mass_fraction(psi, opts.guard_shell);
    return smp;
  };
  auto record = [&](const TrajectorySample& smp) {
    out.trajectory.push_back(smp);
    if (opts.on_sample) opts.on_sample(psi, smp);
  };

  double hs = hs_seminorm_sq(psi, params.s);
  double nl = nonlinear_integral(psi, W);
  const double hs0 = hs;
  const double e_scale = 0.5 * hs + weight * nl;
  double energy = 0.5 * hs - weight * nl;
  double dt = opts.dt;
  double t = 0.0;
  const TrajectorySample first = make_sample(0.0, hs, nl, dt);
  const double shell0 = first.shell_fraction;
  record(first);

  long step = 0;
  int quiet = 0;
  while (t < horizon * (1.0 - 1e-14)) {
    const double h = std::min(dt, horizon - t);
    Field W_next = W;
    Field next = psi;
    double hs_next, nl_next;
    try {
      next = integrator.step(psi, W, h, &W_next);
      hs_next = hs_seminorm_sq(next, params.s);
      nl_next = nonlinear_integral(next, W_next);
      if (!std::isfinite(hs_next) || !std::isfinite(nl_next)) throw Error(ErrorKind::NonFiniteField, "non-finite norms");
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonFiniteField) throw;
      out.verdict = Verdict{VerdictKind::Inconclusive, t, "non_finite", 0.0};
      break;
    }
    const double e_next = 0.5 * hs_next - weight * nl_next;
    const double drift = std::abs(e_next - energy) / e_scale;
    if (drift > opts.energy_tol) {
      dt *= 0.5;
      ++out.halvings;
      quiet = 0;
      if (dt < opts.dt_min) {
        out.verdict = Verdict{VerdictKind::BlowUp, t, "dt_underflow", opts.dt_min};
        record(make_sample(t, hs, nl, dt));
        break;
      }
      continue;
    }
    out.max_step_energy_drift = std::max(out.max_step_energy_drift, drift);
    psi = std::move(next);
    W = std::move(W_next);
    hs = hs_next;
    nl = nl_next;
    energy = e_next;
    t += h;
    ++step;
    if (opts.regrow_dt && dt < opts.dt) {
      if (drift < opts.energy_tol / 8.0) {
        if (++quiet >= 16) {
          dt = std::min(opts.dt, 2.0 * dt);
          quiet = 0;
        }
      } else {
        quiet = 0;
      }
    }

    if (hs > opts.blowup_factor * hs0) {
      record(make_sample(t, hs, nl, dt));
      out.verdict = Verdict{VerdictKind::BlowUp, t, "hs_norm_exceeded", opts.blowup_factor};
      break;
    }
    const bool due = step % std::max(1, opts.sample_every) == 0;
    const bool last = t >= horizon * (1.0 - 1e-14);
    if (due || last || opts.boundary_guard) {
      const TrajectorySample smp = make_sample(t, hs, nl, dt);
      if (opts.boundary_guard && smp.shell_fraction > shell0 + opts.guard_threshold) {
        record(smp);
        out.verdict = Verdict{VerdictKind::Inconclusive, t, "boundary_contamination", opts.guard_threshold};
        break;
      }
      if (due || last) record(smp);
    }
    if (last) out.verdict = Verdict{VerdictKind::Global, t, "horizon_reached", horizon};
  }
  out.final_state = psi;
  out.steps = step;
  return out;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& samples) {
  os << "t,mass,energy,q,hs_sq,m_virial,hartree_variance,dt\n";
  os.precision(17);
  for (const auto& s : samples) {
    os << s.t << ',' << s.mass << ',' << s.energy << ',' << s.q_value << ',' << s.hs_sq << ',';
    if (std::isfinite(s.m_virial)) os << s.m_virial;
    os << ',';
    if (std::isfinite(s.hartree_variance)) os << s.hartree_variance;
    os << ',' << s.dt << '\n';
  }
}

std::string to_string(SetClass c) {
  switch (c) {
    case SetClass::InA: return "InA";
    case SetClass::InB: return "InB";
    case SetClass::Indeterminate: return "Indeterminate";
  }
  return "?";
}

Classification classify(const Field& psi0, const ModelParams& params, double m_c, const ClassifyTolerances& tol) {
  const FunctionalReport r = report(psi0, params);
  Classification c;
  c.q_value = r.q_value;
  c.energy = r.energy;
  c.m_c = m_c;
  c.delta_q = tol.q_rel * r.hs_sq;
  c.delta_e = tol.e_rel * std::abs(m_c);
  const bool below = r.energy < m_c - c.delta_e;
  if (below && r.q_value > c.delta_q)
    c.kind = SetClass::InA;
  else if (below && r.q_value < -c.delta_q)
    c.kind = SetClass::InB;
  else
    c.kind = SetClass::Indeterminate;
  return c;
}

double mass_beyond(const Field& psi, double radius) {
  const Grid& g = psi.grid();
  std::vector<int> idx(static_cast<std::size_t>(g.dim()));
  double acc = 0.0;
  for (std::size_t n = 0; n < psi.size(); ++n) {
    g.unravel(n, idx.data());
    double r2 = 0.0;
    for (int j : idx) {
      const double x = g.coordinate(j);
      r2 += x * x;
    }
    if (r2 > radius * radius) acc += std::norm(psi[n]);
  }
  return acc * g.cell_volume();
}

double shell_mass_fraction(const Field& psi, double shell) {
  const Grid& g = psi.grid();
  const double edge = (1.0 - shell) * g.half_extent();
  std::vector<int> idx(static_cast<std::size_t>(g.dim()));
  double acc = 0.0, total = 0.0;
  for (std::size_t n = 0; n < psi.size(); ++n) {
    g.unravel(n, idx.data());
    bool outer = false;
    for (int j : idx) outer = outer || std::abs(g.coordinate(j)) >= edge;
    const double v = std::norm(psi[n]);
    total += v;
    if (outer) acc += v;
  }
  return total > 0.0 ? acc / total : 0.0;
}

double hartree_variance(const Field& psi, double s) {
  if (!(s > 0.0 && s <= 1.0)) throw Error(ErrorKind::InvalidOrder, "s must lie in (0, 1]");
  const Grid& g = psi.grid();
  double acc = 0.0;
  std::vector<int> idx(static_cast<std::size_t>(g.dim()));
  for (int d = 0; d < g.dim(); ++d) {
    std::vector<cplx> v(psi.values());
    for (std::size_t n = 0; n < v.size(); ++n) {
      g.unravel(n, idx.data());
      v[n] *= g.coordinate(idx[static_cast<std::size_t>(d)]);
    }
    const Field xv(psi.grid_ptr(), std::move(v));
    acc += real_inner(xv, fractional_power(xv, 1.0 - s));
  }
  return acc;
}

}  // namespace fnls
