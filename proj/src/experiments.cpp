#include "fnls/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "fnls/dynamics.hpp"
#include "fnls/error.hpp"
#include "fnls/random_fields.hpp"
#include "fnls/snapshot.hpp"

namespace fnls {

namespace {

namespace fs = std::filesystem;

struct Provenance {
  std::string text;
  std::string hash;
};

Provenance provenance(const ExperimentConfig& cfg) {
  Provenance p{canonical_text(cfg), ""};
  p.hash = content_hash(p.text);
  return p;
}

std::string prepare_dir(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + out_dir + ": " + ec.message());
  return out_dir;
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::IoError, "cannot write " + path);
  os << body;
  if (!os) throw Error(ErrorKind::IoError, "write failed for " + path);
}

void write_json(const std::string& path, nlohmann::json j, const ExperimentConfig& cfg) {
  const Provenance p = provenance(cfg);
  j["config"] = p.text;
  j["config_hash"] = p.hash;
  write_text(path, j.dump(2) + "\n");
}

// CSV files carry the config as leading comment lines.
std::string csv_preamble(const ExperimentConfig& cfg) {
  const Provenance p = provenance(cfg);
  std::ostringstream os;
  os << "# config_hash " << p.hash << "\n";
  std::istringstream lines(p.text);
  for (std::string line; std::getline(lines, line);) os << "# config " << line << "\n";
  return os.str();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SolverOptions solver_options(const ExperimentConfig& cfg) {
  SolverOptions o;
  o.gradient_tol = cfg.gradient_tol;
  o.q_tol = cfg.q_tol;
  o.max_iterations = cfg.max_iterations;
  return o;
}

EvolveOptions evolve_options(const ExperimentConfig& cfg) {
  EvolveOptions o;
  o.dt = cfg.dt;
  o.energy_tol = cfg.energy_tol;
  o.sample_every = cfg.sample_every;
  o.blowup_factor = cfg.blowup_factor;
  o.dt_min = cfg.dt_min;
  o.boundary_guard = cfg.boundary_guard;
  o.guard_threshold = cfg.guard_threshold;
  if (cfg.virial_R > 0.0) o.virial_R = cfg.virial_R;
  o.record_hartree_variance = cfg.kind == "hartree";
  return o;
}

nlohmann::json trajectory_summary(const EvolveOutcome& out) {
  const auto& tr = out.trajectory;
  double mass_drift = 0.0, energy_drift = 0.0, hs_max = 0.0;
  for (const auto& s : tr) {
    mass_drift = std::max(mass_drift, std::abs(s.mass - tr.front().mass) / tr.front().mass);
    energy_drift = std::max(energy_drift, std::abs(s.energy - tr.front().energy) / std::abs(tr.front().energy));
    hs_max = std::max(hs_max, s.hs_sq / tr.front().hs_sq);
  }
  return {{"verdict", to_json(out.verdict)},
          {"steps", out.steps},
          {"halvings", out.halvings},
          {"samples", tr.size()},
          {"max_mass_drift", mass_drift},
          {"max_energy_drift", energy_drift},
          {"max_hs_ratio", hs_max},
          {"max_step_energy_drift", out.max_step_energy_drift}};
}

int workers(const ExperimentConfig& cfg) { return std::max(1, cfg.threads); }

}  // namespace

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidGrid:
    case ErrorKind::InvalidOrder:
    case ErrorKind::InvalidExponent:
    case ErrorKind::InvalidParams:
    case ErrorKind::InvalidInput:
    case ErrorKind::GridMismatch:
    case ErrorKind::CutoffTooLarge:
    case ErrorKind::IoError:
      return kExitConfig;
    case ErrorKind::NotConverged:
      return kExitNotConverged;
    default:
      return kExitNumerical;
  }
}

GroundStateResult obtain_ground_state(const ExperimentConfig& cfg) {
  const ModelParams params = model_params(cfg);
  if (!cfg.ground_state.empty()) {
    const Snapshot snap = read_snapshot(cfg.ground_state);
    if (snap.params.dim != params.dim || snap.params.s != params.s || snap.params.is_power() != params.is_power() ||
        snap.params.exponent() != params.exponent())
      throw Error(ErrorKind::ConfigError, "snapshot " + cfg.ground_state + " was computed for " + snap.params.describe());
    return minimize_on_vc(params, snap.field, solver_options(cfg));
  }
  GridPtr grid = make_config_grid(cfg);
  return minimize_on_vc(params, gaussian(grid, cfg.init_width * grid->half_extent()), solver_options(cfg));
}

int run_ground(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
  const std::string dir = prepare_dir(out_dir);
  const GroundStateResult gs = obtain_ground_state(cfg);
  write_json(dir + "/result.json", to_json(gs), cfg);
  write_snapshot(dir + "/ground_state.fnls", gs.u_c, gs.params);
  log << "ground: E = " << fmt(gs.energy) << " omega = " << fmt(gs.omega_c) << " iterations = " << gs.iterations
      << (gs.converged ? " converged" : " NOT converged") << "\n";
  return gs.converged ? kExitOk : kExitNotConverged;
}

int run_mc_curve(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
  const std::string dir = prepare_dir(out_dir);
  const ModelParams tmpl = model_params(cfg);
  McCurveOptions opts;
  opts.warm_start = cfg.warm_start;
  opts.policy = cfg.grid_policy == "scaled" ? GridPolicy::Scaled : GridPolicy::Fixed;
  opts.reference_c = cfg.mass;
  opts.init_width_fraction = cfg.init_width;
  opts.threads = workers(cfg);
  opts.solver = solver_options(cfg);
  const McCurve curve = mc_curve(tmpl, make_config_grid(cfg), cfg.c_list, opts);

  std::ostringstream os;
  os << csv_preamble(cfg);
  os << "c,m,omega,hs_sq,q_residual,pohozaev_residual,converged\n";
  bool all = true;
  std::vector<double> cs, ms;
  for (const auto& pt : curve.points) {
    os << fmt(pt.c) << ',' << fmt(pt.m) << ',' << fmt(pt.omega) << ',' << fmt(pt.hs_sq) << ','
       << fmt(pt.q_residual) << ',' << fmt(pt.pohozaev_residual) << ',' << (pt.converged ? 1 : 0) << "\n";
    all = all && pt.converged;
    cs.push_back(pt.c);
    ms.push_back(pt.m);
    log << "mc-curve: c = " << fmt(pt.c) << " m = " << fmt(pt.m) << (pt.converged ? "" : " (not converged)") << "\n";
  }
  if (cs.size() >= 2)
    os << "# fit theta_hat=" << fmt(fit_exponent(cs, ms)) << " theta=" << fmt(tmpl.mc_exponent()) << "\n";
  write_text(dir + "/mc_curve.csv", os.str());
  return all ? kExitOk : kExitNotConverged;
}

int run_evolve(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
  const std::string dir = prepare_dir(out_dir);
  const ModelParams params = model_params(cfg, ParamsMode::Dynamics);
  const GroundStateResult gs = obtain_ground_state(cfg);
  const Field psi0 = rescale(gs.u_c, cfg.lambda);
  EvolveOptions opts = evolve_options(cfg);
  int sample_index = 0;
  if (cfg.snapshot_every > 0)
    opts.on_sample = [&](const Field& psi, const TrajectorySample&) {
      if (sample_index++ % cfg.snapshot_every == 0)
        write_snapshot(dir + "/psi_" + std::to_string(sample_index - 1) + ".fnls", psi, params);
    };
  const EvolveOutcome out = evolve(psi0, params, cfg.horizon, opts);
  std::ostringstream csv;
  csv << csv_preamble(cfg);
  write_trajectory_csv(csv, out.trajectory);
  write_text(dir + "/trajectory.csv", csv.str());
  nlohmann::json j = trajectory_summary(out);
  j["lambda"] = cfg.lambda;
  j["m_c"] = gs.energy;
  j["classification"] = to_string(classify(psi0, params, gs.energy).kind);
  write_json(dir + "/verdict.json", j, cfg);
  log << "evolve: lambda = " << fmt(cfg.lambda) << " verdict " << to_string(out.verdict.kind) << " ("
      << out.verdict.trigger << ") at t = " << fmt(out.verdict.t_detect) << "\n";
  return out.verdict.trigger == "non_finite" ? kExitNumerical : kExitOk;
}

int run_classify(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
  const std::string dir = prepare_dir(out_dir);
  const ModelParams params = model_params(cfg);
  const GroundStateResult gs = obtain_ground_state(cfg);
  nlohmann::json rows = nlohmann::json::array();
  for (double lam : cfg.lambda_list) {
    const Classification c = classify(rescale(gs.u_c, lam), params, gs.energy);
    rows.push_back({{"lambda", lam},
                    {"class", to_string(c.kind)},
                    {"q", c.q_value},
                    {"energy", c.energy},
                    {"m_c", c.m_c},
                    {"delta_q", c.delta_q},
                    {"delta_e", c.delta_e}});
    log << "classify: lambda = " << fmt(lam) << " " << to_string(c.kind) << "\n";
  }
  write_json(dir + "/classification.json", {{"rows", rows}, {"ground_state_converged", gs.converged}}, cfg);
  return gs.converged ? kExitOk : kExitNotConverged;
}

int run_dichotomy(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
  const std::string dir = prepare_dir(out_dir);
  const ModelParams params = model_params(cfg, ParamsMode::Dynamics);
  const GroundStateResult gs = obtain_ground_state(cfg);
  struct Row {
    double lambda;
    Classification cls;
    EvolveOutcome out;
  };
  auto run_one = [&](double lam) {
    const Field psi0 = rescale(gs.u_c, lam);
    return Row{lam, classify(psi0, params, gs.energy), evolve(psi0, params, cfg.horizon, evolve_options(cfg))};
  };
  std::vector<Row> rows;
  const std::size_t n = cfg.lambda_list.size(), w = static_cast<std::size_t>(workers(cfg));
  for (std::size_t start = 0; start < n; start += w) {
    std::vector<std::future<Row>> jobs;
    for (std::size_t i = start; i < std::min(n, start + w); ++i)
      jobs.push_back(std::async(w > 1 ? std::launch::async : std::launch::deferred, run_one, cfg.lambda_list[i]));
    for (auto& j : jobs) rows.push_back(j.get());
  }
  std::ostringstream csv;
  csv << csv_preamble(cfg);
  csv << "lambda,class,verdict,trigger,t_detect,q0,energy0,m_c,max_q_after\n";
  bool numerical = false;
  for (const auto& r : rows) {
    double qmax = -1e300;
    for (const auto& s : r.out.trajectory) qmax = std::max(qmax, s.q_value);
    csv << fmt(r.lambda) << ',' << to_string(r.cls.kind) << ',' << to_string(r.out.verdict.kind) << ','
        << r.out.verdict.trigger << ',' << fmt(r.out.verdict.t_detect) << ',' << fmt(r.cls.q_value) << ','
        << fmt(r.cls.energy) << ',' << fmt(gs.energy) << ',' << fmt(qmax) << "\n";
    std::ostringstream traj;
    traj << csv_preamble(cfg);
    write_trajectory_csv(traj, r.out.trajectory);
    const std::string run_dir = prepare_dir(dir + "/lambda_" + fmt(r.lambda));
    write_text(run_dir + "/trajectory.csv", traj.str());
    numerical = numerical || r.out.verdict.trigger == "non_finite";
    log << "dichotomy: lambda = " << fmt(r.lambda) << " " << to_string(r.cls.kind) << " -> "
        << to_string(r.out.verdict.kind) << " (" << r.out.verdict.trigger << ", t = " << fmt(r.out.verdict.t_detect)
        << ")\n";
  }
  write_text(dir + "/dichotomy.csv", csv.str());
  return numerical ? kExitNumerical : kExitOk;
}

int run_gn_probe(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
  const std::string dir = prepare_dir(out_dir);
  const ModelParams params = model_params(cfg);
  GridPtr grid = make_config_grid(cfg);
  const auto gs = petviashvili_solve(params, cfg.gn_omega, gaussian(grid, cfg.init_width * grid->half_extent()));
  const double best = gn_ratio(gs.u, params);
  nlohmann::json samples = nlohmann::json::array();
  double max_random = 0.0;
  for (int i = 0; i < cfg.gn_samples; ++i) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    const double q = gn_ratio(random_smooth_field(grid, seed, cfg.init_width * grid->half_extent()), params);
    max_random = std::max(max_random, q);
    samples.push_back({{"seed", seed}, {"ratio", q}});
  }
  write_json(dir + "/gn_probe.json",
             {{"omega", cfg.gn_omega},
              {"ground_state_ratio", best},
              {"petviashvili_residual", gs.residual},
              {"max_random_ratio", max_random},
              {"ground_state_dominates", best > max_random},
              {"samples", samples}},
             cfg);
  log << "gn-probe: ground state " << fmt(best) << " max random " << fmt(max_random) << "\n";
  return kExitOk;
}

int run_virial_check(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
  const std::string dir = prepare_dir(out_dir);
  if (!(cfg.virial_R > 0.0)) throw Error(ErrorKind::ConfigError, "virial-check needs dynamics.virial_R > 0");
  const ModelParams params = model_params(cfg, ParamsMode::Dynamics);
  const GroundStateResult gs = obtain_ground_state(cfg);
  const Field psi0 = rescale(gs.u_c, cfg.lambda);
  const EvolveOutcome out = evolve(psi0, params, cfg.horizon, evolve_options(cfg));
  const VirialIdentityReport id = virial_identity_check(out.trajectory, 1e-6);
  std::ostringstream csv;
  csv << csv_preamble(cfg);
  csv << "t,dmdt,eight_q,rel_error,gated\n";
  for (std::size_t i = 0; i < id.t.size(); ++i)
    csv << fmt(id.t[i]) << ',' << fmt(id.dmdt[i]) << ',' << fmt(id.eight_q[i]) << ',' << fmt(id.rel_error[i]) << ','
        << (id.gated[i] ? 1 : 0) << "\n";
  write_text(dir + "/virial_identity.csv", csv.str());
  nlohmann::json j = trajectory_summary(out);
  j["identity"] = {{"gated_samples", id.gated_count}, {"max_gated_rel_error", id.max_gated_error}};
  if (params.is_power()) {
    const VirialEstimateReport est = virial_estimate_check(out.trajectory, cfg.virial_R, cfg.virial_epsilon, params);
    j["estimate"] = {{"R", est.R}, {"epsilon", est.epsilon}, {"c_min", est.c_min}, {"fraction_satisfied", est.fraction_satisfied}};
  }
  write_json(dir + "/virial.json", j, cfg);
  log << "virial-check: " << id.gated_count << " gated samples, max gated error " << fmt(id.max_gated_error) << "\n";
  return kExitOk;
}

}  // namespace fnls
