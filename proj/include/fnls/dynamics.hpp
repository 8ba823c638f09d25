#pragma once

#include <functional>
#include <json.hpp>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fnls/field.hpp"
#include "fnls/params.hpp"

namespace fnls {

// One Strang step: half nonlinear phase, exact linear flow, half nonlinear phase.
Field strang_step(const Field& psi, double dt, const ModelParams& params);

// Strang stepping with cached linear propagators; optionally reuses the potential
// of the current state across steps.
class StrangIntegrator {
 public:
  explicit StrangIntegrator(ModelParams params) : params_(std::move(params)) {}
  // Advances psi whose potential is W; returns the new state and stores its potential in W_out.
  Field step(const Field& psi, const Field& W, double dt, Field* W_out);
  Field linear_flow(const Field& psi, double dt);

 private:
  const std::vector<cplx>& propagator(const Grid& g, double dt);
  ModelParams params_;
  std::map<double, std::vector<cplx>> propagators_;
};

struct TrajectorySample {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double q_value = 0.0;
  double hs_sq = 0.0;
  double m_virial = std::numeric_limits<double>::quiet_NaN();
  double hartree_variance = std::numeric_limits<double>::quiet_NaN();
  double dt = 0.0;
  double tail_mass = std::numeric_limits<double>::quiet_NaN();  // mass beyond r = R/2
  double shell_fraction = 0.0;  // mass fraction in the outer box shell
};

enum class VerdictKind { Global, BlowUp, Inconclusive };

struct Verdict {
  VerdictKind kind = VerdictKind::Global;
  double t_detect = 0.0;
  std::string trigger;  // horizon_reached | hs_norm_exceeded | dt_underflow | non_finite | boundary_contamination
  double threshold = 0.0;
};

std::string to_string(VerdictKind kind);
nlohmann::json to_json(const Verdict& v);

struct EvolveOptions {
  double dt = 1e-3;
  double energy_tol = 1e-6;    // single-step energy change / (hs/2 + weight*nonlinear) at t = 0
  int sample_every = 10;
  double blowup_factor = 100.0;
  double dt_min = 1e-10;
  bool regrow_dt = true;       // double dt back toward its nominal value after quiet steps
  bool boundary_guard = false;
  double guard_threshold = 1e-6;
  double guard_shell = 0.1;    // outer fraction of the half-width
  std::optional<double> virial_R;
  bool record_hartree_variance = false;
  std::function<void(const Field&, const TrajectorySample&)> on_sample;
};

struct EvolveOutcome {
  Verdict verdict;
  std::vector<TrajectorySample> trajectory;
  Field final_state;
  double max_step_energy_drift = 0.0;
  long steps = 0;
  int halvings = 0;
};

EvolveOutcome evolve(const Field& psi0, const ModelParams& params, double horizon, const EvolveOptions& opts = {});

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& samples);

// A_c / B_c membership.
enum class SetClass { InA, InB, Indeterminate };
std::string to_string(SetClass c);

struct Classification {
  SetClass kind = SetClass::Indeterminate;
  double q_value = 0.0;
  double energy = 0.0;
  double m_c = 0.0;
  double delta_q = 0.0;
  double delta_e = 0.0;
};

struct ClassifyTolerances {
  double q_rel = 1e-6;  // delta = q_rel * hs_sq
  double e_rel = 1e-6;  // delta' = e_rel * |m_c|
};

Classification classify(const Field& psi0, const ModelParams& params, double m_c, const ClassifyTolerances& tol = {});

// Cutoff phi(r) = r^2 (r <= 1), constant (r >= 10), quintic smoothstep blend of phi'/r between.
double cutoff_phi(double r);
double cutoff_dphi(double r);
double cutoff_d2phi(double r);

struct CutoffTable {
  GridPtr grid;
  double R = 1.0;
  std::vector<double> radius;
  std::vector<double> phi;
  std::vector<double> dphi;
  std::vector<double> d2phi;
  std::vector<double> laplacian;
  std::vector<std::vector<double>> grad;  // per axis
};

CutoffTable build_cutoff(GridPtr grid, double R);

// M = 2 h^N sum grad(phi_R) . Im(conj(psi) grad psi)
double virial_action(const Field& psi, const CutoffTable& cutoff);

// sum_j < x_j psi, (-Delta)^{1-s} x_j psi >
double hartree_variance(const Field& psi, double s);

double mass_beyond(const Field& psi, double radius);
double shell_mass_fraction(const Field& psi, double shell);

// Three-point derivative on a nonuniform time grid, interior samples.
std::vector<double> centered_derivative(const std::vector<double>& t, const std::vector<double>& y);

struct VirialEstimateReport {
  double R = 0.0;
  double epsilon = 0.0;
  double c_min = 0.0;
  double fraction_satisfied = 0.0;
  std::vector<double> t;
  std::vector<double> dmdt;
  std::vector<double> four_q;     // 4 s hs - 2Np/(p+2) nonlinear
  std::vector<double> remainder;  // R^{-2s} + R^{-p(N-1)/2 + eps s} hs^{p/(4s) + eps/2}
  std::vector<double> remainder_2r;
};

VirialEstimateReport virial_estimate_check(const std::vector<TrajectorySample>& trajectory, double R,
                                           double epsilon, const ModelParams& params);

struct VirialIdentityReport {
  std::vector<double> t;
  std::vector<double> dmdt;
  std::vector<double> eight_q;
  std::vector<double> rel_error;
  std::vector<bool> gated;  // tail mass below threshold
  double max_gated_error = 0.0;
  int gated_count = 0;
};

VirialIdentityReport virial_identity_check(const std::vector<TrajectorySample>& trajectory, double tail_threshold);

}  // namespace fnls
