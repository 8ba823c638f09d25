#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fnls/dynamics.hpp"
#include "fnls/error.hpp"
#include "fnls/functionals.hpp"
#include "fnls/ground_state.hpp"
#include "fnls/random_fields.hpp"
#include "fnls/spectral.hpp"

using namespace fnls;

namespace {

const ModelParams& dyn_params() {
  static const ModelParams p = make_params(2, 0.7, Power{2.0}, 1.0, ParamsMode::Dynamics);
  return p;
}

const GroundStateResult& ground() {
  // fine enough that rescale keeps the mass to 1e-6 for lambda in [0.8, 1.2]
  static const GroundStateResult gs = minimize_on_vc(dyn_params(), gaussian(make_grid(2, 2.5, 640), 0.1));
  return gs;
}

Field plane_wave(GridPtr g, int m1, int m2, double amp) {
  const double L = g->half_extent();
  return Field::sample(g, [&](auto x) { return amp * std::exp(cplx(0, M_PI / L * (m1 * x[0] + m2 * x[1]))); });
}

}  // namespace

TEST_CASE("Strang step basics") {
  auto g = make_grid(2, 4.0, 32);
  const auto& p = dyn_params();
  CHECK(max_abs(strang_step(Field::zeros(g), 1e-2, p)) == 0.0);
  const Field v = random_smooth_field(g, 2, 0.8);
  const Field w = strang_step(v, 1e-2, p);
  CHECK(std::abs(mass(w) - mass(v)) < 1e-13 * mass(v));
  // symmetric composition: stepping back undoes the step
  CHECK(max_abs(strang_step(w, -1e-2, p) - v) < 1e-10 * max_abs(v));
  CHECK_THROWS_AS(strang_step(v, 0.0, p), Error);
}

TEST_CASE("plane wave is reproduced exactly") {
  auto g = make_grid(2, 4.0, 32);
  const auto& p = dyn_params();
  const double A = 0.8;
  const int m1 = 3, m2 = -1;
  const double k2 = std::pow(M_PI / 4.0, 2) * (m1 * m1 + m2 * m2);
  const double freq = std::pow(k2, p.s) - std::pow(A, p.exponent());
  const Field psi0 = plane_wave(g, m1, m2, A);
  const Field one = strang_step(psi0, 1e-3, p);
  CHECK(max_abs(one - std::exp(cplx(0, -freq * 1e-3)) * psi0) < 1e-12);

  EvolveOptions o;
  o.dt = 1e-3;
  o.sample_every = 100;
  const auto out = evolve(psi0, p, 1.0, o);
  CHECK(out.verdict.kind == VerdictKind::Global);
  CHECK(out.steps == 1000);
  CHECK(max_abs(out.final_state - std::exp(cplx(0, -freq)) * psi0) < 1e-10);
}

TEST_CASE("phase invariance and mass conservation") {
  auto g = make_grid(2, 6.0, 64);
  const auto& p = dyn_params();
  const Field v = random_smooth_field(g, 5, 0.8, false);
  EvolveOptions o;
  o.dt = 1e-3;
  o.sample_every = 50;
  const auto a = evolve(v, p, 0.2, o);
  const cplx phase = std::polar(1.0, 0.7);
  const auto b = evolve(phase * v, p, 0.2, o);
  CHECK(max_abs(b.final_state - phase * a.final_state) < 1e-12 * max_abs(a.final_state));
  for (const auto& s : a.trajectory) CHECK(std::abs(s.mass - a.trajectory[0].mass) < 1e-12 * s.mass);
  std::ostringstream csv;
  write_trajectory_csv(csv, a.trajectory);
  CHECK(csv.str().rfind("t,mass,energy,q,hs_sq,m_virial,hartree_variance,dt\n", 0) == 0);
}

TEST_CASE("evolve validation and blow-up triggers") {
  const auto& gs = ground();
  const auto& p = dyn_params();
  CHECK_THROWS_AS(evolve(gaussian(make_grid(1, 4.0, 32), 1.0), make_params(1, 0.7, Power{3.0}, 1.0), 1.0), Error);
  CHECK_THROWS_AS(evolve(gs.u_c, make_params(2, 0.6, Power{2.0}, 1.0), 1.0), Error);

  const Field b = rescale(gs.u_c, 1.2);
  EvolveOptions o;
  o.blowup_factor = 1.2;
  const auto out = evolve(b, p, 1.0, o);
  CHECK(out.verdict.kind == VerdictKind::BlowUp);
  CHECK(out.verdict.trigger == "hs_norm_exceeded");
  CHECK(out.trajectory.back().hs_sq > 1.2 * out.trajectory.front().hs_sq);

  EvolveOptions tight;
  tight.energy_tol = 1e-16;
  tight.dt_min = 1e-4;
  const auto under = evolve(b, p, 1.0, tight);
  CHECK(under.verdict.kind == VerdictKind::BlowUp);
  CHECK(under.verdict.trigger == "dt_underflow");
}

TEST_CASE("boundary guard") {
  auto g = make_grid(2, 3.0, 64);
  const auto& p = dyn_params();
  // a fast-moving packet reaches the edge of the box
  const Field packet = Field::sample(g, [](auto x) {
    return 0.3 * std::exp(-2.0 * (x[0] * x[0] + x[1] * x[1])) * std::exp(cplx(0, 6.0 * x[0]));
  });
  EvolveOptions o;
  o.boundary_guard = true;
  const auto out = evolve(packet, p, 5.0, o);
  CHECK(out.verdict.kind == VerdictKind::Inconclusive);
  CHECK(out.verdict.trigger == "boundary_contamination");
}

TEST_CASE("classification around the ground state") {
  const auto& gs = ground();
  const auto& p = dyn_params();
  CHECK(classify(gs.u_c, p, gs.energy).kind == SetClass::Indeterminate);
  for (double lam : {0.8, 0.9, 0.97}) CHECK(classify(rescale(gs.u_c, lam), p, gs.energy).kind == SetClass::InA);
  for (double lam : {1.03, 1.1, 1.2}) CHECK(classify(rescale(gs.u_c, lam), p, gs.energy).kind == SetClass::InB);
  // energy above the supplied level: neither set
  CHECK(classify(rescale(gs.u_c, 1.1), p, 0.5 * gs.energy).kind == SetClass::Indeterminate);
}

TEST_CASE("cutoff profile") {
  for (double r = 0.0; r <= 1.0; r += 0.01) {
    CHECK(cutoff_phi(r) == r * r);
    CHECK(cutoff_dphi(r) == 2.0 * r);
  }
  double max_d2 = -1e300;
  for (double r = 0.0; r <= 12.0; r += 1e-3) {
    max_d2 = std::max(max_d2, cutoff_d2phi(r));
    CHECK(2.0 - cutoff_dphi(r) / std::max(r, 1e-300) >= -1e-12);
    if (r >= 10.0) CHECK(cutoff_dphi(r) == 0.0);
  }
  CHECK(max_d2 <= 2.0 + 1e-10);
  CHECK(cutoff_phi(10.0) == doctest::Approx(cutoff_phi(11.0)));
  // phi'' and phi''' continuous at the junctions
  const double e = 1e-6;
  for (double r0 : {1.0, 10.0}) {
    CHECK(std::abs(cutoff_d2phi(r0 + e) - cutoff_d2phi(r0 - e)) < 1e-4);
    const double third_l = (cutoff_d2phi(r0 - e) - cutoff_d2phi(r0 - 2 * e)) / e;
    const double third_r = (cutoff_d2phi(r0 + 2 * e) - cutoff_d2phi(r0 + e)) / e;
    CHECK(std::abs(third_l - third_r) < 1e-3);
  }
  // phi' consistent with phi
  for (double r : {1.5, 4.0, 9.0}) CHECK((cutoff_phi(r + 1e-5) - cutoff_phi(r - 1e-5)) / 2e-5 == doctest::Approx(cutoff_dphi(r)).epsilon(1e-8));

  auto g = make_grid(2, 16.0, 128);
  const auto tab = build_cutoff(g, 1.2);
  for (std::size_t i = 0; i < g->size(); ++i) {
    CHECK(2.0 - tab.d2phi[i] >= -1e-10);
    CHECK(2.0 * g->dim() - tab.laplacian[i] >= -1e-10);
    if (tab.radius[i] <= tab.R) CHECK(tab.phi[i] == doctest::Approx(tab.radius[i] * tab.radius[i]));
  }
  CHECK_THROWS_AS(build_cutoff(g, 1.6), Error);
}

TEST_CASE("virial action parity") {
  auto g = make_grid(2, 16.0, 128);
  const auto tab = build_cutoff(g, 1.2);
  const Field real = gaussian(g, 1.5, 0.7);
  CHECK(std::abs(virial_action(real, tab)) < 1e-12);
  const Field boosted = Field::sample(g, [](auto x) {
    return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1])) * std::exp(cplx(0, 0.8 * x[0] - 0.3 * x[1]));
  });
  CHECK(std::abs(virial_action(boosted, tab)) < 1e-10);
  // an outgoing radial phase gives a positive action
  const Field outgoing = Field::sample(g, [](auto x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return std::exp(-0.5 * r2) * std::exp(cplx(0, 0.3 * r2));
  });
  CHECK(virial_action(outgoing, tab) > 0.0);
}

TEST_CASE("Hartree variance") {
  auto g = make_grid(2, 12.0, 128);
  const Field u = gaussian(g, 1.0);
  // s = 1: ||x u||^2 = int |x|^2 exp(-|x|^2) = pi
  CHECK(hartree_variance(u, 1.0) == doctest::Approx(M_PI).epsilon(1e-8));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) CHECK(hartree_variance(random_smooth_field(g, seed, 0.8), 0.8) >= -1e-10);
}

TEST_CASE("centered derivative on a nonuniform grid") {
  const std::vector<double> t = {0.0, 0.1, 0.25, 0.3, 0.6, 0.61};
  std::vector<double> y;
  for (double x : t) y.push_back(3.0 * x * x - x + 2.0);
  const auto d = centered_derivative(t, y);
  REQUIRE(d.size() == t.size() - 2);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(d[i] == doctest::Approx(6.0 * t[i + 1] - 1.0).epsilon(1e-12));
}
