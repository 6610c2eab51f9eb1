// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criterion 7 runs the dimer variant by default; set
// QSTEADY_FIG2_FULL=1 to also run the four-site reproduction.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "qsteady/dynamics.hpp"
#include "qsteady/floquet.hpp"
#include "qsteady/zoo.hpp"

using namespace qsteady;

namespace {

constexpr double pi = std::numbers::pi;

struct CriterionResult {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "\n    FAILED: " << what;
    }
  }
};

double expectation(const Operator& obs, const Operator& rho) {
  return (obs * rho).trace().real();
}

// ---------------------------------------------------------------------------
// 1. Decaying dephasing freezes at the closed-form limit.
// ---------------------------------------------------------------------------
CriterionResult criterion_1() {
  CriterionResult r;
  auto entry = build_zoo("decaying-dephasing");
  const double t_end = 10.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Operator rho0 = haar_random_state(2, seed);
    const double cx = expectation(pauli_x(), rho0);
    const double cy = expectation(pauli_y(), rho0);
    const double cz = expectation(pauli_z(), rho0);
    const auto traj = evolve(entry.model, rho0, t_end, 2e-3, 500);
    const auto& final_state = traj.states.back();
    const double ex = expectation(pauli_x(), final_state);
    const double ey = expectation(pauli_y(), final_state);
    const double ez = expectation(pauli_z(), final_state);
    const double einv = std::exp(-1.0);
    r.require(std::abs(ex - cx * einv) < 1e-6, "sx limit, seed " + std::to_string(seed));
    r.require(std::abs(ey - cy * einv) < 1e-6, "sy limit, seed " + std::to_string(seed));
    r.require(std::abs(ez - cz * einv * einv) < 1e-6,
              "sz limit, seed " + std::to_string(seed));
  }
  r.detail << "5 random states match c_nu e^-1 / c_z e^-2 within 1e-6";
  return r;
}

// ---------------------------------------------------------------------------
// 2. Rotating dephasing: persistent coherence of constant magnitude whose
//    phase advances as -omega t; class iv with dims (1, 2).
// ---------------------------------------------------------------------------
CriterionResult criterion_2() {
  CriterionResult r;
  auto entry = build_zoo("rotating-dephasing");
  const double omega = entry.params["omega"];
  const Operator rho0 =
      0.5 * (identity(2) + 0.8 * pauli_x() + 0.5 * pauli_z());

  const double settle = 60.0;
  const double window = 10.0 * 2.0 * pi / omega;
  const auto traj = evolve(entry.model, rho0, settle + window, 1e-3, 100);

  std::size_t first = 0;
  while (traj.times[first] < settle) ++first;
  const double mag0 = std::abs(traj.states[first](0, 1));
  const double phase0 = std::arg(traj.states[first](0, 1));
  double worst_mag = 0.0, worst_phase = 0.0;
  for (std::size_t k = first; k < traj.times.size(); ++k) {
    const Complex off = traj.states[k](0, 1);
    worst_mag = std::max(worst_mag, std::abs(std::abs(off) - mag0));
    const double predicted = phase0 - omega * (traj.times[k] - traj.times[first]);
    const double diff = std::remainder(std::arg(off) - predicted, 2.0 * pi);
    worst_phase = std::max(worst_phase, std::abs(diff));
  }
  r.require(worst_mag < 1e-6, "off-diagonal magnitude drift " + std::to_string(worst_mag));
  r.require(worst_phase < 1e-4, "phase error " + std::to_string(worst_phase));

  const auto report = classify(entry.model);
  r.require(report.steady_class == SteadyClass::IV, "class iv");
  r.require(report.dim_c_sch == 1 && report.dim_c_int == 2, "dims (1, 2)");
  r.detail << "|rho01| drift " << worst_mag << ", phase error " << worst_phase
           << " rad over 10 periods; class "
           << to_string(report.steady_class) << " (" << report.dim_c_sch << ", "
           << report.dim_c_int << ")";
  return r;
}

// ---------------------------------------------------------------------------
// 3. Chain ladder: one Majorana per rung (dimension 2^{n+1}), uniqueness.
// ---------------------------------------------------------------------------
CriterionResult criterion_3() {
  CriterionResult r;
  for (int v : {2, 3}) {
    auto entry = build_zoo("spin-chain", {{"v", v}});
    const auto spec = HilbertSpec::qubit_chain(v);
    const auto ladder = ad_ladder(entry.model, 0.0, 2 * v - 1);
    r.require(static_cast<int>(ladder.evaluations[0].size()) >= 2 * v,
              "ladder depth at V=" + std::to_string(v));

    std::vector<Operator> rungs = {identity(spec.dim)};
    std::vector<Operator> monomials = {identity(spec.dim)};
    for (int n = 0; n <= 2 * v - 1; ++n) {
      rungs.push_back(ladder.evaluations[0][static_cast<std::size_t>(n)]);
      monomials.push_back(majorana(spec, n + 1));
      const int dim = generate_algebra(rungs).dimension();
      const int oracle = generate_algebra(monomials).dimension();
      r.require(dim == (1 << (n + 1)) && dim == oracle,
                "V=" + std::to_string(v) + " rung " + std::to_string(n) +
                    " dimension " + std::to_string(dim));
    }
    r.require(uniqueness_by_ad(entry.model), "uniqueness at V=" + std::to_string(v));
  }
  r.detail << "rung algebra dimensions 2^(n+1) for V=2,3; unique steady state";
  return r;
}

// ---------------------------------------------------------------------------
// 4. Pulsed-model sweep: mixing fails exactly on the resonances and the
//    integrated channel matches the closed-form Kraus pair.
// ---------------------------------------------------------------------------
CriterionResult criterion_4() {
  CriterionResult r;
  const std::vector<double> grid = {pi / 2, pi, 3 * pi / 2, 2 * pi, 3 * pi, 4 * pi};
  for (double gt : grid) {
    auto entry = build_zoo("bump", {{"g_times_period", gt}});
    const double t_period = entry.params["period"];
    const double kappa = entry.params["kappa"];
    const SuperMatrix channel = one_cycle_map(entry.model, t_period);

    const double gt4 = gt / 4.0;
    const double decay = std::exp(-kappa * t_period / 2.0);
    KrausSet closed;
    closed.dim = 2;
    closed.operators.push_back(std::sqrt((1.0 + decay) / 2.0) *
                               (std::cos(gt4) * identity(2) -
                                kImag * std::sin(gt4) * pauli_x()));
    closed.operators.push_back(std::sqrt((1.0 - decay) / 2.0) *
                               (std::cos(gt4) * pauli_z() -
                                std::sin(gt4) * pauli_y()));
    const double mismatch =
        (channel - closed.to_superoperator()).cwiseAbs().maxCoeff();
    r.require(mismatch < 1e-8,
              "channel mismatch " + std::to_string(mismatch) + " at gT=" +
                  std::to_string(gt));

    const bool resonant = std::abs(std::remainder(gt, 2 * pi)) < 1e-12;
    const bool mixing = mixing_check(kraus_from_choi(channel));
    r.require(mixing == !resonant, "mixing at gT=" + std::to_string(gt));
  }
  r.detail << "mixing false exactly at {2pi, 4pi}; channel matches closed form";
  return r;
}

// ---------------------------------------------------------------------------
// 5. Trivial interaction symmetry drives everything to the mixed state.
// ---------------------------------------------------------------------------
CriterionResult criterion_5() {
  CriterionResult r;
  struct Case {
    const char* name;
    nlohmann::json overrides;
    double t_end;
  };
  const std::vector<Case> cases = {{"ex-3.1", {}, 20.0},
                                   {"driven-dephasing", {{"l", 1}}, 100.0},
                                   {"driven-dephasing", {{"l", 2}}, 100.0},
                                   {"spin-chain", {{"v", 2}}, 200.0}};
  for (const auto& c : cases) {
    auto entry = build_zoo(c.name, c.overrides);
    r.require(is_trivial(c_int(entry.model, {.route = Route::AdLadder})),
              std::string(c.name) + ": C^Int trivial");
    const int d = entry.model.dim();
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto traj =
          evolve(entry.model, haar_random_state(d, seed), c.t_end, 1e-2, 200);
      worst = std::max(worst,
                       hs_norm(traj.states.back() - identity(d) / double(d)));
    }
    r.require(worst <= 1e-3, std::string(c.name) + " final distance " +
                                 std::to_string(worst));
    r.detail << c.name << " worst |rho_T - I/d| = " << worst << "; ";
  }
  return r;
}

// ---------------------------------------------------------------------------
// 6. Classification table. The two driven-Hubbard sector checks implement the
//    stated expectation (class iv within a fixed particle number, with the
//    Schroedinger symmetry generated by the number operator alone); the
//    measured symmetry also contains the total-spin Casimir, so those
//    sub-checks report the discrepancy.
// ---------------------------------------------------------------------------
CriterionResult criterion_6() {
  CriterionResult r;
  auto check_class = [&](const char* name, SteadyClass expect) {
    const auto report = classify(build_zoo(name).model);
    r.require(report.inclusion_verified, std::string(name) + " inclusion");
    r.require(report.steady_class == expect,
              std::string(name) + " expected class " + to_string(expect) +
                  ", measured " + to_string(report.steady_class));
    return report;
  };
  check_class("ex-3.1", SteadyClass::I);
  check_class("ex-3.2", SteadyClass::II);
  check_class("rotating-dephasing", SteadyClass::IV);
  check_class("hubbard-static", SteadyClass::III);
  check_class("three-level-quasi", SteadyClass::IV);

  for (const char* name : {"hubbard-1freq", "hubbard-2freq"}) {
    auto entry = build_zoo(name);
    const auto f = fermion_ops(entry.model.space());
    const auto full = classify(entry.model);
    r.require(full.inclusion_verified, std::string(name) + " inclusion");
    const int n_dim = generate_algebra(std::vector<Operator>{
                          identity(entry.model.dim()), f.total_number()})
                          .dimension();
    r.require(full.dim_c_sch == n_dim,
              std::string(name) + " dim C^Sch " + std::to_string(full.dim_c_sch) +
                  " vs dim<I,N> " + std::to_string(n_dim) +
                  " (measured symmetry also contains the total-spin Casimir)");
    const auto sector =
        classify(entry.model.restrict_to_number_sector(*entry.expected.sector));
    r.require(sector.steady_class == SteadyClass::IV,
              std::string(name) + " sector class iv, measured " +
                  to_string(sector.steady_class) + " with dims (" +
                  std::to_string(sector.dim_c_sch) + ", " +
                  std::to_string(sector.dim_c_int) +
                  ") (the Casimir survives the number restriction)");
  }
  r.detail << "two-level, pulsed and static-Hubbard rows reproduce; the "
              "driven-Hubbard rows report the conserved spin Casimir "
              "(see the project notes)";
  return r;
}

// ---------------------------------------------------------------------------
// 7. Spectral fingerprint of the driven Hubbard chain at half filling:
//    exactly 3 peaks under the periodic drive, at least 8 under the
//    quasiperiodic one. Dimer variant is the gate; the four-site run is
//    enabled with QSTEADY_FIG2_FULL=1.
// ---------------------------------------------------------------------------
int spectrum_peaks(const char* name, int sites, double dt) {
  auto entry = build_zoo(name, {{"sites", sites}});
  auto model = entry.model.restrict_to_number_sector(sites);
  const auto spec_full = entry.model.space();
  const auto sector = number_sector_indices(spec_full, sites);
  const Operator obs =
      restrict_to_indices(named_observable(spec_full, "S1y"), sector);

  const Operator rho0 = haar_random_state(model.dim(), 3);
  const int record_every = static_cast<int>(std::lround(0.01 / dt));
  const std::vector<Operator> observables = {obs};
  const auto series =
      evolve_observables(model, rho0, 500.0, dt, record_every, observables);
  const auto spectrum =
      fourier_spectrum(series.times, series.values[0], 300.0, 100.0);
  return static_cast<int>(spectrum.peaks.size());
}

CriterionResult criterion_7() {
  CriterionResult r;
  const int periodic_peaks = spectrum_peaks("hubbard-1freq", 2, 1e-2);
  const int quasi_peaks = spectrum_peaks("hubbard-2freq", 2, 5e-3);
  r.require(periodic_peaks == 3,
            "dimer periodic peaks = " + std::to_string(periodic_peaks));
  r.require(quasi_peaks >= 8,
            "dimer quasiperiodic peaks = " + std::to_string(quasi_peaks));
  r.detail << "dimer: periodic " << periodic_peaks << " peaks, quasiperiodic "
           << quasi_peaks << " peaks";

  if (const char* full = std::getenv("QSTEADY_FIG2_FULL"); full && full[0] == '1') {
    // The two-drive chain carries twice the dimer's drive norm, so the step
    // drops accordingly to stay inside the positivity floor.
    const int p4 = spectrum_peaks("hubbard-1freq", 4, 5e-3);
    const int q4 = spectrum_peaks("hubbard-2freq", 4, 2.5e-3);
    r.require(p4 == 3, "four-site periodic peaks = " + std::to_string(p4));
    r.require(q4 >= 8, "four-site quasiperiodic peaks = " + std::to_string(q4));
    r.detail << "; four-site: periodic " << p4 << ", quasiperiodic " << q4;
  } else {
    r.detail << " (set QSTEADY_FIG2_FULL=1 for the four-site run)";
  }
  return r;
}

// ---------------------------------------------------------------------------
// 8. Property suites.
// ---------------------------------------------------------------------------
CriterionResult criterion_8() {
  CriterionResult r;
  std::mt19937_64 rng(20240817);
  std::normal_distribution<double> gauss;

  auto random_hermitian = [&](int d) {
    Operator m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    return Operator(0.5 * (m + m.adjoint()));
  };

  // Purity monotonicity on 50 random Hermitian-jump models.
  {
    int violations = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const int d = 2 + static_cast<int>(rng() % 3);
      std::vector<ProfiledTerm> h_terms;
      h_terms.push_back({Profile(TrigProfile::cosine(1.0, 0.5 + 0.1 * (rng() % 20), 0.0)),
                         random_hermitian(d)});
      std::vector<TimeDependentOperator> jumps;
      jumps.push_back(TimeDependentOperator(
          d, {{Profile(TrigProfile::cosine(1.0, 0.3 + 0.1 * (rng() % 20), 0.2)),
               random_hermitian(d)}}));
      GkslModel m(HilbertSpec::generic(d), TimeDependentOperator(d, std::move(h_terms)),
                  std::move(jumps));
      const auto traj = evolve(m, haar_random_state(d, rng()), 5.0, 1e-2, 10);
      for (std::size_t k = 1; k < traj.states.size(); ++k) {
        if (traj.purity(k) > traj.purity(k - 1) + 1e-8) ++violations;
      }
    }
    r.require(violations == 0, "purity increased in " + std::to_string(violations) +
                                   " recorded steps");
    r.detail << "purity monotone on 50 random models; ";
  }

  // Bicommutant duality on 100 random generator sets, d <= 6.
  {
    auto random_unitary = [&](int d) {
      Operator m(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
      Eigen::HouseholderQR<Operator> qr(m);
      return Operator(qr.householderQ());
    };
    int failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const int d = 2 + static_cast<int>(rng() % 5);
      std::vector<int> blocks;
      int left = d;
      while (left > 0) {
        const int b = 1 + static_cast<int>(rng() % left);
        blocks.push_back(b);
        left -= b;
      }
      const Operator u = random_unitary(d);
      std::vector<Operator> gens;
      for (int g = 0; g < 2; ++g) {
        Operator m = Operator::Zero(d, d);
        int offset = 0;
        for (int b : blocks) {
          m.block(offset, offset, b, b) = random_hermitian(b);
          offset += b;
        }
        gens.push_back(u * m * u.adjoint());
      }
      const auto alg = generate_algebra(gens);
      const auto bicomm = commutant(commutant(gens).basis());
      if (alg.dimension() != bicomm.dimension() ||
          subspace_residual(alg, bicomm) > 1e-7 ||
          subspace_residual(bicomm, alg) > 1e-7) {
        ++failures;
      }
      if (is_trivial(commutant(gens)) != is_full(alg)) ++failures;
    }
    r.require(failures == 0,
              std::to_string(failures) + " bicommutant failures out of 100");
    r.detail << "bicommutant duality on 100 sets; ";
  }

  // Interaction-symmetry route agreement on every analytic zoo model
  // (Route::Both throws on disagreement).
  {
    for (const auto& name : zoo_names()) {
      auto entry = build_zoo(name);
      if (!entry.model.analytic()) continue;
      try {
        c_int(entry.model, {.route = Route::Both});
      } catch (const std::exception& e) {
        r.require(false, std::string("route agreement on ") + name + ": " + e.what());
      }
    }
    r.detail << "ladder/sampled routes agree on all analytic zoo models; ";
  }

  // Frame consistency between the pictures to 1e-6 at t = 50.
  {
    for (const char* name : {"rotating-dephasing", "driven-dephasing", "three-level-quasi"}) {
      auto entry = build_zoo(name);
      const auto& m = entry.model;
      const int d = m.dim();
      const Operator rho0 = haar_random_state(d, 42);
      const double dt = 2e-3;
      const double t_end = 50.0;
      const int n = static_cast<int>(t_end / dt + 0.5);

      Operator rho = rho0;
      for (int k = 0; k < n; ++k) {
        const double t = k * dt;
        const Operator k1 = liouvillian_apply(m, t, rho);
        const Operator k2 = liouvillian_apply(m, t + dt / 2, rho + (dt / 2) * k1);
        const Operator k3 = liouvillian_apply(m, t + dt / 2, rho + (dt / 2) * k2);
        const Operator k4 = liouvillian_apply(m, t + dt, rho + dt * k3);
        rho += (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
      }

      Operator u = identity(d);
      Operator rho_int = rho0;
      auto rhs = [&](double s, const Operator& uu, const Operator& rr, Operator& du,
                     Operator& dr) {
        du = -kImag * (m.hamiltonian().evaluate(s) * uu);
        dr = Operator::Zero(d, d);
        for (const auto& jump : m.jumps()) {
          const Operator l = uu.adjoint() * jump.evaluate(s) * uu;
          const Operator l2 = l * l;
          dr += l * rr * l - 0.5 * (l2 * rr + rr * l2);
        }
      };
      Operator du1(d, d), dr1(d, d), du2(d, d), dr2(d, d), du3(d, d), dr3(d, d),
          du4(d, d), dr4(d, d);
      for (int k = 0; k < n; ++k) {
        const double t = k * dt;
        rhs(t, u, rho_int, du1, dr1);
        rhs(t + dt / 2, u + (dt / 2) * du1, rho_int + (dt / 2) * dr1, du2, dr2);
        rhs(t + dt / 2, u + (dt / 2) * du2, rho_int + (dt / 2) * dr2, du3, dr3);
        rhs(t + dt, u + dt * du3, rho_int + dt * dr3, du4, dr4);
        u += (dt / 6) * (du1 + 2 * du2 + 2 * du3 + du4);
        rho_int += (dt / 6) * (dr1 + 2 * dr2 + 2 * dr3 + dr4);
      }
      const double mismatch = hs_norm(rho - u * rho_int * u.adjoint());
      r.require(mismatch < 1e-6,
                std::string(name) + " frame mismatch " + std::to_string(mismatch));
    }
    r.detail << "frame consistency < 1e-6; ";
  }

  // Contraction dichotomy: lambda0 < 1 exactly when C^Int is trivial.
  {
    for (const char* name : {"ex-3.1", "driven-dephasing", "multi-frequency", "spin-chain"}) {
      const double lambda = window_contraction(build_zoo(name).model, 0.0, 10.0);
      r.require(lambda < 1.0, std::string(name) + " lambda0 " + std::to_string(lambda));
    }
    for (const char* name : {"ex-3.2", "rotating-dephasing", "three-level-quasi"}) {
      const double lambda = window_contraction(build_zoo(name).model, 0.0, 10.0);
      r.require(std::abs(lambda - 1.0) < 1e-6,
                std::string(name) + " lambda0 " + std::to_string(lambda));
    }
    r.detail << "lambda0 < 1 iff C^Int trivial on the zoo";
  }
  return r;
}

}  // namespace

int main() {
  struct Entry {
    const char* label;
    CriterionResult (*run)();
  };
  const std::vector<Entry> criteria = {
      {"1 decaying-dephasing closed form", criterion_1},
      {"2 rotating-dephasing asymptotics", criterion_2},
      {"3 chain ladder growth", criterion_3},
      {"4 pulsed-channel sweep", criterion_4},
      {"5 relaxation to the mixed state", criterion_5},
      {"6 classification table", criterion_6},
      {"7 driven-Hubbard spectra", criterion_7},
      {"8 property suites", criterion_8},
  };

  int failures = 0;
  for (const auto& entry : criteria) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult result;
    try {
      result = entry.run();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail << "exception: " << e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::cout << "criterion " << entry.label << ": "
              << (result.pass ? "PASS" : "FAIL") << " [" << seconds << " s]\n    "
              << result.detail.str() << "\n";
    if (!result.pass) ++failures;
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
  }
  return failures;
}
