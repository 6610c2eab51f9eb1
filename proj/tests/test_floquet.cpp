#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "qsteady/floquet.hpp"
#include "qsteady/zoo.hpp"

using namespace qsteady;

namespace {
constexpr double pi = std::numbers::pi;

// Closed-form one-cycle Kraus pair of the pulsed model: a quarter period of
// dephasing followed (after an idle quarter) by a quarter period of
// x-rotation.
KrausSet bump_closed_form(double g_times_period, double kappa, double t_period) {
  const double gt4 = g_times_period / 4.0;
  const double decay = std::exp(-kappa * t_period / 2.0);
  KrausSet set;
  set.dim = 2;
  set.operators.push_back(std::sqrt((1.0 + decay) / 2.0) *
                          (std::cos(gt4) * identity(2) -
                           kImag * std::sin(gt4) * pauli_x()));
  set.operators.push_back(std::sqrt((1.0 - decay) / 2.0) *
                          (std::cos(gt4) * pauli_z() - std::sin(gt4) * pauli_y()));
  return set;
}

SuperMatrix bump_map(double g_times_period) {
  auto entry = build_zoo("bump", {{"g_times_period", g_times_period}});
  return one_cycle_map(entry.model, entry.params["period"].get<double>());
}

}  // namespace

TEST_CASE("identity channel round trip") {
  GkslModel empty(HilbertSpec::qubit_chain(1),
                  TimeDependentOperator::constant(Operator::Zero(2, 2)), {});
  const SuperMatrix u = one_cycle_map(empty, 1.0);
  CHECK((u - SuperMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

  const auto kraus = kraus_from_choi(u);
  REQUIRE(kraus.operators.size() == 1);
  CHECK(hs_norm((kraus.operators[0] * kraus.operators[0].adjoint()).eval() -
                identity(2)) < 1e-10);
  CHECK(!mixing_check(kraus));

  const auto peripheral = peripheral_spectrum(u);
  REQUIRE(peripheral.size() == 4);
  for (const auto& z : peripheral) CHECK(std::abs(z - 1.0) < 1e-12);
}

TEST_CASE("pulsed channel matches its closed form") {
  for (double gt : {pi / 2, pi, 2 * pi, 4 * pi}) {
    const SuperMatrix computed = bump_map(gt);
    const SuperMatrix expect = bump_closed_form(gt, 1.0, 1.0).to_superoperator();
    CHECK((computed - expect).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("pulsed channel peripheral structure") {
  // g T = 4 pi: identity and sz are both fixed.
  {
    const SuperMatrix u = bump_map(4 * pi);
    CHECK((u * vec(identity(2)) - vec(identity(2))).norm() < 1e-9);
    CHECK((u * vec(pauli_z()) - vec(pauli_z())).norm() < 1e-9);
    const auto peripheral = peripheral_spectrum(u);
    int ones = 0;
    for (const auto& z : peripheral) {
      if (std::abs(z - 1.0) < 1e-9) ++ones;
    }
    CHECK(ones >= 2);
  }
  // g T = 2 pi: sz is flipped every cycle.
  {
    const SuperMatrix u = bump_map(2 * pi);
    CHECK((u * vec(pauli_z()) + vec(pauli_z())).norm() < 1e-9);
    const auto peripheral = peripheral_spectrum(u);
    CHECK(std::any_of(peripheral.begin(), peripheral.end(),
                      [](Complex z) { return std::abs(z + 1.0) < 1e-9; }));
  }
  // Mixing point: a single peripheral eigenvalue.
  {
    const auto peripheral = peripheral_spectrum(bump_map(pi));
    CHECK(peripheral.size() == 1);
    CHECK(std::abs(peripheral[0] - 1.0) < 1e-9);
  }
}

TEST_CASE("kraus extraction for the pulsed channel") {
  const SuperMatrix u = bump_map(pi);
  const auto kraus = kraus_from_choi(u);
  CHECK(kraus.operators.size() == 2);
  // Unitary mixing freedom: compare channels, not operator lists.
  const auto closed = bump_closed_form(pi, 1.0, 1.0);
  CHECK((kraus.to_superoperator() - closed.to_superoperator()).cwiseAbs().maxCoeff() <
        1e-9);
}

TEST_CASE("hand-built full dephasing channel") {
  SuperMatrix phi = SuperMatrix::Zero(4, 4);
  // rho -> diag(rho): Kraus {|0><0|, |1><1|}.
  Operator p0 = Operator::Zero(2, 2), p1 = Operator::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  phi += kron(p0.conjugate(), p0);
  phi += kron(p1.conjugate(), p1);
  const auto kraus = kraus_from_choi(phi);
  CHECK(kraus.operators.size() == 2);
  for (const auto& w : kraus.weights) CHECK(w == doctest::Approx(1.0));
  const Operator x = 0.5 * (identity(2) + pauli_x() + pauli_z());
  Operator diag = x;
  diag(0, 1) = diag(1, 0) = 0.0;
  CHECK(hs_norm(kraus.apply(x) - diag) < 1e-10);
}

TEST_CASE("mixing across the resonance grid") {
  CHECK(mixing_check(kraus_from_choi(bump_map(pi))));
  CHECK(!mixing_check(kraus_from_choi(bump_map(2 * pi))));
  CHECK(!mixing_check(kraus_from_choi(bump_map(4 * pi))));
}

TEST_CASE("mixing agrees with the algebraic class on periodic models") {
  struct Case {
    const char* name;
    nlohmann::json overrides;
    double period;
  };
  const std::vector<Case> cases = {
      {"rotating-dephasing", {}, 2 * pi},
      {"driven-dephasing", nlohmann::json{{"l", 1}}, 2 * pi},
      {"ex-3.2", {}, 1.0},
      {"bump", {}, 1.0},
      {"bump", nlohmann::json{{"g_times_period", 2 * pi}}, 1.0},
  };
  for (const auto& c : cases) {
    auto entry = build_zoo(c.name, c.overrides);
    CAPTURE(c.name);
    const bool mixing =
        mixing_check(kraus_from_choi(one_cycle_map(entry.model, c.period)));
    const bool unique =
        classify(entry.model).steady_class == SteadyClass::I;
    CHECK(mixing == unique);
  }
}

TEST_CASE("floquet report") {
  auto entry = build_zoo("bump", {{"g_times_period", pi}});
  const auto report = floquet_analysis(entry.model, 1.0);
  CHECK(report.mixing);
  CHECK(report.kraus_rank == 2);
  const std::string json = report.to_json();
  CHECK(json.find("\"mixing\": true") != std::string::npos);
  CHECK(json.find("\"schema\": \"v1\"") != std::string::npos);

  CHECK_THROWS_AS(one_cycle_map(entry.model, 0.37), ModelContractError);
}
