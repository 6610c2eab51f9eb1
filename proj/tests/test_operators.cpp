#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qsteady/operators.hpp"

using namespace qsteady;

namespace {

Operator random_matrix(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Operator m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  return m;
}

}  // namespace

TEST_CASE("hs_inner on Pauli operators") {
  CHECK(hs_inner(identity(2), identity(2)) == Complex(2.0, 0.0));
  CHECK(std::abs(hs_inner(pauli_x(), pauli_y())) < 1e-15);
  CHECK(hs_inner(pauli_z(), pauli_z()).real() == doctest::Approx(2.0));

  std::mt19937_64 rng(7);
  const Operator a = random_matrix(3, rng);
  const Operator b = random_matrix(3, rng);
  CHECK(std::abs(hs_inner(a, b) - std::conj(hs_inner(b, a))) < 1e-12);

  CHECK_THROWS_AS(hs_inner(identity(2), identity(3)), std::invalid_argument);
}

TEST_CASE("hs_norm") {
  CHECK(hs_norm(identity(2)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(hs_norm(pauli_x()) == doctest::Approx(std::sqrt(2.0)));
  CHECK(hs_norm(Operator::Zero(4, 4)) == 0.0);
}

TEST_CASE("commutator identities") {
  CHECK(hs_norm(commutator(pauli_x(), pauli_y()) - 2.0 * kImag * pauli_z()) < 1e-14);
  CHECK(hs_norm(commutator(pauli_z(), pauli_z())) == 0.0);

  auto spec = HilbertSpec::qubit_chain(2);
  const Operator g1 = majorana(spec, 1);
  const Operator g2 = majorana(spec, 2);
  CHECK(hs_norm(commutator(g1, g2) - 2.0 * g1 * g2) < 1e-13);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Operator a = random_matrix(4, rng);
    const Operator b = random_matrix(4, rng);
    CHECK(std::abs(commutator(a, b).trace()) < 1e-12 * hs_norm(a) * hs_norm(b));
  }
}

TEST_CASE("pauli_string tensor placement") {
  auto spec2 = HilbertSpec::qubit_chain(2);
  Operator expect(4, 4);
  expect.setZero();
  expect(0, 0) = 1;
  expect(1, 1) = 1;
  expect(2, 2) = -1;
  expect(3, 3) = -1;  // sz (x) I
  CHECK(hs_norm(pauli_string(spec2, {{1, 'z'}}) - expect) < 1e-15);

  Operator zz = Operator::Zero(4, 4);
  zz(0, 0) = 1;
  zz(1, 1) = -1;
  zz(2, 2) = -1;
  zz(3, 3) = 1;
  CHECK(hs_norm(pauli_string(spec2, {{1, 'z'}, {2, 'z'}}) - zz) < 1e-15);

  auto spec1 = HilbertSpec::qubit_chain(1);
  CHECK(hs_norm(pauli_string(spec1, {{1, 'x'}}) - pauli_x()) < 1e-15);
  CHECK_THROWS_AS(pauli_string(spec1, {{2, 'x'}}), std::invalid_argument);
}

TEST_CASE("pauli basis orthogonality") {
  auto spec = HilbertSpec::qubit_chain(2);
  const char axes[] = {'i', 'x', 'y', 'z'};
  std::vector<Operator> strings;
  for (char a1 : axes)
    for (char a2 : axes) {
      std::map<int, char> assign;
      if (a1 != 'i') assign[1] = a1;
      if (a2 != 'i') assign[2] = a2;
      strings.push_back(pauli_string(spec, assign));
    }
  for (std::size_t p = 0; p < strings.size(); ++p) {
    for (std::size_t q = 0; q < strings.size(); ++q) {
      const Complex inner = hs_inner(strings[p], strings[q]);
      CHECK(std::abs(inner - (p == q ? Complex(4.0) : Complex(0.0))) < 1e-13);
    }
  }
}

TEST_CASE("majorana operators") {
  auto spec1 = HilbertSpec::qubit_chain(1);
  CHECK(hs_norm(majorana(spec1, 1) - pauli_z()) < 1e-15);
  CHECK(hs_norm(majorana(spec1, 2) - pauli_y()) < 1e-15);

  auto spec2 = HilbertSpec::qubit_chain(2);
  Operator xz = Operator::Zero(4, 4);
  xz(0, 2) = 1;
  xz(1, 3) = -1;
  xz(2, 0) = 1;
  xz(3, 1) = -1;  // sx (x) sz
  CHECK(hs_norm(majorana(spec2, 3) - xz) < 1e-15);

  auto spec3 = HilbertSpec::qubit_chain(3);
  const int d = spec3.dim;
  for (int j = 1; j <= 6; ++j) {
    const Operator gj = majorana(spec3, j);
    CHECK(is_hermitian(gj, 1e-14));
    for (int k = 1; k <= 6; ++k) {
      const Operator gk = majorana(spec3, k);
      const Operator acomm =
          anticommutator(gj, gk) - (j == k ? 2.0 : 0.0) * identity(d);
      CHECK(spectral_norm(acomm) < 1e-12 * std::sqrt(double(d)));
    }
  }
  CHECK_THROWS_AS(majorana(spec3, 7), std::invalid_argument);
  CHECK_THROWS_AS(majorana(spec3, 0), std::invalid_argument);
}

TEST_CASE("fermion operators satisfy the canonical anticommutation relations") {
  auto spec = HilbertSpec::fermion_chain(2);
  const auto f = fermion_ops(spec);
  const int d = spec.dim;

  std::vector<Operator> modes;
  for (int site = 1; site <= 2; ++site) {
    modes.push_back(f.annihilate(site, Spin::Up));
    modes.push_back(f.annihilate(site, Spin::Down));
  }
  for (std::size_t p = 0; p < modes.size(); ++p) {
    for (std::size_t q = 0; q < modes.size(); ++q) {
      CHECK(hs_norm(anticommutator(modes[p], modes[q])) < 1e-12);
      const Operator car = anticommutator(modes[p], modes[q].adjoint()) -
                           (p == q ? 1.0 : 0.0) * identity(d);
      CHECK(hs_norm(car) < 1e-12);
    }
  }
}

TEST_CASE("occupation spectrum on one site") {
  auto spec = HilbertSpec::fermion_chain(1);
  const auto f = fermion_ops(spec);
  Eigen::SelfAdjointEigenSolver<Operator> es(f.number(1));
  RealVector expect(4);
  expect << 0, 1, 1, 2;
  CHECK((es.eigenvalues() - expect).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("number sector projectors") {
  auto spec1 = HilbertSpec::fermion_chain(1);
  const Operator p0 = number_sector_projector(spec1, 0);
  const Operator p2 = number_sector_projector(spec1, 2);
  CHECK(p0.trace().real() == doctest::Approx(1.0));
  CHECK(p2.trace().real() == doctest::Approx(1.0));
  CHECK(hs_norm(p0 * p0 - p0) < 1e-15);
  CHECK(hs_norm(p0 - p0.adjoint()) < 1e-15);

  // Oracle: count basis states with two of four modes occupied.
  auto spec2 = HilbertSpec::fermion_chain(2);
  int count = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) ++count;
  const Operator p = number_sector_projector(spec2, 2);
  CHECK(p.trace().real() == doctest::Approx(double(count)));
  CHECK(count == 6);

  // Projector selects the N = 2 eigenspace of the number operator.
  const auto f = fermion_ops(spec2);
  CHECK(hs_norm(f.total_number() * p - 2.0 * p) < 1e-12);
}

TEST_CASE("spin ladder algebra") {
  auto spec = HilbertSpec::fermion_chain(2);
  const auto f = fermion_ops(spec);
  CHECK(hs_norm(commutator(f.s_plus(), f.s_minus()) - 2.0 * f.s_z()) < 1e-12);
  CHECK(hs_norm(commutator(f.s_z(), f.s_plus()) - f.s_plus()) < 1e-12);
  CHECK(hs_norm(commutator(f.total_number(), f.s_plus())) < 1e-12);
}

TEST_CASE("hilbert specs") {
  CHECK(HilbertSpec::qubit_chain(3).dim == 8);
  CHECK(HilbertSpec::fermion_chain(2).dim == 16);
  CHECK(HilbertSpec::fermion_chain(3).connected());
  HilbertSpec broken = HilbertSpec::fermion_chain(3);
  broken.bonds.pop_back();
  CHECK(!broken.connected());
  CHECK_THROWS_AS(HilbertSpec::generic(0), std::invalid_argument);
}

TEST_CASE("sector restriction") {
  auto spec = HilbertSpec::fermion_chain(2);
  const auto f = fermion_ops(spec);
  const auto idx = number_sector_indices(spec, 2);
  CHECK(idx.size() == 6);
  const Operator n_restricted = restrict_to_indices(f.total_number(), idx);
  CHECK(hs_norm(n_restricted - 2.0 * identity(6)) < 1e-13);
}
