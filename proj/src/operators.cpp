#include "qsteady/operators.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <bit>
#include <numeric>

namespace qsteady {

Tolerances& tolerances() {
  static Tolerances t;
  return t;
}

Complex hs_inner(const Operator& a, const Operator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("hs_inner: dimension mismatch");
  }
  return (a.adjoint() * b).trace();
}

double hs_norm(const Operator& a) { return a.norm(); }

Operator commutator(const Operator& a, const Operator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("commutator: dimension mismatch");
  }
  return a * b - b * a;
}

Operator anticommutator(const Operator& a, const Operator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("anticommutator: dimension mismatch");
  }
  return a * b + b * a;
}

bool is_hermitian(const Operator& a, double rel_tol) {
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

bool is_unitary(const Operator& u, double tol_times_sqrt_d) {
  const int d = static_cast<int>(u.rows());
  const Operator gram = u.adjoint() * u - identity(d);
  return spectral_norm(gram) <= tol_times_sqrt_d * std::sqrt(double(d));
}

double spectral_norm(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues()(0);
}

// ---------------------------------------------------------------------------

HilbertSpec HilbertSpec::generic(int d) {
  if (d < 1) throw std::invalid_argument("HilbertSpec: dimension must be positive");
  HilbertSpec s;
  s.kind = Kind::Generic;
  s.dim = d;
  return s;
}

HilbertSpec HilbertSpec::qubit_chain(int v) {
  if (v < 1) throw std::invalid_argument("HilbertSpec: need at least one qubit");
  HilbertSpec s;
  s.kind = Kind::Qubits;
  s.qubits = v;
  s.dim = 1 << v;
  return s;
}

HilbertSpec HilbertSpec::fermion_chain(int sites) {
  if (sites < 1) throw std::invalid_argument("HilbertSpec: need at least one site");
  HilbertSpec s;
  s.kind = Kind::SpinfulFermions;
  s.sites = sites;
  s.dim = 1 << (2 * sites);
  for (int j = 1; j < sites; ++j) s.bonds.push_back({j, j + 1});
  return s;
}

bool HilbertSpec::connected() const {
  if (kind != Kind::SpinfulFermions || sites == 0) return false;
  std::vector<int> root(sites);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (auto [a, b] : bonds) {
    if (a < 1 || a > sites || b < 1 || b > sites) return false;
    root[find(a - 1)] = find(b - 1);
  }
  for (int j = 1; j < sites; ++j) {
    if (find(j) != find(0)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Operator pauli_x() {
  Operator m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Operator pauli_y() {
  Operator m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Operator pauli_z() {
  Operator m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Operator identity(int d) { return Operator::Identity(d, d); }

namespace {

Operator kron(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Operator single_site(char axis) {
  switch (axis) {
    case 'x': return pauli_x();
    case 'y': return pauli_y();
    case 'z': return pauli_z();
    default: throw std::invalid_argument("pauli axis must be x, y or z");
  }
}

}  // namespace

Operator pauli_string(const HilbertSpec& spec, const std::map<int, char>& assignments) {
  if (spec.kind != HilbertSpec::Kind::Qubits) {
    throw std::invalid_argument("pauli_string: qubit space required");
  }
  Operator out = Operator::Identity(1, 1);
  for (int site = 1; site <= spec.qubits; ++site) {
    auto it = assignments.find(site);
    out = kron(out, it == assignments.end() ? identity(2) : single_site(it->second));
  }
  for (const auto& [site, axis] : assignments) {
    if (site < 1 || site > spec.qubits) {
      throw std::invalid_argument("pauli_string: site out of range");
    }
  }
  return out;
}

Operator majorana(const HilbertSpec& spec, int j) {
  if (spec.kind != HilbertSpec::Kind::Qubits) {
    throw std::invalid_argument("majorana: qubit space required");
  }
  if (j < 1 || j > 2 * spec.qubits) {
    throw std::invalid_argument("majorana: index out of range");
  }
  const int site = (j + 1) / 2;  // gamma_{2j-1}, gamma_{2j} live on site j
  std::map<int, char> s;
  for (int k = 1; k < site; ++k) s[k] = 'x';
  s[site] = (j % 2 == 1) ? 'z' : 'y';
  return pauli_string(spec, s);
}

// ---------------------------------------------------------------------------

namespace {

// Jordan-Wigner annihilator for a given mode among n_modes total.
// |0> = empty, |1> = occupied; mode 0 is the leftmost tensor factor.
Operator jw_annihilator(int mode, int n_modes) {
  Operator lower(2, 2), z(2, 2);
  lower << 0, 1, 0, 0;  // |0><1|
  z << 1, 0, 0, -1;
  Operator out = Operator::Identity(1, 1);
  for (int q = 0; q < n_modes; ++q) {
    if (q < mode) out = kron(out, z);
    else if (q == mode) out = kron(out, lower);
    else out = kron(out, identity(2));
  }
  return out;
}

int mode_index(const HilbertSpec& spec, int site, Spin s) {
  // Spin-up modes of all sites first, then spin-down, each in site order.
  return (s == Spin::Up ? 0 : spec.sites) + (site - 1);
}

}  // namespace

FermionOps fermion_ops(const HilbertSpec& spec) {
  if (spec.kind != HilbertSpec::Kind::SpinfulFermions) {
    throw std::invalid_argument("fermion_ops: spinful-fermion space required");
  }
  const int n_modes = 2 * spec.sites;
  FermionOps ops;
  ops.spec = spec;
  ops.c.resize(spec.sites);
  for (int site = 1; site <= spec.sites; ++site) {
    ops.c[site - 1][0] = jw_annihilator(mode_index(spec, site, Spin::Up), n_modes);
    ops.c[site - 1][1] = jw_annihilator(mode_index(spec, site, Spin::Down), n_modes);
  }
  return ops;
}

const Operator& FermionOps::annihilate(int site, Spin s) const {
  return c.at(site - 1)[s == Spin::Up ? 0 : 1];
}

Operator FermionOps::create(int site, Spin s) const {
  return annihilate(site, s).adjoint();
}

Operator FermionOps::number(int site, Spin s) const {
  return create(site, s) * annihilate(site, s);
}

Operator FermionOps::number(int site) const {
  return number(site, Spin::Up) + number(site, Spin::Down);
}

Operator FermionOps::total_number() const {
  Operator n = Operator::Zero(spec.dim, spec.dim);
  for (int j = 1; j <= spec.sites; ++j) n += number(j);
  return n;
}

Operator FermionOps::s_plus() const {
  Operator s = Operator::Zero(spec.dim, spec.dim);
  for (int j = 1; j <= spec.sites; ++j) {
    s += create(j, Spin::Up) * annihilate(j, Spin::Down);
  }
  return s;
}

Operator FermionOps::s_minus() const { return s_plus().adjoint(); }

Operator FermionOps::s_z() const {
  Operator s = Operator::Zero(spec.dim, spec.dim);
  for (int j = 1; j <= spec.sites; ++j) {
    s += 0.5 * (number(j, Spin::Up) - number(j, Spin::Down));
  }
  return s;
}

Operator FermionOps::spin_x(int site) const {
  return 0.5 * (create(site, Spin::Up) * annihilate(site, Spin::Down) +
                create(site, Spin::Down) * annihilate(site, Spin::Up));
}

Operator FermionOps::spin_y(int site) const {
  return (0.5 / kImag) * (create(site, Spin::Up) * annihilate(site, Spin::Down) -
                          create(site, Spin::Down) * annihilate(site, Spin::Up));
}

std::vector<int> number_sector_indices(const HilbertSpec& spec, int n) {
  if (spec.kind != HilbertSpec::Kind::SpinfulFermions) {
    throw std::invalid_argument("number sector: spinful-fermion space required");
  }
  if (n < 0 || n > 2 * spec.sites) {
    throw std::invalid_argument("number sector: N out of range");
  }
  std::vector<int> idx;
  for (int b = 0; b < spec.dim; ++b) {
    if (std::popcount(static_cast<unsigned>(b)) == n) idx.push_back(b);
  }
  return idx;
}

Operator number_sector_projector(const HilbertSpec& spec, int n) {
  Operator p = Operator::Zero(spec.dim, spec.dim);
  for (int b : number_sector_indices(spec, n)) p(b, b) = 1.0;
  return p;
}

Operator restrict_to_indices(const Operator& op, const std::vector<int>& indices) {
  const int k = static_cast<int>(indices.size());
  Operator out(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out(i, j) = op(indices[i], indices[j]);
  return out;
}

}  // namespace qsteady
