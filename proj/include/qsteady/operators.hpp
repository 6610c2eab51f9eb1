#pragma once

#include <array>
#include <map>
#include <vector>

#include "qsteady/types.hpp"

namespace qsteady {

// ---------------------------------------------------------------------------
// Hilbert-Schmidt geometry
// ---------------------------------------------------------------------------

// Tr[A^dag B]; conjugate-symmetric in its arguments.
Complex hs_inner(const Operator& a, const Operator& b);

// sqrt(Tr[A^dag A])
double hs_norm(const Operator& a);

Operator commutator(const Operator& a, const Operator& b);
Operator anticommutator(const Operator& a, const Operator& b);

bool is_hermitian(const Operator& a, double rel_tol);
bool is_unitary(const Operator& u, double tol_times_sqrt_d);

// Spectral norm (largest singular value).
double spectral_norm(const Eigen::MatrixXcd& a);

// ---------------------------------------------------------------------------
// Hilbert space description
// ---------------------------------------------------------------------------

struct HilbertSpec {
  enum class Kind { Generic, Qubits, SpinfulFermions };

  Kind kind = Kind::Generic;
  int dim = 0;        // total Hilbert space dimension d
  int qubits = 0;     // V, for Kind::Qubits
  int sites = 0;      // |Lambda|, for Kind::SpinfulFermions
  std::vector<std::pair<int, int>> bonds;  // 1-based site pairs

  static HilbertSpec generic(int d);
  static HilbertSpec qubit_chain(int v);
  // Open chain of spinful-fermion sites with nearest-neighbour bonds.
  static HilbertSpec fermion_chain(int sites);

  bool connected() const;  // bond graph connects all fermion sites
};

// ---------------------------------------------------------------------------
// Qubit operators
// ---------------------------------------------------------------------------

Operator pauli_x();
Operator pauli_y();
Operator pauli_z();
Operator identity(int d);

// Tensor product of single-site Paulis, identity elsewhere. Sites are
// 1-based; axis is one of 'x', 'y', 'z'.
Operator pauli_string(const HilbertSpec& spec, const std::map<int, char>& assignments);

// Majorana operator gamma_j (1 <= j <= 2V):
//   gamma_{2j-1} = (prod_{k<j} sx_k) sz_j,  gamma_{2j} = (prod_{k<j} sx_k) sy_j.
Operator majorana(const HilbertSpec& spec, int j);

// ---------------------------------------------------------------------------
// Spinful fermions (Jordan-Wigner)
// ---------------------------------------------------------------------------
// Mode ordering: all spin-up modes in site order, then all spin-down modes in
// site order. Operator matrices depend on this convention.

enum class Spin { Up, Down };

struct FermionOps {
  HilbertSpec spec;
  // Indexed [site-1][spin]; annihilation c_{j,sigma}.
  std::vector<std::array<Operator, 2>> c;

  const Operator& annihilate(int site, Spin s) const;
  Operator create(int site, Spin s) const;
  Operator number(int site, Spin s) const;   // n_{j,sigma}
  Operator number(int site) const;           // n_j = n_up + n_down
  Operator total_number() const;             // N
  Operator s_plus() const;                   // sum_j c^dag_{j,up} c_{j,down}
  Operator s_minus() const;
  Operator s_z() const;                      // (1/2) sum_j (n_up - n_down)
  Operator spin_x(int site) const;           // S^x_j
  Operator spin_y(int site) const;           // S^y_j
};

FermionOps fermion_ops(const HilbertSpec& spec);

// Orthogonal projector onto the total-particle-number-N eigenspace.
Operator number_sector_projector(const HilbertSpec& spec, int n);

// Computational-basis indices spanning the N-particle sector (the number
// operator is diagonal in the Jordan-Wigner basis).
std::vector<int> number_sector_indices(const HilbertSpec& spec, int n);

// Compress an operator to a subspace spanned by the given basis indices.
Operator restrict_to_indices(const Operator& op, const std::vector<int>& indices);

}  // namespace qsteady
