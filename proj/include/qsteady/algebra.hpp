#pragma once

#include <span>
#include <vector>

#include "qsteady/model.hpp"

namespace qsteady {

// ---------------------------------------------------------------------------
// OperatorAlgebra: an orthonormal (Hilbert-Schmidt) basis of a linear
// subspace of B(H), tagged with how it was produced.
// ---------------------------------------------------------------------------

class OperatorAlgebra {
 public:
  enum class Kind { GeneratedAlgebra, Commutant, Subspace };

  OperatorAlgebra() = default;
  OperatorAlgebra(int dim_space, Kind kind, std::vector<Operator> orthonormal_basis);

  int dim_space() const { return dim_space_; }
  Kind kind() const { return kind_; }
  int dimension() const { return static_cast<int>(basis_.size()); }
  const std::vector<Operator>& basis() const { return basis_; }

  // Orthogonal projection of X onto the span.
  Operator project(const Operator& x) const;
  // ||X - P(X)|| <= contains_rel * ||X||
  bool contains(const Operator& x) const;

 private:
  int dim_space_ = 0;
  Kind kind_ = Kind::Subspace;
  std::vector<Operator> basis_;
};

// Smallest unital associative algebra containing the generators: span closure
// under products via incremental Gram-Schmidt with relative rank threshold.
OperatorAlgebra generate_algebra(std::span<const Operator> generators,
                                 bool include_identity = true);

// {O : [A_i, O] = 0 for all i}, via the null space of the stacked commutator
// matrices acting on vec(O). null_rel <= 0 selects the default rank
// threshold; routes whose generators carry integration error pass a looser
// one. For Hermitian generator sets the returned basis is Hermitian.
OperatorAlgebra commutant(std::span<const Operator> generators, double null_rel = 0.0);

bool is_full(const OperatorAlgebra& a);

// dimension 1 and the basis element proportional to the identity. A
// one-dimensional algebra whose element is not proportional to the identity
// raises NumericalInconsistencyError.
bool is_trivial(const OperatorAlgebra& a);

// Every basis element of a is contained in b.
bool subspace_leq(const OperatorAlgebra& a, const OperatorAlgebra& b);
// Largest membership residual of a's basis in b (for route diagnostics).
double subspace_residual(const OperatorAlgebra& a, const OperatorAlgebra& b);

// Orthonormalize a spanning set (modified Gram-Schmidt, one
// re-orthogonalization pass); drops dependent elements. rank_rel <= 0 selects
// the default rank threshold.
std::vector<Operator> orthonormal_span(std::span<const Operator> ops,
                                       double rank_rel = 0.0);

}  // namespace qsteady
