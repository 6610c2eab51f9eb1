#pragma once

#include <string>
#include <vector>

#include "qsteady/model.hpp"

namespace qsteady {

// ---------------------------------------------------------------------------
// Kraus representation of a quantum channel.
// ---------------------------------------------------------------------------

struct KrausSet {
  int dim = 0;
  std::vector<Operator> operators;
  std::vector<double> weights;  // retained Choi eigenvalues

  // sum_j K_j X K_j^dag
  Operator apply(const Operator& x) const;
  SuperMatrix to_superoperator() const;
};

// Choi matrix of a superoperator (column-stacking convention: the Choi matrix
// is sum_r vec(K_r) vec(K_r)^dag for any Kraus decomposition).
SuperMatrix choi_from_superop(const SuperMatrix& phi, int dim);
SuperMatrix superop_from_choi(const SuperMatrix& choi, int dim);

// Eigendecomposition of the Choi matrix, keeping eigenvalues above
// rank_tol x largest. Throws on significant Choi negativity.
KrausSet kraus_from_choi(const SuperMatrix& phi, double rank_tol = 1e-10);

// ---------------------------------------------------------------------------
// One-cycle analysis
// ---------------------------------------------------------------------------

// U_F = V_{0,T}. Verifies trace preservation, Hermiticity preservation and
// complete positivity of the integrated map.
SuperMatrix one_cycle_map(const GkslModel& m, double t_period, double dt = 0.0);

// True iff the span of Kraus words of growing length reaches the full
// operator algebra (unique fixed point with all states converging to it).
bool mixing_check(const KrausSet& k);

// Eigenvalues of the channel with |z| >= 1 - band.
std::vector<Complex> peripheral_spectrum(const SuperMatrix& phi, double band = 0.0);

struct FloquetReport {
  double period = 0.0;
  std::vector<Complex> peripheral_eigenvalues;
  int kraus_rank = 0;
  bool mixing = false;

  std::string to_json() const;
};

FloquetReport floquet_analysis(const GkslModel& m, double t_period, double dt = 0.0);

}  // namespace qsteady
