#pragma once

#include <optional>
#include <string>

#include "qsteady/algebra.hpp"

namespace qsteady {

// ---------------------------------------------------------------------------
// Adjoint ladder: ad_t(A) = i[H_t, A] + dA/dt applied repeatedly to each
// jump operator, kept in closed trigonometric form.
// ---------------------------------------------------------------------------

struct AdLadder {
  double t0 = 0.0;
  // rungs[m][n] = ad_t^n(L_{m,t}) as a closed-form profile sum.
  std::vector<std::vector<TimeDependentOperator>> rungs;
  // evaluations[m][n] = rungs[m][n] evaluated at t0.
  std::vector<std::vector<Operator>> evaluations;
  int depth_reached = 0;

  std::vector<Operator> all_evaluations() const;
};

// Requires an analytic (trig-profile) model. The ladder is truncated when the
// generated algebra of the evaluations stops growing (with a small patience
// so that rungs that merely vanish at t0 do not end it early), when it
// reaches the full algebra, or at max_depth.
AdLadder ad_ladder(const GkslModel& m, double t0, int max_depth = 0);

// A^ad_{t0} = <I, {ad^n(L_m)}> evaluated at t0.
OperatorAlgebra a_ad(const GkslModel& m, double t0);

// True iff A^ad_{t0} is the full operator algebra (unique steady state for
// quasiperiodic analytic generators).
bool uniqueness_by_ad(const GkslModel& m, double t0 = 0.0);

// ---------------------------------------------------------------------------
// Strong symmetries
// ---------------------------------------------------------------------------

enum class Route { CoefficientWise, AdLadder, Sampled, Both };

// {O : [H_t, O] = [L_{m,t}, O] = 0 for all m, t}. Uses the coefficient-wise
// commutant when each operator's profiles carry a linear-independence
// certificate, a sampled-time intersection otherwise; computes both and
// compares when feasible.
OperatorAlgebra c_sch(const GkslModel& m);

struct CIntOptions {
  Route route = Route::Both;   // Both falls back to Sampled for non-analytic models
  double t0 = 0.0;             // ladder expansion point (0: exact frame match)
  int n_samples = 64;          // starting grid size for the sampled route
  double dt = 0.0;             // propagator step; <= 0 picks a tight default
};

// {O : [tilde L_{m,t}, O] = 0 for all m, t} with tilde L = U^dag L U.
OperatorAlgebra c_int(const GkslModel& m, const CIntOptions& opts = {});

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

enum class SteadyClass { I, II, III, IV };
std::string to_string(SteadyClass c);

struct ClassificationReport {
  int dim_c_sch = 0;
  int dim_c_int = 0;
  bool inclusion_verified = false;
  SteadyClass steady_class = SteadyClass::I;
  std::string c_sch_route;
  std::string c_int_route;
  OperatorAlgebra c_sch_basis;
  OperatorAlgebra c_int_basis;

  std::string to_json() const;
};

ClassificationReport classify(const GkslModel& m, const CIntOptions& opts = {});

// ---------------------------------------------------------------------------
// Strong dynamical symmetry (time-independent models): [H, A] = Omega A and
// [L_m, A] = 0.
// ---------------------------------------------------------------------------

struct DynamicalSymmetryReport {
  bool is_sds = false;
  double omega = 0.0;
  bool trivial = false;      // Omega == 0 (ordinary strong symmetry)
  bool in_c_int = false;
  bool in_c_sch = false;
};

DynamicalSymmetryReport strong_dynamical_symmetry_check(const GkslModel& m,
                                                        const Operator& a);

}  // namespace qsteady
