#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qsteady/operators.hpp"
#include "qsteady/profile.hpp"

namespace qsteady {

// ---------------------------------------------------------------------------
// vec / unvec with the column-stacking convention: vec(A)[i + d*j] = A(i,j).
// All superoperator matrices in this library act on vec'd operators.
// ---------------------------------------------------------------------------

Vector vec(const Operator& a);
Operator unvec(const Vector& v, int d);
SuperMatrix kron(const Operator& a, const Operator& b);

// Superoperator matrices for X -> A X and X -> X A.
SuperMatrix left_mult(const Operator& a);
SuperMatrix right_mult(const Operator& a);

// ---------------------------------------------------------------------------
// TimeDependentOperator: finite sum of profile(t) * coefficient terms.
// ---------------------------------------------------------------------------

struct ProfiledTerm {
  Profile profile;
  Operator coeff;
};

class TimeDependentOperator {
 public:
  TimeDependentOperator() = default;
  TimeDependentOperator(int dim, std::vector<ProfiledTerm> terms);

  // Time-independent operator.
  static TimeDependentOperator constant(Operator op);

  Operator evaluate(double t) const;
  int dim() const { return dim_; }
  const std::vector<ProfiledTerm>& terms() const { return terms_; }
  bool analytic() const;           // every profile is a TrigProfile
  bool quasiperiodic() const;
  bool constant_in_time() const;
  double longest_period() const;
  std::vector<double> breakpoints(double t0, double t1) const;
  bool zero() const { return terms_.empty(); }

 private:
  int dim_ = 0;
  std::vector<ProfiledTerm> terms_;
};

// ---------------------------------------------------------------------------
// GkslModel
// ---------------------------------------------------------------------------

class GkslModel {
 public:
  // Jump operators must evaluate Hermitian; checked at 32 sampled times.
  GkslModel(HilbertSpec space, TimeDependentOperator hamiltonian,
            std::vector<TimeDependentOperator> jumps);

  const HilbertSpec& space() const { return space_; }
  int dim() const { return space_.dim; }
  const TimeDependentOperator& hamiltonian() const { return hamiltonian_; }
  const std::vector<TimeDependentOperator>& jumps() const { return jumps_; }

  bool analytic() const { return analytic_; }
  bool quasiperiodic() const { return quasiperiodic_; }
  bool time_independent() const;
  // All profiles constant or piecewise without coarse-graining: the generator
  // is constant between breakpoints and can be integrated segment-exactly.
  bool piecewise_constant() const;
  // Declared drive period (smallest common profile period), when one exists.
  std::optional<double> period() const { return period_; }

  std::vector<double> breakpoints(double t0, double t1) const;
  // max over sampled t of the spectral norm of H_t (step-size control).
  double hamiltonian_norm_bound() const { return h_norm_bound_; }
  double liouvillian_norm_bound() const;

  // Restriction to a particle-number sector (spinful-fermion spaces whose
  // coefficients all commute with N). Returns a model on a generic space of
  // the sector dimension.
  GkslModel restrict_to_number_sector(int n) const;

  // Fast-path data for liouvillian_apply: constant jumps are evaluated once;
  // constant diagonal jumps (dephasing by occupation operators) collapse to a
  // single elementwise damping mask W_ij = -1/2 sum_m (v_i - v_j)^2.
  struct JumpCache {
    bool all_constant = false;
    Eigen::MatrixXcd dephasing_mask;       // combined constant-diagonal jumps
    bool has_dephasing_mask = false;
    std::vector<Operator> constant_values;  // remaining constant jumps
    std::vector<Operator> constant_squares;
    std::vector<const TimeDependentOperator*> varying;
  };
  const JumpCache& jump_cache() const { return jump_cache_; }

 private:
  void build_jump_cache();

  HilbertSpec space_;
  TimeDependentOperator hamiltonian_;
  std::vector<TimeDependentOperator> jumps_;
  bool analytic_ = true;
  bool quasiperiodic_ = true;
  std::optional<double> period_;
  double h_norm_bound_ = 0.0;
  JumpCache jump_cache_;
};

// ---------------------------------------------------------------------------
// Liouvillian action and superoperator form
// ---------------------------------------------------------------------------

// -i[H_t, rho] + sum_m (L rho L - {L^2, rho}/2)
Operator liouvillian_apply(const GkslModel& m, double t, const Operator& rho);

SuperMatrix liouvillian_matrix(const GkslModel& m, double t);

// ---------------------------------------------------------------------------
// Propagators
// ---------------------------------------------------------------------------

// Default integration step: min(1e-2, 0.05 / max ||H_t||_2).
double default_unitary_step(const GkslModel& m);
double default_superop_step(const GkslModel& m);

// U_t = T exp(-i int_0^t H dt'), RK4 with per-step polar re-unitarization.
// dt <= 0 selects the default step.
Operator propagator_unitary(const GkslModel& m, double t, double dt = 0.0);

// U at several (sorted ascending, nonnegative) times, one sequential pass.
std::vector<Operator> propagator_at(const GkslModel& m, std::span<const double> times,
                                    double dt = 0.0);

// Interaction-picture jump operators tilde L_{m,t} = U_t^dag L_{m,t} U_t.
std::vector<Operator> interaction_jumps(const GkslModel& m, double t, double dt = 0.0);

// V_{s,t} = T exp(int_s^t L dt'): RK4 on the d^2 x d^2 ODE, or a product of
// segment matrix exponentials when the model is piecewise-constant.
SuperMatrix evolution_superoperator(const GkslModel& m, double s, double t,
                                    double dt = 0.0);

}  // namespace qsteady
