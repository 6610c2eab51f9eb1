#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qsteady/classifier.hpp"

namespace qsteady {

// ---------------------------------------------------------------------------
// Trajectory integration (RK4, Hermiticity re-symmetrized every step).
// ---------------------------------------------------------------------------

struct Trajectory {
  std::vector<double> times;
  std::vector<Operator> states;
  double dt = 0.0;

  double purity(std::size_t k) const { return states[k].squaredNorm(); }
};

// Integrates d rho/dt = L_t(rho). The step is halved (up to 6 times) until
// the recorded purities are non-increasing within the allowed slack; a
// positivity violation beyond tolerance aborts with step-size advice.
Trajectory evolve(const GkslModel& m, const Operator& rho0, double t_end,
                  double dt = 0.0, int record_every = 1);

// Haar-random pure state; optionally restricted to the span of the given
// computational-basis indices.
Operator haar_random_state(int dim, std::uint64_t seed,
                           std::span<const int> sector_indices = {});

// Streaming variant for long runs: records observable expectations and the
// purity instead of holding every state (memory stays O(d^2)).
struct ObservableSeries {
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // values[i][k]: observable i
  std::vector<double> purity;
};

ObservableSeries evolve_observables(const GkslModel& m, const Operator& rho0,
                                    double t_end, double dt, int record_every,
                                    std::span<const Operator> observables);

// ---------------------------------------------------------------------------
// Empirical steady-state classification
// ---------------------------------------------------------------------------

enum class TrajectoryVerdict { MaximallyMixed, FixedState, TimeDependent, Inconclusive };
std::string to_string(TrajectoryVerdict v);

struct ProbeResult {
  std::vector<TrajectoryVerdict> verdicts;
  bool conclusive = false;
  SteadyClass empirical_class = SteadyClass::I;  // valid when conclusive
  double window = 0.0;
};

// Inspects the final window of each trajectory: converged to I/d, converged
// to a fixed state, persistently time-dependent, or inconclusive; aggregates
// to a class when no trajectory is ambiguous.
ProbeResult steady_state_probe(const GkslModel& m,
                               const std::vector<Trajectory>& trajectories,
                               double window);

// ---------------------------------------------------------------------------
// Interaction-picture conserved charges
// ---------------------------------------------------------------------------

struct ChargeSeries {
  std::vector<double> times;
  // charges[i][k] = Re <Q_i, U_t^dag rho_t U_t> at times[k]
  std::vector<std::vector<double>> charges;
  std::vector<bool> drift_flag;  // drift above tolerance in the final 20%
};

ChargeSeries interaction_conserved_charges(const GkslModel& m, const Operator& rho0,
                                           const OperatorAlgebra& c_int_basis,
                                           double t_end, double dt = 0.0,
                                           int record_every = 10);

// ---------------------------------------------------------------------------
// Contraction diagnostics
// ---------------------------------------------------------------------------

// lambda_0 = |||V_{t0, t0+delta}|||'_2: largest singular value of the
// evolution superoperator compressed to the traceless subspace.
double window_contraction(const GkslModel& m, double t0, double delta, double dt = 0.0);

// ---------------------------------------------------------------------------
// Windowed Fourier spectra
// ---------------------------------------------------------------------------

struct SpectrumResult {
  std::vector<double> frequencies;  // angular, symmetric around 0
  std::vector<double> magnitudes;
  double window_center = 0.0;
  double window_width = 0.0;
  // Local maxima on the nonnegative-frequency half with topographic
  // prominence above 5% of the maximum magnitude.
  struct Peak {
    double frequency;
    double magnitude;
    double prominence;
  };
  std::vector<Peak> peaks;
};

// Gaussian-windowed discrete Fourier transform (zero-padded x4) of a
// uniformly sampled series, with peak extraction.
SpectrumResult fourier_spectrum(std::span<const double> times,
                                std::span<const double> values,
                                double window_center, double window_width);

}  // namespace qsteady
