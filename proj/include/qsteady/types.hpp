#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qsteady {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;   // dense complex d x d matrix
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Superoperator matrix acting on column-stacked (vec) operators; d^2 x d^2.
using SuperMatrix = Eigen::MatrixXcd;

constexpr Complex kImag{0.0, 1.0};

// Raised when two independent computational routes disagree beyond tolerance,
// or when an internal consistency check fails (exit code 2 in the CLI).
class NumericalInconsistencyError : public std::runtime_error {
 public:
  explicit NumericalInconsistencyError(const std::string& what)
      : std::runtime_error(what) {}
};

// Raised when a model violates a structural contract, e.g. a non-Hermitian
// jump operator or a classification request on a non-quasiperiodic model
// (exit code 3 in the CLI).
class ModelContractError : public std::runtime_error {
 public:
  explicit ModelContractError(const std::string& what)
      : std::runtime_error(what) {}
};

// Every numerical threshold used by the library, in one place. The defaults
// are library policy; the CLI may override individual entries per run.
struct Tolerances {
  double hermitian_rel = 1e-12;       // |A - A^dag| <= tol * |A|
  double unitary = 1e-10;             // |U^dag U - I|_2 <= tol * sqrt(d)
  double propagator_unitary = 1e-9;   // drift allowed on integrated U_t
  double orthonormal = 1e-10;         // basis pairwise inner products
  double rank_rel = 1e-10;            // SVD / Gram-Schmidt rank decisions
  double sampled_null_rel = 1e-6;     // commutant null space from integrated
                                      // (propagator-carrying) generators
  double contains_rel = 1e-8;         // membership residual, relative
  double route_inclusion = 1e-7;      // mutual-inclusion residual between routes
  double freq_merge_rel = 1e-10;      // trig frequencies merged below this
  double profile_independence = 1e-8; // smallest/largest singular value ratio
  double trace_preserving = 1e-10;    // vec(I)^dag * L == 0
  double liouvillian_match = 1e-10;   // matrix form vs direct application
  double purity_slack = 1e-8;         // allowed purity increase per record
  double positivity_floor = -1e-7;    // eigenvalue floor for valid states
  double positivity_abort = -1e-5;    // integration aborts below this
  double steady_eps = 1e-4;           // epsilon_ss for steadiness windows
  double charge_drift = 1e-4;         // conserved-charge drift flag
  double choi_psd_floor = -1e-7;      // Choi eigenvalue negativity allowed
  double kraus_complete = 1e-7;       // |sum K^dag K - I|
  double kraus_word_rel = 1e-6;       // word-span rank decisions (the Kraus
                                      // set of an integrated map carries
                                      // integration error above rank_rel)
  double channel_match = 1e-7;        // reconstructed channel residual
  double peripheral_band = 1e-6;      // |z| >= 1 - band
  double pointwise_eval = 1e-8;       // ladder closed-form spot checks
};

// Write-once-at-startup configuration record shared by the whole library.
Tolerances& tolerances();

}  // namespace qsteady
