#include "qsteady/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace qsteady {

namespace {

// One integration pass at fixed step, invoking on_record at every point of
// the recording grid; returns false on a purity-slack violation (caller
// halves the step and retries). The recording grid is set by record_dt and
// survives step halving.
bool integrate_with_records(
    const GkslModel& m, const Operator& rho0, double t_end, double dt,
    double record_dt,
    const std::function<void(double, const Operator&)>& on_record) {
  Operator rho = rho0;
  double last_purity = rho.squaredNorm();
  const double slack = tolerances().purity_slack;
  on_record(0.0, rho);

  const int n_records = static_cast<int>(std::ceil(t_end / record_dt - 1e-12));
  double t = 0.0;
  for (int rec = 0; rec < n_records; ++rec) {
    const double t_next = std::min(t_end, (rec + 1) * record_dt);
    // Sub-steps within the record interval, snapped to profile breakpoints.
    std::vector<double> grid = {t};
    auto pts = m.breakpoints(t, t_next);
    grid.insert(grid.end(), pts.begin(), pts.end());
    grid.push_back(t_next);
    for (std::size_t s = 0; s + 1 < grid.size(); ++s) {
      const double a = grid[s];
      const double b = grid[s + 1];
      // Right-edge stages are clamped inside the segment: piecewise profiles
      // are right-continuous at breakpoints.
      const double interior = b - 1e-9 * (b - a);
      const int n_steps = std::max<int>(1, static_cast<int>(std::ceil((b - a) / dt - 1e-12)));
      const double h = (b - a) / n_steps;
      for (int k = 0; k < n_steps; ++k) {
        const double tk = a + k * h;
        const Operator k1 = liouvillian_apply(m, tk, rho);
        const Operator k2 = liouvillian_apply(m, tk + h / 2, rho + (h / 2) * k1);
        const Operator k3 = liouvillian_apply(m, tk + h / 2, rho + (h / 2) * k2);
        const Operator k4 =
            liouvillian_apply(m, std::min(tk + h, interior), rho + h * k3);
        rho += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
        rho = 0.5 * (rho + rho.adjoint()).eval();
      }
    }
    t = t_next;
    const double purity = rho.squaredNorm();
    if (purity > last_purity + slack) return false;
    last_purity = purity;

    Eigen::SelfAdjointEigenSolver<Operator> es(rho, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < tolerances().positivity_abort) {
      std::ostringstream msg;
      msg << "evolve: state positivity violated (min eigenvalue " << min_eig
          << " at t=" << t << "); reduce dt below " << dt / 2;
      throw NumericalInconsistencyError(msg.str());
    }
    on_record(t, rho);
  }
  return true;
}

void check_evolve_inputs(const GkslModel& m, const Operator& rho0, double t_end) {
  if (rho0.rows() != m.dim() || rho0.cols() != m.dim()) {
    throw std::invalid_argument("evolve: state dimension mismatch");
  }
  if (std::abs(rho0.trace().real() - 1.0) > 1e-9 || !is_hermitian(rho0, 1e-9)) {
    throw ModelContractError("evolve: initial state is not a density matrix");
  }
  if (t_end <= 0) throw std::invalid_argument("evolve: t_end must be positive");
}

// Retry wrapper: halves the step until the recorded purities are
// non-increasing within the allowed slack.
void evolve_with_retries(
    const GkslModel& m, const Operator& rho0, double t_end, double dt,
    double record_dt, const std::function<void()>& reset,
    const std::function<void(double, const Operator&)>& on_record) {
  for (int attempt = 0; attempt < 7; ++attempt) {
    reset();
    if (integrate_with_records(m, rho0, t_end, dt, record_dt, on_record)) return;
    dt /= 2;
  }
  throw NumericalInconsistencyError(
      "evolve: purity monotonicity could not be restored by step halving");
}

}  // namespace

Trajectory evolve(const GkslModel& m, const Operator& rho0, double t_end, double dt,
                  int record_every) {
  check_evolve_inputs(m, rho0, t_end);
  if (dt <= 0) dt = 1e-2;
  if (record_every < 1) record_every = 1;

  Trajectory out;
  out.dt = dt;
  evolve_with_retries(
      m, rho0, t_end, dt, dt * record_every,
      [&] {
        out.times.clear();
        out.states.clear();
      },
      [&](double t, const Operator& rho) {
        out.times.push_back(t);
        out.states.push_back(rho);
      });
  return out;
}

ObservableSeries evolve_observables(const GkslModel& m, const Operator& rho0,
                                    double t_end, double dt, int record_every,
                                    std::span<const Operator> observables) {
  check_evolve_inputs(m, rho0, t_end);
  if (dt <= 0) dt = 1e-2;
  if (record_every < 1) record_every = 1;

  ObservableSeries out;
  out.values.resize(observables.size());
  evolve_with_retries(
      m, rho0, t_end, dt, dt * record_every,
      [&] {
        out.times.clear();
        out.purity.clear();
        for (auto& column : out.values) column.clear();
      },
      [&](double t, const Operator& rho) {
        out.times.push_back(t);
        out.purity.push_back(rho.squaredNorm());
        for (std::size_t i = 0; i < observables.size(); ++i) {
          out.values[i].push_back((observables[i] * rho).trace().real());
        }
      });
  return out;
}

Operator haar_random_state(int dim, std::uint64_t seed, std::span<const int> sector) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector psi = Vector::Zero(dim);
  if (sector.empty()) {
    for (int i = 0; i < dim; ++i) psi(i) = Complex(gauss(rng), gauss(rng));
  } else {
    for (int idx : sector) psi(idx) = Complex(gauss(rng), gauss(rng));
  }
  psi.normalize();
  return psi * psi.adjoint();
}

// ---------------------------------------------------------------------------

std::string to_string(TrajectoryVerdict v) {
  switch (v) {
    case TrajectoryVerdict::MaximallyMixed: return "maximally-mixed";
    case TrajectoryVerdict::FixedState: return "fixed-state";
    case TrajectoryVerdict::TimeDependent: return "time-dependent";
    case TrajectoryVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

ProbeResult steady_state_probe(const GkslModel& m,
                               const std::vector<Trajectory>& trajectories,
                               double window) {
  if (trajectories.empty()) {
    throw std::invalid_argument("steady_state_probe: no trajectories");
  }
  const int d = m.dim();
  const Operator mixed = identity(d) / double(d);
  const double eps = tolerances().steady_eps;

  ProbeResult result;
  result.window = window;
  bool any_fixed = false;
  bool any_timedep = false;
  bool any_inconclusive = false;

  for (const auto& traj : trajectories) {
    const double t_end = traj.times.back();
    std::size_t first = 0;
    while (first < traj.times.size() && traj.times[first] < t_end - window) ++first;
    if (first + 2 > traj.times.size()) {
      throw std::invalid_argument("steady_state_probe: window longer than trajectory");
    }

    Operator mean = Operator::Zero(d, d);
    for (std::size_t k = first; k < traj.states.size(); ++k) mean += traj.states[k];
    mean /= double(traj.states.size() - first);

    double max_dev_mixed = 0.0;
    double max_dev_mean = 0.0;
    for (std::size_t k = first; k < traj.states.size(); ++k) {
      max_dev_mixed = std::max(max_dev_mixed, hs_norm(traj.states[k] - mixed));
      max_dev_mean = std::max(max_dev_mean, hs_norm(traj.states[k] - mean));
    }

    TrajectoryVerdict verdict;
    if (max_dev_mixed < eps) {
      verdict = TrajectoryVerdict::MaximallyMixed;
    } else if (max_dev_mean < eps && hs_norm(mean - mixed) >= 10 * eps) {
      verdict = TrajectoryVerdict::FixedState;
      any_fixed = true;
    } else if (max_dev_mean > 10 * eps) {
      verdict = TrajectoryVerdict::TimeDependent;
      any_timedep = true;
    } else {
      verdict = TrajectoryVerdict::Inconclusive;
      any_inconclusive = true;
    }
    result.verdicts.push_back(verdict);
  }

  result.conclusive = !any_inconclusive;
  if (result.conclusive) {
    if (any_fixed && any_timedep) result.empirical_class = SteadyClass::III;
    else if (any_fixed) result.empirical_class = SteadyClass::II;
    else if (any_timedep) result.empirical_class = SteadyClass::IV;
    else result.empirical_class = SteadyClass::I;
  }
  return result;
}

// ---------------------------------------------------------------------------

ChargeSeries interaction_conserved_charges(const GkslModel& m, const Operator& rho0,
                                           const OperatorAlgebra& c_int_basis,
                                           double t_end, double dt, int record_every) {
  const auto traj = evolve(m, rho0, t_end, dt, record_every);
  const auto props = propagator_at(m, traj.times,
                                   dt > 0 ? dt : default_unitary_step(m));

  ChargeSeries series;
  series.times = traj.times;
  series.charges.resize(c_int_basis.basis().size());
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const Operator rotated = props[k].adjoint() * traj.states[k] * props[k];
    for (std::size_t i = 0; i < c_int_basis.basis().size(); ++i) {
      series.charges[i].push_back(hs_inner(c_int_basis.basis()[i], rotated).real());
    }
  }

  // Drift over the final 20% of the run.
  const std::size_t tail = series.times.size() - series.times.size() / 5;
  for (const auto& values : series.charges) {
    double lo = values[tail], hi = values[tail];
    for (std::size_t k = tail; k < values.size(); ++k) {
      lo = std::min(lo, values[k]);
      hi = std::max(hi, values[k]);
    }
    series.drift_flag.push_back(hi - lo > tolerances().charge_drift);
  }
  return series;
}

// ---------------------------------------------------------------------------

double window_contraction(const GkslModel& m, double t0, double delta, double dt) {
  if (delta <= 0) throw std::invalid_argument("window_contraction: delta > 0 required");
  const int d = m.dim();
  const SuperMatrix v = evolution_superoperator(m, t0, t0 + delta, dt);
  // Compress rows and columns onto the orthogonal complement of vec(I).
  const Vector id = vec(identity(d)) / std::sqrt(double(d));
  const SuperMatrix proj = SuperMatrix::Identity(d * d, d * d) - id * id.adjoint();
  return spectral_norm(proj * v * proj);
}

// ---------------------------------------------------------------------------

SpectrumResult fourier_spectrum(std::span<const double> times,
                                std::span<const double> values,
                                double window_center, double window_width) {
  if (times.size() != values.size() || times.size() < 4) {
    throw std::invalid_argument("fourier_spectrum: bad series");
  }
  const std::size_t n = times.size();
  const double step = times[1] - times[0];
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (std::abs((times[k + 1] - times[k]) - step) > 1e-9 * std::max(1.0, step)) {
      throw std::invalid_argument("fourier_spectrum: non-uniform time grid");
    }
  }

  const std::size_t padded = 4 * n;
  std::vector<std::complex<double>> buf(padded, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = std::exp(-std::pow((times[k] - window_center) / window_width, 2));
    buf[k] = values[k] * w;
  }

  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(padded),
                                    reinterpret_cast<fftw_complex*>(buf.data()),
                                    reinterpret_cast<fftw_complex*>(buf.data()),
                                    FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  SpectrumResult result;
  result.window_center = window_center;
  result.window_width = window_width;
  result.frequencies.resize(padded);
  result.magnitudes.resize(padded);
  const double dw = 2.0 * std::numbers::pi / (static_cast<double>(padded) * step);
  // fftshift: negative frequencies first.
  const std::size_t half = padded / 2;
  for (std::size_t k = 0; k < padded; ++k) {
    const std::size_t src = (k + half) % padded;
    const auto signed_index =
        static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(half);
    result.frequencies[k] = static_cast<double>(signed_index) * dw;
    result.magnitudes[k] = std::abs(buf[src]) * step;
  }

  // Peak extraction on the nonnegative half with topographic prominence.
  const double max_mag =
      *std::max_element(result.magnitudes.begin(), result.magnitudes.end());
  const double threshold = 0.05 * max_mag;
  const auto& mags = result.magnitudes;
  for (std::size_t k = half; k + 1 < padded; ++k) {
    if (k > 0 && !(mags[k] > mags[k - 1] && mags[k] >= mags[k + 1])) continue;
    // Walk to the nearest higher ground on each side; the prominence is the
    // height above the higher of the two intervening minima.
    double left_min = mags[k];
    bool left_higher = false;
    for (std::size_t i = k; i-- > 0;) {
      left_min = std::min(left_min, mags[i]);
      if (mags[i] > mags[k]) { left_higher = true; break; }
    }
    double right_min = mags[k];
    bool right_higher = false;
    for (std::size_t i = k + 1; i < padded; ++i) {
      right_min = std::min(right_min, mags[i]);
      if (mags[i] > mags[k]) { right_higher = true; break; }
    }
    double base;
    if (left_higher && right_higher) base = std::max(left_min, right_min);
    else if (left_higher) base = left_min;
    else if (right_higher) base = right_min;
    else base = std::min(left_min, right_min);  // global maximum
    const double prominence = mags[k] - base;
    if (prominence >= threshold) {
      result.peaks.push_back({result.frequencies[k], mags[k], prominence});
    }
  }
  return result;
}

}  // namespace qsteady
