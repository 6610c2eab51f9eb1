#include "qsteady/model.hpp"

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace qsteady {

Vector vec(const Operator& a) {
  return Eigen::Map<const Vector>(a.data(), a.size());
}

Operator unvec(const Vector& v, int d) {
  return Eigen::Map<const Operator>(v.data(), d, d);
}

SuperMatrix kron(const Operator& a, const Operator& b) {
  SuperMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

SuperMatrix left_mult(const Operator& a) {
  // vec(A X) = (I (x) A) vec(X)
  return kron(identity(static_cast<int>(a.rows())), a);
}

SuperMatrix right_mult(const Operator& a) {
  // vec(X A) = (A^T (x) I) vec(X)
  return kron(a.transpose(), identity(static_cast<int>(a.rows())));
}

// ---------------------------------------------------------------------------

TimeDependentOperator::TimeDependentOperator(int dim, std::vector<ProfiledTerm> terms)
    : dim_(dim), terms_(std::move(terms)) {
  for (const auto& term : terms_) {
    if (term.coeff.rows() != dim_ || term.coeff.cols() != dim_) {
      throw std::invalid_argument("TimeDependentOperator: coefficient dimension mismatch");
    }
  }
}

TimeDependentOperator TimeDependentOperator::constant(Operator op) {
  const int d = static_cast<int>(op.rows());
  std::vector<ProfiledTerm> terms;
  terms.push_back({Profile(TrigProfile::constant(1.0)), std::move(op)});
  return TimeDependentOperator(d, std::move(terms));
}

Operator TimeDependentOperator::evaluate(double t) const {
  Operator out = Operator::Zero(dim_, dim_);
  for (const auto& term : terms_) out += term.profile(t) * term.coeff;
  return out;
}

bool TimeDependentOperator::analytic() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const ProfiledTerm& t) { return t.profile.is_trig(); });
}

bool TimeDependentOperator::quasiperiodic() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const ProfiledTerm& t) { return t.profile.quasiperiodic(); });
}

bool TimeDependentOperator::constant_in_time() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const ProfiledTerm& t) { return t.profile.is_constant(); });
}

double TimeDependentOperator::longest_period() const {
  double p = 0.0;
  for (const auto& term : terms_) p = std::max(p, term.profile.longest_period());
  return p;
}

std::vector<double> TimeDependentOperator::breakpoints(double t0, double t1) const {
  std::vector<double> pts;
  for (const auto& term : terms_) {
    auto b = term.profile.breakpoints(t0, t1);
    pts.insert(pts.end(), b.begin(), b.end());
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// ---------------------------------------------------------------------------

namespace {

// Least common period of all profile periods, if the set is commensurate.
std::optional<double> common_period(const GkslModel& m) {
  std::vector<double> periods;
  auto collect = [&](const TimeDependentOperator& op) {
    for (const auto& term : op.terms()) {
      if (term.profile.is_exp() && !term.profile.is_constant()) {
        periods.push_back(-1.0);  // marks aperiodic
        return;
      }
      if (term.profile.is_trig()) {
        for (const auto& trig_term : term.profile.trig().terms()) {
          periods.push_back(2.0 * std::numbers::pi / trig_term.frequency);
        }
      } else if (term.profile.is_piecewise()) {
        const auto& p = term.profile.piecewise();
        if (!p.periodic_word()) {
          periods.push_back(-1.0);
          return;
        }
        periods.push_back(p.cell() * static_cast<double>(p.word_length()));
      }
    }
  };
  collect(m.hamiltonian());
  for (const auto& l : m.jumps()) collect(l);
  if (periods.empty()) return std::nullopt;  // time-independent
  if (std::any_of(periods.begin(), periods.end(), [](double p) { return p < 0; })) {
    return std::nullopt;
  }
  // T is a common period iff T / p_k is an integer for every k. Search small
  // integer multiples of the longest period.
  const double longest = *std::max_element(periods.begin(), periods.end());
  for (int mult = 1; mult <= 64; ++mult) {
    const double candidate = mult * longest;
    bool ok = true;
    for (double p : periods) {
      const double ratio = candidate / p;
      if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
        ok = false;
        break;
      }
    }
    if (ok) return candidate;
  }
  return std::nullopt;  // incommensurate (quasiperiodic drive)
}

}  // namespace

GkslModel::GkslModel(HilbertSpec space, TimeDependentOperator hamiltonian,
                     std::vector<TimeDependentOperator> jumps)
    : space_(std::move(space)),
      hamiltonian_(std::move(hamiltonian)),
      jumps_(std::move(jumps)) {
  if (hamiltonian_.zero()) {
    hamiltonian_ = TimeDependentOperator::constant(Operator::Zero(space_.dim, space_.dim));
  }
  if (hamiltonian_.dim() != space_.dim) {
    throw ModelContractError("GkslModel: Hamiltonian dimension mismatch");
  }
  for (const auto& l : jumps_) {
    if (l.dim() != space_.dim) throw ModelContractError("GkslModel: jump dimension mismatch");
  }

  // Hermiticity of H_t and every L_{m,t} at 32 sampled times (fixed seed so
  // that construction is reproducible).
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  const double horizon = 100.0;
  for (int k = 0; k < 32; ++k) {
    const double t = std::uniform_real_distribution<double>(0.0, horizon)(rng);
    auto check = [&](const TimeDependentOperator& op, const char* what) {
      Operator v;
      try {
        v = op.evaluate(t);
      } catch (const std::invalid_argument&) {
        return;  // beyond a finite word horizon; fine
      }
      if (!is_hermitian(v, tolerances().hermitian_rel)) {
        throw ModelContractError(std::string("GkslModel: ") + what +
                                 " evaluates non-Hermitian at t=" + std::to_string(t));
      }
    };
    check(hamiltonian_, "Hamiltonian");
    for (const auto& l : jumps_) check(l, "jump operator");
  }

  analytic_ = hamiltonian_.analytic() &&
              std::all_of(jumps_.begin(), jumps_.end(),
                          [](const auto& l) { return l.analytic(); });
  quasiperiodic_ = hamiltonian_.quasiperiodic() &&
                   std::all_of(jumps_.begin(), jumps_.end(),
                               [](const auto& l) { return l.quasiperiodic(); });
  period_ = common_period(*this);

  for (int k = 0; k < 32; ++k) {
    const double t = std::uniform_real_distribution<double>(0.0, horizon)(rng);
    try {
      h_norm_bound_ = std::max(
          h_norm_bound_,
          hamiltonian_.evaluate(t).selfadjointView<Eigen::Lower>().operatorNorm());
    } catch (const std::invalid_argument&) {
    }
  }
  h_norm_bound_ = std::max(h_norm_bound_,
                           hamiltonian_.evaluate(0.0)
                               .selfadjointView<Eigen::Lower>()
                               .operatorNorm());
  build_jump_cache();
}

void GkslModel::build_jump_cache() {
  const int d = space_.dim;
  Eigen::MatrixXd mask = Eigen::MatrixXd::Zero(d, d);
  bool any_diagonal = false;
  for (const auto& jump : jumps_) {
    if (!jump.constant_in_time()) {
      jump_cache_.varying.push_back(&jump);
      continue;
    }
    const Operator value = jump.evaluate(0.0);
    const bool diagonal =
        (value - Operator(value.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
    if (diagonal) {
      const Eigen::VectorXd v = value.diagonal().real();
      mask -= 0.5 * (v.replicate(1, d) - v.transpose().replicate(d, 1))
                        .array()
                        .square()
                        .matrix();
      any_diagonal = true;
    } else {
      jump_cache_.constant_values.push_back(value);
      jump_cache_.constant_squares.push_back(value * value);
    }
  }
  jump_cache_.dephasing_mask = mask.cast<Complex>();
  jump_cache_.has_dephasing_mask = any_diagonal;
  jump_cache_.all_constant = jump_cache_.varying.empty();
}

bool GkslModel::time_independent() const {
  return hamiltonian_.constant_in_time() &&
         std::all_of(jumps_.begin(), jumps_.end(),
                     [](const auto& l) { return l.constant_in_time(); });
}

bool GkslModel::piecewise_constant() const {
  auto term_ok = [](const ProfiledTerm& t) {
    if (t.profile.is_constant()) return true;
    return t.profile.is_piecewise() && t.profile.piecewise().coarse_width() == 0.0;
  };
  auto op_ok = [&](const TimeDependentOperator& op) {
    return std::all_of(op.terms().begin(), op.terms().end(), term_ok);
  };
  return op_ok(hamiltonian_) &&
         std::all_of(jumps_.begin(), jumps_.end(), op_ok);
}

std::vector<double> GkslModel::breakpoints(double t0, double t1) const {
  std::vector<double> pts = hamiltonian_.breakpoints(t0, t1);
  for (const auto& l : jumps_) {
    auto b = l.breakpoints(t0, t1);
    pts.insert(pts.end(), b.begin(), b.end());
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double GkslModel::liouvillian_norm_bound() const {
  double bound = 0.0;
  std::mt19937_64 rng(0x2545f4914f6cdd1dULL);
  for (int k = 0; k < 8; ++k) {
    const double t = std::uniform_real_distribution<double>(0.0, 100.0)(rng);
    try {
      bound = std::max(bound, spectral_norm(liouvillian_matrix(*this, t)));
    } catch (const std::invalid_argument&) {
    }
  }
  bound = std::max(bound, spectral_norm(liouvillian_matrix(*this, 0.0)));
  return bound;
}

GkslModel GkslModel::restrict_to_number_sector(int n) const {
  const auto indices = number_sector_indices(space_, n);
  const Operator number_op = fermion_ops(space_).total_number();

  auto restrict_tdo = [&](const TimeDependentOperator& op) {
    std::vector<ProfiledTerm> terms;
    for (const auto& term : op.terms()) {
      if (hs_norm(commutator(term.coeff, number_op)) >
          1e-10 * std::max(1.0, hs_norm(term.coeff))) {
        throw ModelContractError(
            "restrict_to_number_sector: coefficient does not conserve N");
      }
      terms.push_back({term.profile, restrict_to_indices(term.coeff, indices)});
    }
    return TimeDependentOperator(static_cast<int>(indices.size()), std::move(terms));
  };

  std::vector<TimeDependentOperator> jumps;
  for (const auto& l : jumps_) jumps.push_back(restrict_tdo(l));
  return GkslModel(HilbertSpec::generic(static_cast<int>(indices.size())),
                   restrict_tdo(hamiltonian_), std::move(jumps));
}

// ---------------------------------------------------------------------------

Operator liouvillian_apply(const GkslModel& m, double t, const Operator& rho) {
  if (rho.rows() != m.dim() || rho.cols() != m.dim()) {
    throw std::invalid_argument("liouvillian_apply: dimension mismatch");
  }
  const Operator h = m.hamiltonian().evaluate(t);
  Operator out = -kImag * (h * rho - rho * h);

  const auto& cache = m.jump_cache();
  if (cache.has_dephasing_mask) {
    out.array() += cache.dephasing_mask.array() * rho.array();
  }
  for (std::size_t k = 0; k < cache.constant_values.size(); ++k) {
    const Operator& l = cache.constant_values[k];
    const Operator& l2 = cache.constant_squares[k];
    out += l * rho * l - 0.5 * (l2 * rho + rho * l2);
  }
  for (const auto* jump : cache.varying) {
    const Operator l = jump->evaluate(t);
    const Operator l2 = l * l;
    out += l * rho * l - 0.5 * (l2 * rho + rho * l2);
  }
  return out;
}

SuperMatrix liouvillian_matrix(const GkslModel& m, double t) {
  const Operator h = m.hamiltonian().evaluate(t);
  SuperMatrix sup = -kImag * (left_mult(h) - right_mult(h));
  for (const auto& jump : m.jumps()) {
    const Operator l = jump.evaluate(t);
    const Operator l2 = l * l;
    sup += kron(l.transpose(), l) - 0.5 * (left_mult(l2) + right_mult(l2));
  }
  return sup;
}

// ---------------------------------------------------------------------------

double default_unitary_step(const GkslModel& m) {
  const double h = m.hamiltonian_norm_bound();
  return h > 0 ? std::min(1e-2, 0.05 / h) : 1e-2;
}

double default_superop_step(const GkslModel& m) {
  const double l = m.liouvillian_norm_bound();
  return l > 0 ? std::min(1e-2, 0.05 / l) : 1e-2;
}

namespace {

Operator polar_unitary(const Operator& u) {
  Eigen::JacobiSVD<Operator> svd(u, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// Segment boundaries of [t0, t1] split at model breakpoints.
std::vector<double> segment_grid(const GkslModel& m, double t0, double t1) {
  std::vector<double> grid = {t0};
  auto pts = m.breakpoints(t0, t1);
  grid.insert(grid.end(), pts.begin(), pts.end());
  grid.push_back(t1);
  return grid;
}

// Generic RK4 driver over [t0, t1], stepping within breakpoint segments.
// Stage times are clamped strictly inside each segment so that stages landing
// on a right edge see the segment's own (left-limit) generator value;
// piecewise profiles are right-continuous at breakpoints.
template <typename State, typename Rhs>
void rk4_integrate(const GkslModel& m, double t0, double t1, double dt, State& y,
                   Rhs&& rhs, const std::function<void(State&)>& post_step = nullptr) {
  const auto grid = segment_grid(m, t0, t1);
  for (std::size_t s = 0; s + 1 < grid.size(); ++s) {
    const double a = grid[s];
    const double b = grid[s + 1];
    const double interior = b - 1e-9 * (b - a);
    const int n_steps = std::max<int>(1, static_cast<int>(std::ceil((b - a) / dt - 1e-12)));
    const double h = (b - a) / n_steps;
    double t = a;
    for (int k = 0; k < n_steps; ++k) {
      const State k1 = rhs(t, y);
      const State k2 = rhs(t + h / 2, State(y + (h / 2) * k1));
      const State k3 = rhs(t + h / 2, State(y + (h / 2) * k2));
      const State k4 = rhs(std::min(t + h, interior), State(y + h * k3));
      y += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
      t = (k + 1 == n_steps) ? b : a + (k + 1) * h;
      if (post_step) post_step(y);
    }
  }
}

}  // namespace

Operator propagator_unitary(const GkslModel& m, double t, double dt) {
  if (t < 0) throw std::invalid_argument("propagator_unitary: t >= 0 required");
  if (dt <= 0) dt = default_unitary_step(m);
  Operator u = identity(m.dim());
  if (t == 0) return u;
  auto rhs = [&m](double time, const Operator& y) -> Operator {
    return -kImag * (m.hamiltonian().evaluate(time) * y);
  };
  std::function<void(Operator&)> reunitarize = [](Operator& y) { y = polar_unitary(y); };
  rk4_integrate(m, 0.0, t, dt, u, rhs, reunitarize);
  return u;
}

std::vector<Operator> propagator_at(const GkslModel& m, std::span<const double> times,
                                    double dt) {
  if (dt <= 0) dt = default_unitary_step(m);
  std::vector<Operator> out;
  out.reserve(times.size());
  Operator u = identity(m.dim());
  double t_prev = 0.0;
  auto rhs = [&m](double time, const Operator& y) -> Operator {
    return -kImag * (m.hamiltonian().evaluate(time) * y);
  };
  std::function<void(Operator&)> reunitarize = [](Operator& y) { y = polar_unitary(y); };
  for (double t : times) {
    if (t < t_prev) throw std::invalid_argument("propagator_at: times must be ascending");
    if (t > t_prev) rk4_integrate(m, t_prev, t, dt, u, rhs, reunitarize);
    out.push_back(u);
    t_prev = t;
  }
  return out;
}

std::vector<Operator> interaction_jumps(const GkslModel& m, double t, double dt) {
  const Operator u = propagator_unitary(m, t, dt);
  std::vector<Operator> out;
  out.reserve(m.jumps().size());
  for (const auto& jump : m.jumps()) {
    out.push_back(u.adjoint() * jump.evaluate(t) * u);
  }
  return out;
}

SuperMatrix evolution_superoperator(const GkslModel& m, double s, double t, double dt) {
  if (s < 0 || t < s) {
    throw std::invalid_argument("evolution_superoperator: need 0 <= s <= t");
  }
  const int d2 = m.dim() * m.dim();
  SuperMatrix v = SuperMatrix::Identity(d2, d2);
  if (t == s) return v;

  if (m.piecewise_constant()) {
    const auto grid = segment_grid(m, s, t);
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      const double mid = 0.5 * (grid[k] + grid[k + 1]);
      const SuperMatrix gen = liouvillian_matrix(m, mid);
      v = (gen * (grid[k + 1] - grid[k])).exp() * v;
    }
    return v;
  }

  if (dt <= 0) dt = default_superop_step(m);
  auto rhs = [&m](double time, const SuperMatrix& y) -> SuperMatrix {
    return liouvillian_matrix(m, time) * y;
  };
  rk4_integrate(m, s, t, dt, v, rhs);
  return v;
}

}  // namespace qsteady
