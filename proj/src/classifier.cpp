#include "qsteady/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace qsteady {

namespace {

constexpr double kGoldenInv = 0.6180339887498949;

// A rung in merged form: orthonormal Hermitian coefficient operators with one
// trig profile each. Keeps term counts bounded by d^2 across ladder steps.
struct TrigTermList {
  std::vector<std::pair<TrigProfile, Operator>> terms;
};

TrigTermList merge_terms(std::vector<std::pair<TrigProfile, Operator>> raw) {
  auto ops = std::vector<Operator>();
  ops.reserve(raw.size());
  for (auto& [profile, coeff] : raw) ops.push_back(coeff);
  auto basis = orthonormal_span(ops);

  TrigTermList out;
  for (const auto& e : basis) {
    TrigProfile combined = TrigProfile::constant(0.0);
    for (const auto& [profile, coeff] : raw) {
      const Complex overlap = hs_inner(e, coeff);
      if (std::abs(overlap.imag()) > 1e-9 * std::max(1.0, std::abs(overlap))) {
        throw NumericalInconsistencyError(
            "ad_ladder: non-real expansion coefficient in Hermitian merge");
      }
      if (overlap.real() != 0.0) {
        TrigProfile scaled = profile;
        scaled *= overlap.real();
        combined += scaled;
      }
    }
    if (!combined.is_zero()) out.terms.push_back({std::move(combined), e});
  }
  return out;
}

// Extract (profile, Hermitian coefficient) pairs from an analytic operator.
// Anti-Hermitian coefficient parts must cancel in any operator that evaluates
// Hermitian at all times, so they are dropped exactly.
std::vector<std::pair<TrigProfile, Operator>> trig_terms_of(
    const TimeDependentOperator& op) {
  std::vector<std::pair<TrigProfile, Operator>> out;
  for (const auto& term : op.terms()) {
    out.push_back({term.profile.trig(), 0.5 * (term.coeff + term.coeff.adjoint())});
  }
  return out;
}

TimeDependentOperator to_tdo(int dim, const TrigTermList& list) {
  std::vector<ProfiledTerm> terms;
  for (const auto& [profile, coeff] : list.terms) {
    terms.push_back({Profile(profile), coeff});
  }
  return TimeDependentOperator(dim, std::move(terms));
}

// ad_t applied in closed form: i[H_t, .] + d/dt.
TrigTermList apply_ad(const std::vector<std::pair<TrigProfile, Operator>>& h_terms,
                      const TrigTermList& rung) {
  std::vector<std::pair<TrigProfile, Operator>> raw;
  for (const auto& [f, a] : rung.terms) {
    TrigProfile df = f.derivative();
    if (!df.is_zero()) raw.push_back({std::move(df), a});
    for (const auto& [g, h] : h_terms) {
      const Operator c = kImag * commutator(h, a);
      if (hs_norm(c) < 1e-15) continue;
      raw.push_back({g * f, c});
    }
  }
  return merge_terms(std::move(raw));
}

std::vector<double> golden_grid(double t_probe, int n) {
  std::vector<double> times(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double frac = std::fmod(i * kGoldenInv, 1.0);
    times[static_cast<std::size_t>(i)] = t_probe * frac;
  }
  std::sort(times.begin(), times.end());
  return times;
}

double probe_horizon(const GkslModel& m) {
  double longest = std::max(m.hamiltonian().longest_period(), 0.0);
  for (const auto& l : m.jumps()) longest = std::max(longest, l.longest_period());
  if (longest == 0.0) {
    // Non-periodic profiles (Fibonacci truncations) or a time-independent
    // model: probe a fixed window.
    return m.time_independent() ? 4.0 : 200.0;
  }
  return 4.0 * longest;
}

}  // namespace

std::vector<Operator> AdLadder::all_evaluations() const {
  std::vector<Operator> out;
  for (const auto& per_jump : evaluations) {
    for (const auto& op : per_jump) {
      if (hs_norm(op) > 1e-14) out.push_back(op);
    }
  }
  return out;
}

AdLadder ad_ladder(const GkslModel& m, double t0, int max_depth) {
  if (!m.analytic()) {
    throw ModelContractError("ad-ladder requires analytic profiles");
  }
  const int d = m.dim();
  if (max_depth <= 0) max_depth = 2 * d * d;

  const auto h_terms = trig_terms_of(m.hamiltonian());

  AdLadder ladder;
  ladder.t0 = t0;
  ladder.rungs.resize(m.jumps().size());
  ladder.evaluations.resize(m.jumps().size());

  std::vector<TrigTermList> current;
  for (std::size_t j = 0; j < m.jumps().size(); ++j) {
    current.push_back(merge_terms(trig_terms_of(m.jumps()[j])));
  }

  std::vector<Operator> gathered = {identity(d)};
  int algebra_dim = 1;
  int stagnant = 0;
  const int patience = 3;

  for (int depth = 0; depth <= max_depth; ++depth) {
    bool all_zero = true;
    for (std::size_t j = 0; j < m.jumps().size(); ++j) {
      TimeDependentOperator rung = to_tdo(d, current[j]);
      Operator value = rung.evaluate(t0);
      ladder.rungs[j].push_back(std::move(rung));
      ladder.evaluations[j].push_back(value);
      if (hs_norm(value) > 1e-14) gathered.push_back(std::move(value));
      if (!current[j].terms.empty()) all_zero = false;
    }
    ladder.depth_reached = depth;

    const auto algebra = generate_algebra(gathered);
    if (algebra.dimension() == d * d) break;
    stagnant = (algebra.dimension() == algebra_dim) ? stagnant + 1 : 0;
    algebra_dim = algebra.dimension();
    if (all_zero || stagnant >= patience || depth == max_depth) break;

    for (std::size_t j = 0; j < m.jumps().size(); ++j) {
      current[j] = apply_ad(h_terms, current[j]);
    }
  }
  return ladder;
}

OperatorAlgebra a_ad(const GkslModel& m, double t0) {
  const auto ladder = ad_ladder(m, t0);
  auto gens = ladder.all_evaluations();
  gens.push_back(identity(m.dim()));
  return generate_algebra(gens);
}

bool uniqueness_by_ad(const GkslModel& m, double t0) {
  return is_full(a_ad(m, t0));
}

// ---------------------------------------------------------------------------

namespace {

// Coefficient-wise route applies when every time-dependent operator carries
// linearly independent profiles (then [X_t, O] = 0 for all t iff each
// coefficient commutes with O).
bool coefficient_route_applies(const GkslModel& m) {
  auto check = [](const TimeDependentOperator& op) {
    if (op.terms().empty()) return true;
    std::vector<TrigProfile> profiles;
    for (const auto& term : op.terms()) {
      if (!term.profile.is_trig()) return false;
      profiles.push_back(term.profile.trig());
    }
    return linearly_independent(profiles);
  };
  if (!check(m.hamiltonian())) return false;
  return std::all_of(m.jumps().begin(), m.jumps().end(), check);
}

std::vector<Operator> coefficient_operators(const GkslModel& m) {
  std::vector<Operator> gens;
  for (const auto& term : m.hamiltonian().terms()) gens.push_back(term.coeff);
  for (const auto& l : m.jumps()) {
    for (const auto& term : l.terms()) gens.push_back(term.coeff);
  }
  return gens;
}

OperatorAlgebra c_sch_sampled(const GkslModel& m) {
  const auto times = golden_grid(probe_horizon(m), 64);
  std::vector<Operator> gens;
  for (double t : times) {
    gens.push_back(m.hamiltonian().evaluate(t));
    for (const auto& l : m.jumps()) gens.push_back(l.evaluate(t));
  }
  return commutant(gens);
}

}  // namespace

OperatorAlgebra c_sch(const GkslModel& m) {
  const bool coefficient_ok = coefficient_route_applies(m);
  const auto sampled = c_sch_sampled(m);
  if (!coefficient_ok) return sampled;

  const auto coefficient = commutant(coefficient_operators(m));
  if (coefficient.dimension() != sampled.dimension() ||
      !subspace_leq(coefficient, sampled) || !subspace_leq(sampled, coefficient)) {
    std::ostringstream msg;
    msg << "c_sch: coefficient-wise and sampled routes disagree (dims "
        << coefficient.dimension() << " vs " << sampled.dimension() << ")";
    throw NumericalInconsistencyError(msg.str());
  }
  return coefficient;
}

namespace {

OperatorAlgebra c_int_ladder(const GkslModel& m, double t0) {
  const auto ladder = ad_ladder(m, t0);
  auto gens = ladder.all_evaluations();
  if (gens.empty()) gens.push_back(Operator::Zero(m.dim(), m.dim()));
  return commutant(gens);
}

OperatorAlgebra c_int_sampled(const GkslModel& m, int n_samples, double dt) {
  if (dt <= 0) {
    const double h = m.hamiltonian_norm_bound();
    dt = h > 0 ? std::min(1e-3, 0.01 / h) : 1e-3;
  }
  const double t_probe = probe_horizon(m);

  // Grid doubling until the commutant dimension is stable twice.
  std::optional<OperatorAlgebra> result;
  int stable = 0;
  for (int n = std::max(n_samples, 8); n <= 512; n *= 2) {
    const auto times = golden_grid(t_probe, n);
    const auto props = propagator_at(m, times, dt);
    std::vector<Operator> gens;
    for (std::size_t i = 0; i < times.size(); ++i) {
      for (const auto& jump : m.jumps()) {
        Operator l = jump.evaluate(times[i]);
        if (hs_norm(l) < 1e-14) continue;
        gens.push_back(props[i].adjoint() * l * props[i]);
      }
    }
    if (gens.empty()) gens.push_back(Operator::Zero(m.dim(), m.dim()));
    auto alg = commutant(gens, tolerances().sampled_null_rel);
    if (result && alg.dimension() == result->dimension()) {
      if (++stable >= 2) return alg;
    } else {
      stable = 0;
    }
    result = std::move(alg);
  }
  return *result;
}

}  // namespace

OperatorAlgebra c_int(const GkslModel& m, const CIntOptions& opts) {
  Route route = opts.route;
  if (route == Route::CoefficientWise) {
    throw std::invalid_argument("c_int: coefficient-wise route is not defined");
  }
  if (!m.analytic()) {
    if (route == Route::AdLadder) {
      throw ModelContractError("ad-ladder requires analytic profiles");
    }
    route = Route::Sampled;
  }

  switch (route) {
    case Route::AdLadder:
      return c_int_ladder(m, opts.t0);
    case Route::Sampled:
      return c_int_sampled(m, opts.n_samples, opts.dt);
    case Route::Both: {
      auto ladder = c_int_ladder(m, opts.t0);
      auto sampled = c_int_sampled(m, opts.n_samples, opts.dt);
      const double r1 = subspace_residual(ladder, sampled);
      const double r2 = subspace_residual(sampled, ladder);
      if (ladder.dimension() != sampled.dimension() ||
          std::max(r1, r2) > tolerances().route_inclusion) {
        std::ostringstream msg;
        msg << "c_int: ad-ladder and sampled routes disagree (dims "
            << ladder.dimension() << " vs " << sampled.dimension()
            << ", residuals " << r1 << ", " << r2 << ")";
        throw NumericalInconsistencyError(msg.str());
      }
      return ladder;
    }
    default:
      throw std::invalid_argument("c_int: unknown route");
  }
}

// ---------------------------------------------------------------------------

std::string to_string(SteadyClass c) {
  switch (c) {
    case SteadyClass::I: return "i";
    case SteadyClass::II: return "ii";
    case SteadyClass::III: return "iii";
    case SteadyClass::IV: return "iv";
  }
  return "?";
}

std::string ClassificationReport::to_json() const {
  nlohmann::json j;
  j["schema"] = "v1";
  j["class"] = to_string(steady_class);
  j["dim_c_sch"] = dim_c_sch;
  j["dim_c_int"] = dim_c_int;
  j["inclusion_verified"] = inclusion_verified;
  j["routes"] = {{"c_sch", c_sch_route}, {"c_int", c_int_route}};
  const auto& tol = tolerances();
  j["tolerances"] = {{"rank_rel", tol.rank_rel},
                     {"sampled_null_rel", tol.sampled_null_rel},
                     {"route_inclusion", tol.route_inclusion},
                     {"contains_rel", tol.contains_rel}};
  auto labels = [](const OperatorAlgebra& alg) {
    std::vector<std::string> names;
    const int d = alg.dim_space();
    for (int k = 0; k < alg.dimension(); ++k) {
      const auto& b = alg.basis()[static_cast<std::size_t>(k)];
      const double id_overlap = std::abs(hs_inner(identity(d), b)) / std::sqrt(double(d));
      names.push_back(id_overlap > 1.0 - 1e-9 ? "I/sqrt(d)" : "b" + std::to_string(k));
    }
    return names;
  };
  j["basis_labels"] = {{"c_sch", labels(c_sch_basis)}, {"c_int", labels(c_int_basis)}};
  return j.dump(2);
}

ClassificationReport classify(const GkslModel& m, const CIntOptions& opts) {
  if (!m.quasiperiodic()) {
    throw ModelContractError(
        "classification requires a quasiperiodic generator: the model declares "
        "a decaying envelope, so the recurrence property behind the "
        "steady-state theorems fails and no class can be assigned");
  }

  ClassificationReport report;
  report.c_sch_basis = c_sch(m);
  report.c_sch_route = coefficient_route_applies(m) ? "coefficient+sampled" : "sampled";

  CIntOptions c_int_opts = opts;
  if (!m.analytic() && c_int_opts.route == Route::Both) {
    c_int_opts.route = Route::Sampled;
  }
  report.c_int_basis = c_int(m, c_int_opts);
  switch (c_int_opts.route) {
    case Route::AdLadder: report.c_int_route = "ad-ladder"; break;
    case Route::Sampled: report.c_int_route = "sampled"; break;
    default: report.c_int_route = "ad-ladder+sampled"; break;
  }

  report.dim_c_sch = report.c_sch_basis.dimension();
  report.dim_c_int = report.c_int_basis.dimension();

  if (!subspace_leq(report.c_sch_basis, report.c_int_basis)) {
    throw NumericalInconsistencyError(
        "classify: inclusion C^Sch within C^Int failed numerically");
  }
  report.inclusion_verified = true;

  const bool sch_trivial = report.dim_c_sch == 1;
  const bool gap = report.dim_c_int > report.dim_c_sch;
  if (sch_trivial && !gap) report.steady_class = SteadyClass::I;
  else if (!sch_trivial && !gap) report.steady_class = SteadyClass::II;
  else if (!sch_trivial && gap) report.steady_class = SteadyClass::III;
  else report.steady_class = SteadyClass::IV;
  return report;
}

// ---------------------------------------------------------------------------

DynamicalSymmetryReport strong_dynamical_symmetry_check(const GkslModel& m,
                                                        const Operator& a) {
  if (!m.time_independent()) {
    throw ModelContractError(
        "strong_dynamical_symmetry_check: time-independent model required");
  }
  DynamicalSymmetryReport report;
  const Operator h = m.hamiltonian().evaluate(0.0);
  const double norm_a = hs_norm(a);
  if (norm_a == 0.0) return report;

  const Operator ha = commutator(h, a);
  const Complex omega = hs_inner(a, ha) / hs_inner(a, a);
  const double eigen_residual = hs_norm(ha - omega * a);
  bool ok = eigen_residual <= 1e-9 * std::max(1.0, hs_norm(ha)) &&
            std::abs(omega.imag()) <= 1e-9 * std::max(1.0, std::abs(omega));
  for (const auto& jump : m.jumps()) {
    const Operator l = jump.evaluate(0.0);
    if (hs_norm(commutator(l, a)) > 1e-9 * std::max(1.0, hs_norm(l) * norm_a)) {
      ok = false;
    }
  }
  if (!ok) return report;

  report.is_sds = true;
  report.omega = omega.real();
  report.trivial = std::abs(report.omega) <= 1e-9;

  const auto sch = c_sch(m);
  const auto interaction = c_int(m, {.route = Route::AdLadder});
  report.in_c_sch = sch.contains(a);
  report.in_c_int = interaction.contains(a);
  if (!report.trivial && (!report.in_c_int || report.in_c_sch)) {
    throw NumericalInconsistencyError(
        "strong_dynamical_symmetry_check: symmetry membership inconsistent "
        "with the two commutants");
  }
  return report;
}

}  // namespace qsteady
