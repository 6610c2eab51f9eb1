#include "qsteady/floquet.hpp"

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include <algorithm>
#include <sstream>

#include "qsteady/algebra.hpp"

namespace qsteady {

Operator KrausSet::apply(const Operator& x) const {
  Operator out = Operator::Zero(dim, dim);
  for (const auto& k : operators) out += k * x * k.adjoint();
  return out;
}

SuperMatrix KrausSet::to_superoperator() const {
  SuperMatrix out = SuperMatrix::Zero(dim * dim, dim * dim);
  // vec(K X K^dag) = (conj(K) (x) K) vec(X)
  for (const auto& k : operators) out += kron(k.conjugate(), k);
  return out;
}

SuperMatrix choi_from_superop(const SuperMatrix& phi, int dim) {
  // C[(i,m),(j,n)] = Phi[(n,m),(j,i)] with composite index (a,b) = a*d + b.
  SuperMatrix choi(dim * dim, dim * dim);
  for (int i = 0; i < dim; ++i)
    for (int me = 0; me < dim; ++me)
      for (int j = 0; j < dim; ++j)
        for (int n = 0; n < dim; ++n)
          choi(i * dim + me, j * dim + n) = phi(n * dim + me, j * dim + i);
  return choi;
}

SuperMatrix superop_from_choi(const SuperMatrix& choi, int dim) {
  SuperMatrix phi(dim * dim, dim * dim);
  for (int i = 0; i < dim; ++i)
    for (int me = 0; me < dim; ++me)
      for (int j = 0; j < dim; ++j)
        for (int n = 0; n < dim; ++n)
          phi(n * dim + me, j * dim + i) = choi(i * dim + me, j * dim + n);
  return phi;
}

KrausSet kraus_from_choi(const SuperMatrix& phi, double rank_tol) {
  const int d2 = static_cast<int>(phi.rows());
  const int d = static_cast<int>(std::lround(std::sqrt(double(d2))));
  if (d * d != d2) throw std::invalid_argument("kraus_from_choi: non-square dimension");

  SuperMatrix choi = choi_from_superop(phi, d);
  choi = 0.5 * (choi + choi.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<SuperMatrix> es(choi);
  const auto& vals = es.eigenvalues();
  const double largest = vals.maxCoeff();
  if (vals.minCoeff() < tolerances().choi_psd_floor * std::max(1.0, largest)) {
    std::ostringstream msg;
    msg << "kraus_from_choi: Choi matrix has a significantly negative eigenvalue "
        << vals.minCoeff();
    throw NumericalInconsistencyError(msg.str());
  }

  KrausSet out;
  out.dim = d;
  for (int k = d2 - 1; k >= 0; --k) {
    if (vals(k) <= rank_tol * largest) break;
    out.weights.push_back(vals(k));
    out.operators.push_back(std::sqrt(vals(k)) * unvec(es.eigenvectors().col(k), d));
  }

  // Completeness: sum K^dag K = I for trace-preserving channels.
  Operator gram = Operator::Zero(d, d);
  for (const auto& k : out.operators) gram += k.adjoint() * k;
  if (spectral_norm(gram - identity(d)) > tolerances().kraus_complete) {
    throw NumericalInconsistencyError("kraus_from_choi: Kraus completeness violated");
  }
  // Reconstruction must match the source channel.
  if ((out.to_superoperator() - phi).cwiseAbs().maxCoeff() >
      tolerances().channel_match) {
    throw NumericalInconsistencyError("kraus_from_choi: channel reconstruction failed");
  }
  return out;
}

// ---------------------------------------------------------------------------

SuperMatrix one_cycle_map(const GkslModel& m, double t_period, double dt) {
  if (t_period <= 0) throw std::invalid_argument("one_cycle_map: period must be positive");
  if (const auto p = m.period(); p && !m.time_independent()) {
    const double ratio = t_period / *p;
    if (std::abs(ratio - std::round(ratio)) > 1e-9) {
      throw ModelContractError("one_cycle_map: model is not periodic with the given period");
    }
  }
  const SuperMatrix v = evolution_superoperator(m, 0.0, t_period, dt);

  const int d = m.dim();
  const Vector id = vec(identity(d));
  if ((id.adjoint() * v - id.adjoint()).cwiseAbs().maxCoeff() > 1e-8) {
    throw NumericalInconsistencyError("one_cycle_map: trace preservation violated");
  }
  // Complete positivity check via the Choi spectrum (throws when violated).
  kraus_from_choi(v);
  return v;
}

bool mixing_check(const KrausSet& k) {
  const int d = k.dim;
  const int d2 = d * d;

  // Spans of Kraus words of exact length n; the sequence is iterated until it
  // either reaches the full algebra or repeats (a fixed subspace). Rank
  // decisions use the word-span threshold: integrated channels carry
  // integration error well above the exact-arithmetic rank cutoff.
  const double rank_rel = tolerances().kraus_word_rel;
  std::vector<Operator> words = k.operators;
  auto span = orthonormal_span(words, rank_rel);
  for (int length = 1; length <= d2; ++length) {
    if (length > 1) {
      std::vector<Operator> next;
      next.reserve(span.size() * k.operators.size());
      for (const auto& w : span) {
        for (const auto& op : k.operators) next.push_back(op * w);
      }
      words = std::move(next);
      auto next_span = orthonormal_span(words, rank_rel);
      // Same subspace as before => fixed point, no further growth.
      if (next_span.size() == span.size()) {
        OperatorAlgebra old_alg(d, OperatorAlgebra::Kind::Subspace, span);
        if (std::all_of(next_span.begin(), next_span.end(),
                        [&](const Operator& x) { return old_alg.contains(x); })) {
          span = std::move(next_span);
          break;
        }
      }
      span = std::move(next_span);
    }
    if (static_cast<int>(span.size()) == d2) return true;
  }
  return static_cast<int>(span.size()) == d2;
}

std::vector<Complex> peripheral_spectrum(const SuperMatrix& phi, double band) {
  if (band <= 0) band = tolerances().peripheral_band;
  Eigen::ComplexEigenSolver<SuperMatrix> es(phi, false);
  std::vector<Complex> out;
  for (int k = 0; k < es.eigenvalues().size(); ++k) {
    const Complex z = es.eigenvalues()(k);
    if (std::abs(z) >= 1.0 - band) out.push_back(z);
  }
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return std::arg(a) < std::arg(b);
  });
  return out;
}

std::string FloquetReport::to_json() const {
  nlohmann::json j;
  j["schema"] = "v1";
  j["period"] = period;
  auto eigs = nlohmann::json::array();
  for (const auto& z : peripheral_eigenvalues) {
    eigs.push_back({{"re", z.real()}, {"im", z.imag()}});
  }
  j["peripheral_eigenvalues"] = eigs;
  j["kraus_rank"] = kraus_rank;
  j["mixing"] = mixing;
  return j.dump(2);
}

FloquetReport floquet_analysis(const GkslModel& m, double t_period, double dt) {
  FloquetReport report;
  report.period = t_period;
  const SuperMatrix map = one_cycle_map(m, t_period, dt);
  const KrausSet kraus = kraus_from_choi(map);
  report.kraus_rank = static_cast<int>(kraus.operators.size());
  report.mixing = mixing_check(kraus);
  report.peripheral_eigenvalues = peripheral_spectrum(map);
  return report;
}

}  // namespace qsteady
