#include "qsteady/algebra.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace qsteady {

namespace {

// Incremental orthonormal basis held as columns of a matrix of vec'd
// operators. Modified Gram-Schmidt with one re-orthogonalization pass.
class SpanBasis {
 public:
  explicit SpanBasis(int d, double rank_rel = 0.0)
      : d_(d),
        rank_rel_(rank_rel > 0 ? rank_rel : tolerances().rank_rel),
        cols_(0),
        mat_(d * d, 16) {}

  int size() const { return cols_; }

  // Returns true if v extended the span.
  bool add(Vector v) {
    const double original = v.norm();
    if (original == 0.0) return false;
    project_out(v);
    project_out(v);  // second pass
    const double residual = v.norm();
    if (residual <= rank_rel_ * original) return false;
    if (cols_ == mat_.cols()) mat_.conservativeResize(Eigen::NoChange, 2 * cols_);
    mat_.col(cols_++) = v / residual;
    return true;
  }

  std::vector<Operator> operators() const {
    std::vector<Operator> out;
    out.reserve(cols_);
    for (int k = 0; k < cols_; ++k) out.push_back(unvec(mat_.col(k), d_));
    return out;
  }

 private:
  void project_out(Vector& v) const {
    if (cols_ == 0) return;
    auto b = mat_.leftCols(cols_);
    v.noalias() -= b * (b.adjoint() * v);
  }

  int d_;
  double rank_rel_;
  int cols_;
  Eigen::MatrixXcd mat_;
};

}  // namespace

OperatorAlgebra::OperatorAlgebra(int dim_space, Kind kind,
                                 std::vector<Operator> orthonormal_basis)
    : dim_space_(dim_space), kind_(kind), basis_(std::move(orthonormal_basis)) {}

Operator OperatorAlgebra::project(const Operator& x) const {
  if (x.rows() != dim_space_ || x.cols() != dim_space_) {
    throw std::invalid_argument("OperatorAlgebra::project: dimension mismatch");
  }
  Operator out = Operator::Zero(dim_space_, dim_space_);
  for (const auto& b : basis_) out += hs_inner(b, x) * b;
  return out;
}

bool OperatorAlgebra::contains(const Operator& x) const {
  const double nx = hs_norm(x);
  if (nx == 0.0) return true;
  return hs_norm(x - project(x)) <= tolerances().contains_rel * nx;
}

std::vector<Operator> orthonormal_span(std::span<const Operator> ops,
                                       double rank_rel) {
  if (ops.empty()) return {};
  SpanBasis basis(static_cast<int>(ops.front().rows()), rank_rel);
  for (const auto& op : ops) basis.add(vec(op));
  return basis.operators();
}

OperatorAlgebra generate_algebra(std::span<const Operator> generators,
                                 bool include_identity) {
  if (generators.empty()) {
    throw std::invalid_argument("generate_algebra: no generators");
  }
  const int d = static_cast<int>(generators.front().rows());
  for (const auto& g : generators) {
    if (g.rows() != d || g.cols() != d) {
      throw std::invalid_argument("generate_algebra: dimension mismatch");
    }
  }

  SpanBasis basis(d);
  std::vector<Operator> fresh;  // span-extending elements not yet multiplied
  auto feed = [&](const Operator& op) {
    if (basis.add(vec(op))) fresh.push_back(op);
  };
  if (include_identity) feed(identity(d));
  for (const auto& g : generators) feed(g);

  // Right-multiplying the growing basis by the generators reaches every word.
  const int max_rounds = 4 * d * d;
  int round = 0;
  while (!fresh.empty() && basis.size() < d * d) {
    if (++round > max_rounds) {
      throw NumericalInconsistencyError(
          "generate_algebra: closure failed to stabilize");
    }
    std::vector<Operator> batch;
    batch.swap(fresh);
    for (const auto& b : batch) {
      for (const auto& g : generators) {
        feed(b * g);
        if (basis.size() == d * d) break;
      }
      if (basis.size() == d * d) break;
    }
  }
  return OperatorAlgebra(d, OperatorAlgebra::Kind::GeneratedAlgebra, basis.operators());
}

OperatorAlgebra commutant(std::span<const Operator> generators, double null_rel) {
  if (generators.empty()) {
    throw std::invalid_argument("commutant: no generators");
  }
  const int d = static_cast<int>(generators.front().rows());
  const int d2 = d * d;
  if (null_rel <= 0) null_rel = tolerances().rank_rel;

  // Reducing the generator set to a basis of its span leaves the commutant
  // unchanged and keeps the stacked matrix small.
  bool all_hermitian = true;
  for (const auto& g : generators) {
    if (g.rows() != d || g.cols() != d) {
      throw std::invalid_argument("commutant: dimension mismatch");
    }
    if (!is_hermitian(g, 1e-9)) all_hermitian = false;
  }
  std::vector<Operator> reduced;
  {
    SpanBasis span(d);
    for (const auto& g : generators) {
      const double n = hs_norm(g);
      if (n == 0.0) continue;
      if (span.add(vec(g))) reduced.push_back(g / n);
    }
  }
  if (reduced.empty()) reduced.push_back(Operator::Zero(d, d));

  Eigen::MatrixXcd stacked(static_cast<int>(reduced.size()) * d2, d2);
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    // [A, O] = 0  <=>  (I (x) A - A^T (x) I) vec(O) = 0
    stacked.middleRows(static_cast<int>(i) * d2, d2) =
        left_mult(reduced[i]) - right_mult(reduced[i]);
  }

  // QR-compress the tall stack (same null space), then a Jacobi SVD of the
  // square factor for reliable small singular values.
  Eigen::MatrixXcd square;
  if (stacked.rows() > d2) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(stacked);
    square = qr.matrixQR()
                 .topRows(d2)
                 .template triangularView<Eigen::Upper>();
  } else {
    square = stacked;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(square, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  // The generators are normalized to unit Hilbert-Schmidt norm, so the
  // natural scale of the stack is O(1) even when it is numerically zero
  // (generators proportional to the identity).
  const double cutoff = null_rel * std::max(sv.size() > 0 ? sv(0) : 0.0, 1.0);
  std::vector<Operator> null_ops;
  for (int k = 0; k < sv.size(); ++k) {
    if (sv(k) <= cutoff) null_ops.push_back(unvec(svd.matrixV().col(k), d));
  }

  if (all_hermitian) {
    // The span is then closed under dagger; re-express with a Hermitian basis.
    std::vector<Operator> herm;
    for (const auto& b : null_ops) {
      herm.push_back(0.5 * (b + b.adjoint()));
      herm.push_back((0.5 / kImag) * (b - b.adjoint()));
    }
    auto ortho = orthonormal_span(herm);
    if (ortho.size() == null_ops.size()) {
      null_ops = std::move(ortho);
    }
  }
  return OperatorAlgebra(d, OperatorAlgebra::Kind::Commutant, std::move(null_ops));
}

bool is_full(const OperatorAlgebra& a) {
  return a.dimension() == a.dim_space() * a.dim_space();
}

bool is_trivial(const OperatorAlgebra& a) {
  if (a.dimension() != 1) return false;
  const Operator& b = a.basis().front();
  const int d = a.dim_space();
  const Complex overlap = hs_inner(identity(d), b) / std::sqrt(double(d));
  if (std::abs(std::abs(overlap) - 1.0) > 1e-10) {
    throw NumericalInconsistencyError(
        "is_trivial: one-dimensional algebra not spanned by the identity");
  }
  return true;
}

bool subspace_leq(const OperatorAlgebra& a, const OperatorAlgebra& b) {
  if (a.dim_space() != b.dim_space()) {
    throw std::invalid_argument("subspace_leq: dimension mismatch");
  }
  return std::all_of(a.basis().begin(), a.basis().end(),
                     [&](const Operator& x) { return b.contains(x); });
}

double subspace_residual(const OperatorAlgebra& a, const OperatorAlgebra& b) {
  double worst = 0.0;
  for (const auto& x : a.basis()) {
    worst = std::max(worst, hs_norm(x - b.project(x)));
  }
  return worst;
}

}  // namespace qsteady
