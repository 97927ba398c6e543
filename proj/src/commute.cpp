#include "jointspec/commute.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jointspec {

namespace {

const Complex kI{0.0, 1.0};

double safe(double x) { return std::max(x, std::numeric_limits<double>::min()); }

bool is_zero(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff() == 0.0; }

PairReducibility reducibility_of(std::string label, std::vector<ComplexMatrix> members, const AnalysisConfig& cfg) {
  PairReducibility out;
  out.label = std::move(label);
  if (std::all_of(members.begin(), members.end(), is_zero)) {
    // The characteristic polynomial is the constant 1.
    return out;
  }
  const auto f = factor_linear(charpoly(OperatorTuple(std::move(members))), cfg.factor_config());
  out.verdict = f.verdict;
  out.residual = f.residual;
  out.reducible = f.verdict == Verdict::reducible;
  return out;
}

void refine(const OperatorTuple& tuple, const ComplexMatrix& basis, Eigen::Index level, double tol,
            std::vector<ComplexMatrix>& blocks) {
  if (level == tuple.arity()) {
    blocks.push_back(basis);
    return;
  }
  const ComplexMatrix& a = tuple[level];
  const double a_norm = tuple.norms()[static_cast<std::size_t>(level)];
  const ComplexMatrix compressed = basis.adjoint() * a * basis;
  const auto eig = eig_normal(compressed, std::max(tol, 1e-10), default_cluster_gap(a_norm));
  for (std::size_t k = 0; k < eig.clusters.size(); ++k) {
    const ComplexMatrix sub = basis * eig.eigenspace(k);
    for (Eigen::Index l = level + 1; l < tuple.arity(); ++l) {
      const ComplexMatrix image = tuple[l] * sub;
      const double leak = operator_norm((image - sub * (sub.adjoint() * image)).eval());
      if (leak > 10.0 * tol * tuple.norms()[static_cast<std::size_t>(l)]) {
        throw SpectralError(ErrorCode::NotCommuting, "a later member leaks out of an eigenspace");
      }
    }
    refine(tuple, sub, level + 1, tol, blocks);
  }
}

}  // namespace

EquivalenceReport equivalence_report(const OperatorTuple& tuple, const AnalysisConfig& cfg) {
  EquivalenceReport r;
  const auto& norms = tuple.norms();
  for (Eigen::Index i = 0; i < tuple.arity(); ++i) {
    for (Eigen::Index j = i + 1; j < tuple.arity(); ++j) {
      const double c = commutator_norm(tuple[i], tuple[j]);
      r.direct = std::max(r.direct, c);
      r.direct_relative =
          std::max(r.direct_relative, c / safe(norms[static_cast<std::size_t>(i)] * norms[static_cast<std::size_t>(j)]));
    }
  }
  r.commute = r.direct_relative <= cfg.tol;

  r.all_normal = true;
  for (Eigen::Index i = 0; i < tuple.arity(); ++i) {
    const double n = norms[static_cast<std::size_t>(i)];
    r.all_normal = r.all_normal && normality_defect(tuple[i]) <= cfg.tol * safe(n * n);
  }

  const MultiPoly p = charpoly(tuple);
  r.reducibility = factor_linear(p, cfg.factor_config());
  r.reducible = r.reducibility.verdict == Verdict::reducible;

  r.hyperplanes_ok = r.reducible;
  if (r.reducible) {
    for (const auto& h : factors_to_hyperplanes(r.reducibility)) {
      r.hyperplanes.push_back(hyperplane_membership(tuple, p, h.normal, cfg.hyperplane_samples, cfg.tol, cfg.seed));
      r.hyperplanes_ok = r.hyperplanes_ok && r.hyperplanes.back().contained;
    }
  }

  r.non_normal_gap = r.reducible && !r.commute && !r.all_normal;
  if (r.all_normal) {
    r.consistent = r.commute == r.reducible && r.reducible == r.hyperplanes_ok;
  } else {
    // Commuting still forces reducibility; the converse may fail.
    r.consistent = (!r.commute || r.reducible) && r.reducible == r.hyperplanes_ok;
  }
  return r;
}

JointDiagonalization simultaneous_diagonalize(const OperatorTuple& tuple, double tol) {
  const auto& norms = tuple.norms();
  const Eigen::Index n = tuple.arity();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double scale = safe(norms[static_cast<std::size_t>(i)] * norms[static_cast<std::size_t>(j)]);
      if (commutator_norm(tuple[i], tuple[j]) > tol * scale) {
        throw SpectralError(ErrorCode::NotCommuting, "members " + std::to_string(i) + " and " + std::to_string(j));
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = norms[static_cast<std::size_t>(i)];
    if (normality_defect(tuple[i]) > tol * safe(s * s)) {
      throw SpectralError(ErrorCode::NotNormal, "member " + std::to_string(i));
    }
  }

  const Eigen::Index dim = tuple.dim();
  std::vector<ComplexMatrix> blocks;
  refine(tuple, ComplexMatrix::Identity(dim, dim), 0, tol, blocks);

  JointDiagonalization out;
  out.unitary.resize(dim, dim);
  Eigen::Index col = 0;
  for (const auto& b : blocks) {
    out.unitary.middleCols(col, b.cols()) = b;
    col += b.cols();
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const ComplexMatrix t = out.unitary.adjoint() * tuple[j] * out.unitary;
    out.diagonals.push_back(t.diagonal());
    ComplexMatrix off = t;
    off.diagonal().setZero();
    out.residual = std::max(out.residual, operator_norm(off) / safe(norms[static_cast<std::size_t>(j)]));
  }
  return out;
}

NormalityReport normality_test(const ComplexMatrix& a, const AnalysisConfig& cfg) {
  require_square(a, "normality_test");
  NormalityReport r;
  const double norm = operator_norm(a);
  r.direct_defect = normality_defect(a) / safe(norm * norm);
  r.direct_normal = r.direct_defect <= cfg.tol;
  if (is_zero(a)) {
    r.spectral_normal = true;
  } else {
    const OperatorTuple pair({a + a.adjoint(), kI * (a - a.adjoint())});
    r.pair = equivalence_report(pair, cfg);
    r.spectral_normal = r.pair->reducible;
  }
  r.agree = r.spectral_normal == r.direct_normal;
  return r;
}

CompleteCommutativityReport complete_commutativity_test(const ComplexMatrix& a, const ComplexMatrix& b,
                                                        const AnalysisConfig& cfg) {
  require_square(a, "complete_commutativity_test");
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw SpectralError(ErrorCode::DimensionMismatch, "complete_commutativity_test operands differ in shape");
  }
  // Skew-Hermitian parts are rotated by i so every pair is self-adjoint.
  const ComplexMatrix a_plus = a + a.adjoint();
  const ComplexMatrix a_minus = kI * (a - a.adjoint());
  const ComplexMatrix b_plus = b + b.adjoint();
  const ComplexMatrix b_minus = kI * (b - b.adjoint());

  CompleteCommutativityReport r;
  r.pairs[0] = reducibility_of("A+A*,B+B*", {a_plus, b_plus}, cfg);
  r.pairs[1] = reducibility_of("A+A*,B-B*", {a_plus, b_minus}, cfg);
  r.pairs[2] = reducibility_of("A-A*,B+B*", {a_minus, b_plus}, cfg);
  r.pairs[3] = reducibility_of("A-A*,B-B*", {a_minus, b_minus}, cfg);
  r.spectral = std::all_of(r.pairs.begin(), r.pairs.end(), [](const auto& p) { return p.reducible; });

  const double scale = safe(operator_norm(a) * operator_norm(b));
  r.commutator = commutator_norm(a, b) / scale;
  r.adjoint_commutator = commutator_norm(a, b.adjoint().eval()) / scale;
  r.direct = r.commutator <= cfg.tol && r.adjoint_commutator <= cfg.tol;
  r.agree = r.spectral == r.direct;
  if (cfg.four_tuple) {
    r.four_tuple = reducibility_of("A+A*,A-A*,B+B*,B-B*", {a_plus, a_minus, b_plus, b_minus}, cfg);
  }
  return r;
}

SharedEigenvector shared_eigenvector(const ComplexMatrix& a, const ComplexMatrix& b, Complex lambda, Complex mu,
                                     double tol) {
  require_square(a, "shared_eigenvector");
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw SpectralError(ErrorCode::DimensionMismatch, "shared_eigenvector operands differ in shape");
  }
  const double a_norm = operator_norm(a);
  const double b_norm = operator_norm(b);
  const auto eig = eig_normal(a);
  const std::size_t k = eig.nearest_cluster(lambda);
  const double scale_a = 1.0 + a_norm;
  const double scale_b = 1.0 + b_norm;
  if (std::abs(eig.clusters[k].value - lambda) > std::max(tol * scale_a, default_cluster_gap(a_norm))) {
    throw SpectralError(ErrorCode::NoSharedVector, "lambda is not an eigenvalue of A");
  }
  const ComplexMatrix space = eig.eigenspace(k);
  const ComplexMatrix compressed = space.adjoint() * b * space;
  Eigen::ComplexEigenSolver<ComplexMatrix> ces(compressed);
  if (ces.info() != Eigen::Success) throw SpectralError(ErrorCode::NoConvergence, "compressed eigenproblem");

  SharedEigenvector best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < compressed.rows(); ++i) {
    ComplexVector x = space * ces.eigenvectors().col(i);
    x /= x.norm();
    const double dist = std::abs(ces.eigenvalues()(i) - mu);
    const double b_res = (b * x - mu * x).norm();
    // Equidistant candidates: prefer the one that is closest to an eigenvector of B.
    const bool tie = std::abs(dist - best_dist) <= 1e-12 * scale_b;
    if (dist < best_dist - 1e-12 * scale_b || (tie && b_res < best.b_residual)) {
      best_dist = dist;
      best.x = x;
      best.b_residual = b_res;
    }
  }
  best.eigen_residual = (a * best.x - lambda * best.x).norm();
  best.inner_residual = std::abs(best.x.dot(b * best.x) - mu);
  best.extremal = b_norm > 0.0 && std::abs(std::abs(mu) - b_norm) <= tol * scale_b;

  const bool ok = best.eigen_residual <= tol * scale_a && best.inner_residual <= tol * scale_b &&
                  (!best.extremal || best.b_residual <= tol * scale_b);
  if (!ok) {
    throw SpectralError(ErrorCode::NoSharedVector,
                        "residuals ||Ax - lambda x|| = " + std::to_string(best.eigen_residual) +
                            ", |<Bx,x> - mu| = " + std::to_string(best.inner_residual) +
                            ", ||Bx - mu x|| = " + std::to_string(best.b_residual));
  }
  return best;
}

}  // namespace jointspec
