#include "jointspec/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "jointspec/poly.hpp"
#include "jointspec/random.hpp"
#include "jointspec/spectra.hpp"

namespace jointspec {

namespace {

constexpr double kResolventCap = 1e12;

void validate(const ComplexMatrix& a, const ContourSpec& spec) {
  require_square(a, "contour");
  if (!(spec.radius > 0.0) || spec.nodes < 16) {
    throw SpectralError(ErrorCode::InvalidArgument, "contour needs radius > 0 and at least 16 nodes");
  }
  const ComplexVector ev = eigenvalues(a);
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    const double dist = std::abs(ev(k) - spec.center);
    if (dist >= spec.radius * (1.0 - spec.margin) && dist <= spec.radius * (1.0 + spec.margin)) {
      throw SpectralError(ErrorCode::ContourThroughSpectrum, "an eigenvalue lies within the contour margin");
    }
  }
}

// Calls fn(weight, resolvent) for each trapezoid node; the weights already
// carry the 1/(2 pi i) du factor.
template <typename Fn>
void for_each_node(const ComplexMatrix& a, const ContourSpec& spec, Fn&& fn) {
  const Eigen::Index n = a.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const double scale = 1.0 + operator_norm(a);
  for (int m = 0; m < spec.nodes; ++m) {
    const Complex e = std::polar(1.0, 2.0 * std::numbers::pi * m / spec.nodes);
    const Complex u = spec.center + spec.radius * e;
    const ComplexMatrix shifted = u * id - a;
    if (smallest_singular_value(shifted) * kResolventCap < scale) {
      throw SpectralError(ErrorCode::ContourThroughSpectrum, "resolvent norm exceeds cap on the contour");
    }
    const ComplexMatrix resolvent = Eigen::PartialPivLU<ComplexMatrix>(shifted).inverse();
    fn(spec.radius * e / static_cast<double>(spec.nodes), resolvent);
  }
}

// Follows one eigenvalue (or root) branch from s = 0 to `target`.
// candidates(s) lists every value at parameter s; the branch starts at
// `start` with slope `slope`. Steps halve while the nearest two candidates
// are within a factor 2 of the prediction.
template <typename Candidates>
Complex track(Candidates&& candidates, Complex start, Complex slope, double target, double scale) {
  const double min_step = std::abs(target) * std::ldexp(1.0, -10);
  double s = 0.0;
  double h = target;
  Complex x = start;
  Complex velocity = slope;
  while (std::abs(target - s) > 0.0) {
    if (std::abs(h) > std::abs(target - s)) h = target - s;
    const Complex predicted = x + h * velocity;
    const ComplexVector found = candidates(s + h);
    double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
    Complex c1, c2;
    for (Eigen::Index i = 0; i < found.size(); ++i) {
      const double dist = std::abs(found(i) - predicted);
      if (dist < d1) {
        d2 = d1;
        c2 = c1;
        d1 = dist;
        c1 = found(i);
      } else if (dist < d2) {
        d2 = dist;
        c2 = found(i);
      }
    }
    if (found.size() == 0) throw SpectralError(ErrorCode::TrackingLost, "no candidates");
    const bool distinct = std::abs(c1 - c2) > 1e-10 * scale;
    if (std::isfinite(d2) && distinct && d2 <= 2.0 * d1) {
      h /= 2.0;
      if (std::abs(h) < min_step) throw SpectralError(ErrorCode::TrackingLost, "branch could not be disambiguated");
      continue;
    }
    velocity = (c1 - x) / h;
    x = c1;
    s += h;
  }
  return x;
}

std::vector<Complex> richardson(const std::vector<double>& steps, const std::vector<Complex>& central) {
  std::vector<Complex> out;
  for (std::size_t i = 0; i + 1 < central.size(); ++i) {
    const double r2 = (steps[i] / steps[i + 1]) * (steps[i] / steps[i + 1]);
    out.push_back((r2 * central[i + 1] - central[i]) / (r2 - 1.0));
  }
  return out;
}

bool hermitian(const ComplexMatrix& m, double tol) {
  return (m - m.adjoint()).norm() <= tol * std::max(m.norm(), 1.0);
}

}  // namespace

int quadrature_nodes(double margin, double target) {
  if (!(margin > 0.0 && margin < 1.0) || !(target > 0.0 && target < 1.0)) {
    throw SpectralError(ErrorCode::InvalidArgument, "need 0 < margin < 1 and 0 < target < 1");
  }
  return std::max(16, static_cast<int>(std::ceil(std::log(target) / -std::log1p(margin))));
}

ContourSpec default_contour(const ComplexMatrix& a, Complex lambda, int nodes) {
  const ComplexVector ev = eigenvalues(a);
  const double norm = operator_norm(a);
  const double same = std::max(1e-6 * (1.0 + norm), default_cluster_gap(norm));
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    const double dist = std::abs(ev(k) - lambda);
    if (dist > same) gap = std::min(gap, dist);
  }
  ContourSpec spec;
  spec.center = lambda;
  spec.radius = std::isfinite(gap) ? gap / 2.0 : 1.0;
  spec.nodes = nodes;
  return spec;
}

RieszProjection riesz_projection(const ComplexMatrix& a, const ContourSpec& spec) {
  validate(a, spec);
  const Eigen::Index n = a.rows();
  RieszProjection out;
  out.projection = ComplexMatrix::Zero(n, n);
  for_each_node(a, spec, [&](Complex w, const ComplexMatrix& r) { out.projection += w * r; });
  out.trace = out.projection.trace();
  const double rounded = std::round(out.trace.real());
  if (std::abs(out.trace - Complex(rounded, 0.0)) > 1e-3) {
    throw SpectralError(ErrorCode::RankMismatch, "trace of the projection is not an integer");
  }
  out.rank = static_cast<int>(rounded);
  out.idempotency = operator_norm((out.projection * out.projection - out.projection).eval());
  out.self_adjointness = operator_norm((out.projection - out.projection.adjoint()).eval());
  return out;
}

ComplexMatrix projection_first_order(const ComplexMatrix& a, const ComplexMatrix& b, const ContourSpec& spec) {
  validate(a, spec);
  if (b.rows() != a.rows() || b.cols() != a.cols()) {
    throw SpectralError(ErrorCode::DimensionMismatch, "perturbation shape differs");
  }
  ComplexMatrix t = ComplexMatrix::Zero(a.rows(), a.cols());
  for_each_node(a, spec, [&](Complex w, const ComplexMatrix& r) { t += w * (r * b * r); });
  return t;
}

PerturbationProbe eigenvalue_derivative(const ComplexMatrix& a, const ComplexMatrix& b, Complex lambda,
                                        const PerturbationConfig& cfg) {
  require_square(a, "eigenvalue_derivative");
  if (b.rows() != a.rows() || b.cols() != a.cols()) {
    throw SpectralError(ErrorCode::DimensionMismatch, "perturbation shape differs");
  }
  const auto eig = eig_normal(a);
  const double a_norm = operator_norm(a);
  const std::size_t k = eig.nearest_cluster(lambda);
  const auto& cluster = eig.clusters[k];
  if (std::abs(cluster.value - lambda) > std::max(1e-6 * (1.0 + a_norm), default_cluster_gap(a_norm))) {
    throw SpectralError(ErrorCode::InvalidArgument, "lambda is not an eigenvalue of A");
  }

  PerturbationProbe probe;
  probe.lambda = cluster.value;
  probe.multiplicity = static_cast<int>(cluster.multiplicity);
  const ComplexMatrix space = eig.eigenspace(k);
  if (probe.multiplicity == 1) {
    probe.v = space.col(0);
  } else {
    if (!hermitian(a, 1e-10) || !hermitian(b, 1e-10)) {
      throw SpectralError(ErrorCode::MultiplicityRegimeViolation,
                          "a multiple eigenvalue needs self-adjoint A and B");
    }
    const ComplexMatrix compressed = space.adjoint() * b * space;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(compressed);
    Eigen::Index pick = 0;
    for (Eigen::Index i = 1; i < compressed.rows(); ++i) {
      const double cur = cfg.branch_hint ? std::abs(es.eigenvalues()(i) - *cfg.branch_hint) : -std::abs(es.eigenvalues()(i));
      const double old = cfg.branch_hint ? std::abs(es.eigenvalues()(pick) - *cfg.branch_hint) : -std::abs(es.eigenvalues()(pick));
      if (cur < old) pick = i;
    }
    probe.v = space * es.eigenvectors().col(pick);
  }
  probe.v /= probe.v.norm();
  probe.inner = probe.v.dot(b * probe.v);
  probe.p0_rank = riesz_projection(a, default_contour(a, probe.lambda)).trace.real();

  const double scale = 1.0 + a_norm + operator_norm(b);
  auto spectrum_at = [&](double eps) { return eigenvalues(a + eps * b); };
  probe.epsilons = cfg.epsilons;
  for (double eps : cfg.epsilons) {
    const Complex up = track(spectrum_at, probe.lambda, probe.inner, eps, scale);
    const Complex down = track(spectrum_at, probe.lambda, probe.inner, -eps, scale);
    probe.central_differences.push_back((up - down) / (2.0 * eps));
  }
  probe.richardson = richardson(probe.epsilons, probe.central_differences);
  probe.fd_derivative = probe.richardson.empty() ? probe.central_differences.front() : probe.richardson.front();
  probe.discrepancy = std::abs(probe.fd_derivative - probe.inner);
  probe.agree = probe.discrepancy <= cfg.tol;
  return probe;
}

TangentReport tangent_mu(const ComplexMatrix& a, const ComplexMatrix& b, Complex lambda,
                         const PerturbationConfig& cfg) {
  if (std::abs(lambda) == 0.0) throw SpectralError(ErrorCode::InvalidArgument, "lambda must be nonzero");
  const auto eig = eig_normal(a);
  const auto& cluster = eig.clusters[eig.nearest_cluster(lambda)];
  if (cluster.multiplicity != 1) {
    throw SpectralError(ErrorCode::MultiplicityRegimeViolation, "tangent line needs a simple eigenvalue");
  }
  const Complex lam = cluster.value;

  const MultiPoly p = charpoly(OperatorTuple({a, b}));
  const ComplexVector z0 = (ComplexVector(2) << -1.0 / lam, 0.0).finished();
  const double majorant = std::max(evaluate_majorant(p, z0), 1.0);
  const double cls_tol = 1e-8 * majorant;
  const PointClass cls = classify_point(p, z0, cls_tol);
  if (cls == PointClass::off_variety) {
    throw SpectralError(ErrorCode::InvalidArgument, "(-1/lambda, 0) is not on the spectral curve");
  }
  const Complex dz = evaluate(p.derivative(0), z0);
  const Complex dw = evaluate(p.derivative(1), z0);
  if (cls == PointClass::singular || std::abs(dz) <= cls_tol) {
    throw SpectralError(ErrorCode::SingularPoint, "dp/dz vanishes at (-1/lambda, 0)");
  }

  TangentReport out;
  out.implicit_phi_prime = -dw / dz;
  const ComplexVector dir = (ComplexVector(2) << 1.0, 0.0).finished();
  auto roots_at = [&](double w) {
    const ComplexVector base = (ComplexVector(2) << 0.0, w).finished();
    const auto [q, dropped] = trim_leading(restrict_to_line(p, base, dir));
    if (q.degree() < 1) return ComplexVector(0);
    return roots(q).flattened();
  };
  const double scale = 1.0 + std::abs(z0(0));
  out.steps = {1e-4, 1e-5};
  for (double h : out.steps) {
    const Complex up = track(roots_at, z0(0), out.implicit_phi_prime, h, scale);
    const Complex down = track(roots_at, z0(0), out.implicit_phi_prime, -h, scale);
    out.central_differences.push_back((up - down) / (2.0 * h));
  }
  out.phi_prime = richardson(out.steps, out.central_differences).front();
  out.mu = -lam * out.phi_prime;

  PerturbationConfig inner_cfg = cfg;
  out.inner = eigenvalue_derivative(a, b, lam, inner_cfg).inner;
  out.discrepancy = std::abs(out.mu - out.inner);
  out.agree = out.discrepancy <= cfg.tol;
  return out;
}

ExpansionCheck projection_expansion_check(const ComplexMatrix& a, const ComplexMatrix& b, const ContourSpec& spec,
                                          double epsilon, std::uint64_t seed) {
  const ComplexMatrix perturbed = a + epsilon * b;
  const auto p0 = riesz_projection(a, spec);
  const auto pe = riesz_projection(perturbed, spec);
  const ComplexMatrix t = projection_first_order(a, b, spec);

  ExpansionCheck out;
  out.epsilon = epsilon;
  out.residual = operator_norm((pe.projection - p0.projection - epsilon * t).eval());
  if (pe.rank == 1) {
    Rng rng(seed);
    const ComplexVector x = random_vector(a.rows(), rng);
    const Complex lambda_eps = (perturbed * pe.projection).trace();
    const ComplexVector px = pe.projection * x;
    out.eigen_checked = true;
    out.eigen_residual = (perturbed * px - lambda_eps * px).norm() / x.norm();
  }
  return out;
}

ExpansionScaling projection_expansion_scaling(const ComplexMatrix& a, const ComplexMatrix& b, const ContourSpec& spec,
                                              double largest, double smallest, std::uint64_t seed) {
  ExpansionScaling out;
  for (double eps = largest; eps >= smallest * (1.0 - 1e-12); eps /= 2.0) {
    out.checks.push_back(projection_expansion_check(a, b, spec, eps, seed));
  }
  for (std::size_t k = 0; k + 1 < out.checks.size(); ++k) {
    out.ratios.push_back(out.checks[k].residual / out.checks[k + 1].residual);
  }
  return out;
}

}  // namespace jointspec
