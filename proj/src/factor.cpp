#include "jointspec/factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "jointspec/random.hpp"

namespace jointspec {

namespace {

constexpr double kDegeneracy = 1e-10;

enum class Failure { none, degree_drop, collision, split };

// Roots s_k = <a_k, dir> of s^d q(-1/s), where q(t) = p(t dir). The reversed
// polynomial is monic because p(0) = 1, and a factor with <a_k, dir> = 0 shows
// up as a root at 0 instead of a root at infinity.
ComplexVector slopes(const MultiPoly& p, int d, const ComplexVector& dir) {
  const auto c = restrict_to_line(p, ComplexVector::Zero(dir.size()), dir).dense();
  std::vector<Complex> rev(static_cast<std::size_t>(d) + 1, 0.0);
  for (int k = 0; k <= d && k < static_cast<int>(c.size()); ++k) {
    rev[static_cast<std::size_t>(d - k)] = (k % 2 == 0 ? 1.0 : -1.0) * c[static_cast<std::size_t>(k)];
  }
  return roots(MultiPoly::univariate(rev)).flattened();
}

bool degree_preserved(const MultiPoly& p, int d, const ComplexVector& dir) {
  const auto c = restrict_to_line(p, ComplexVector::Zero(dir.size()), dir).dense();
  double scale = 0.0;
  for (auto v : c) scale = std::max(scale, std::abs(v));
  return static_cast<int>(c.size()) == d + 1 && std::abs(c.back()) > kDegeneracy * scale;
}

// Assigns new roots to tracked paths. Paths whose predictions coincide form a
// group and are interchangeable; a root is ambiguous when its two nearest
// groups are within a factor 2 in distance.
std::optional<ComplexVector> match(const ComplexVector& predicted, const ComplexVector& found, double cluster) {
  const Eigen::Index d = predicted.size();
  const auto groups = cluster_values(predicted, 1e-12, cluster);
  const auto g_count = groups.size();
  std::vector<Complex> centers(g_count);
  for (std::size_t g = 0; g < g_count; ++g) {
    Complex s = 0.0;
    for (auto i : groups[g]) s += predicted(i);
    centers[g] = s / static_cast<double>(groups[g].size());
  }

  std::vector<std::vector<Eigen::Index>> assigned(g_count);
  for (Eigen::Index r = 0; r < found.size(); ++r) {
    double d1 = std::numeric_limits<double>::infinity();
    double d2 = d1;
    std::size_t best = 0;
    for (std::size_t g = 0; g < g_count; ++g) {
      const double dist = std::abs(found(r) - centers[g]);
      if (dist < d1) {
        d2 = d1;
        d1 = dist;
        best = g;
      } else if (dist < d2) {
        d2 = dist;
      }
    }
    if (d2 <= 2.0 * d1) return std::nullopt;
    assigned[best].push_back(r);
  }

  ComplexVector out(d);
  for (std::size_t g = 0; g < g_count; ++g) {
    if (assigned[g].size() != groups[g].size()) return std::nullopt;
    // Greedy nearest pairing inside a group of interchangeable paths.
    std::vector<bool> used(assigned[g].size(), false);
    for (auto path : groups[g]) {
      std::size_t pick = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < assigned[g].size(); ++k) {
        if (used[k]) continue;
        const double dist = std::abs(found(assigned[g][k]) - predicted(path));
        if (dist < best) {
          best = dist;
          pick = k;
        }
      }
      used[pick] = true;
      out(path) = found(assigned[g][pick]);
    }
  }
  return out;
}

// Continues the slopes from `start` along dir(tau) = u + tau e_j, tau in [0, 1].
std::optional<ComplexVector> continue_coordinate(const MultiPoly& p, int d, const ComplexVector& u, int j,
                                                 const ComplexVector& start, const FactorConfig& cfg) {
  const double max_step = 1.0 / cfg.steps;
  const double min_step = std::ldexp(1.0, -cfg.max_halvings);
  ComplexVector x = start;
  ComplexVector x_prev;
  double h_prev = 0.0;
  double tau = 0.0;
  double h = max_step;
  while (tau < 1.0) {
    h = std::min(h, 1.0 - tau);
    ComplexVector dir = u;
    dir(j) += tau + h;
    const ComplexVector found = slopes(p, d, dir);
    ComplexVector predicted = x;
    if (h_prev > 0.0) predicted += (h / h_prev) * (x - x_prev);
    auto next = match(predicted, found, cfg.cluster);
    if (!next) {
      h /= 2.0;
      if (h < min_step) return std::nullopt;
      continue;
    }
    x_prev = x;
    x = *next;
    tau += h;
    h_prev = h;
    h = std::min(2.0 * h, max_step);
  }
  return x;
}

struct Extraction {
  Failure failure = Failure::none;
  std::vector<LinearFactor> factors;
};

Extraction extract(const MultiPoly& p, int d, const ComplexVector& u, const FactorConfig& cfg) {
  const int n = p.arity();
  Extraction out;
  if (!degree_preserved(p, d, u)) {
    out.failure = Failure::degree_drop;
    return out;
  }
  const ComplexVector s0 = slopes(p, d, u);
  ComplexMatrix coords(n, d);  // column k holds a_k
  for (int j = 0; j < n; ++j) {
    auto end = continue_coordinate(p, d, u, j, s0, cfg);
    if (!end) {
      out.failure = Failure::collision;
      return out;
    }
    coords.row(j) = (*end - s0).transpose();
  }

  // Merge paths whose full coefficient vectors coincide.
  std::vector<int> label(static_cast<std::size_t>(d), -1);
  std::vector<std::vector<int>> members;
  for (int k = 0; k < d; ++k) {
    if (label[k] >= 0) continue;
    label[k] = static_cast<int>(members.size());
    members.push_back({k});
    for (int l = k + 1; l < d; ++l) {
      if (label[l] >= 0) continue;
      const double scale = 1.0 + std::max(coords.col(k).cwiseAbs().maxCoeff(), coords.col(l).cwiseAbs().maxCoeff());
      if ((coords.col(k) - coords.col(l)).cwiseAbs().maxCoeff() <= cfg.cluster * scale) {
        label[l] = label[k];
        members.back().push_back(l);
      }
    }
  }
  // Paths that started on top of each other must end in the same factor;
  // otherwise u could not tell two distinct factors apart.
  for (int k = 0; k < d; ++k) {
    for (int l = k + 1; l < d; ++l) {
      if (s0(k) == s0(l) && label[k] != label[l]) {
        out.failure = Failure::split;
        return out;
      }
    }
  }
  for (const auto& m : members) {
    ComplexVector a = ComplexVector::Zero(n);
    for (int k : m) a += coords.col(k);
    out.factors.push_back({a / static_cast<double>(m.size()), static_cast<int>(m.size())});
  }
  return out;
}

double verify(const MultiPoly& p, const std::vector<LinearFactor>& factors, Rng& rng, int points) {
  const int n = p.arity();
  double amax = 0.0;
  for (const auto& f : factors) {
    if (!f.coeffs.allFinite()) return std::numeric_limits<double>::infinity();
    amax = std::max(amax, f.coeffs.cwiseAbs().maxCoeff());
  }
  const MultiPoly product = expand_factors(factors, n);
  const double radius = 2.0 / (1.0 + amax);
  double worst = 0.0;
  ComplexVector z(n);
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < n; ++j) z(j) = uniform_disk(rng, radius);
    const Complex pz = evaluate(p, z);
    worst = std::max(worst, std::abs(pz - evaluate(product, z)) / (1.0 + std::abs(pz)));
  }
  return worst;
}

}  // namespace

int LinearFactorization::total_multiplicity() const {
  int m = 0;
  for (const auto& f : factors) m += f.multiplicity;
  return m;
}

ComplexMatrix LinearFactorization::flattened(int arity) const {
  ComplexMatrix out(arity, total_multiplicity());
  Eigen::Index col = 0;
  for (const auto& f : factors)
    for (int k = 0; k < f.multiplicity; ++k) out.col(col++) = f.coeffs;
  return out;
}

MultiPoly expand_factors(const std::vector<LinearFactor>& factors, int arity) {
  MultiPoly out = MultiPoly::constant(arity, 1.0);
  for (const auto& f : factors) {
    if (f.coeffs.size() != arity) throw SpectralError(ErrorCode::ArityMismatch, "factor arity differs");
    const MultiPoly lin = MultiPoly::affine(f.coeffs);
    for (int k = 0; k < f.multiplicity; ++k) out = out * lin;
  }
  return out;
}

LinearFactorization factor_linear(const MultiPoly& p, const FactorConfig& cfg) {
  const int n = p.arity();
  if (std::abs(p.coefficient(MultiPoly::Exponent(static_cast<std::size_t>(n), 0)) - 1.0) > 1e-12) {
    throw SpectralError(ErrorCode::InvalidArgument, "factor_linear expects p(0) = 1");
  }
  LinearFactorization result;
  const int d = p.degree();
  if (d == 0) {
    result.verdict = Verdict::reducible;
    return result;
  }

  Rng rng(cfg.seed);
  int degree_drops = 0;
  int verified = 0;
  std::optional<LinearFactorization> best;
  for (int attempt = 0; attempt < cfg.redraws && verified < cfg.verify_attempts; ++attempt) {
    ComplexVector u = random_vector(n, rng);
    u /= u.norm();
    Extraction ex = extract(p, d, u, cfg);
    if (ex.failure == Failure::degree_drop) {
      ++degree_drops;
      continue;
    }
    if (ex.failure != Failure::none) continue;
    ++verified;
    LinearFactorization candidate;
    candidate.factors = std::move(ex.factors);
    candidate.residual = verify(p, candidate.factors, rng, cfg.verify_points);
    candidate.verdict = candidate.residual <= cfg.tol ? Verdict::reducible : Verdict::not_reducible;
    if (!best || candidate.residual < best->residual) best = std::move(candidate);
    if (best->verdict == Verdict::reducible) break;
  }
  if (best) return *best;

  result.verdict = Verdict::degenerate;
  result.residual = std::numeric_limits<double>::infinity();
  result.note = degree_drops == cfg.redraws ? "DegenerateDirections" : "ContinuationCollision";
  return result;
}

double TwoByTwoReport::min_residual() const {
  return *std::min_element(compatibility_residuals.begin(), compatibility_residuals.end());
}

TwoByTwoReport reducible_2x2(const ComplexMatrix& a_mat, const ComplexMatrix& b_mat, double tol) {
  if (a_mat.rows() != 2 || a_mat.cols() != 2 || b_mat.rows() != 2 || b_mat.cols() != 2) {
    throw SpectralError(ErrorCode::DimensionMismatch, "reducible_2x2 needs 2x2 matrices");
  }
  const double a_scale = std::max(a_mat.cwiseAbs().maxCoeff(), 1e-300);
  if (std::abs(a_mat(0, 1)) > 1e-12 * a_scale || std::abs(a_mat(1, 0)) > 1e-12 * a_scale) {
    throw SpectralError(ErrorCode::NotDiagonal, "first matrix must be diagonal");
  }
  const Complex d1 = a_mat(0, 0), d2 = a_mat(1, 1);
  const Complex a = b_mat(0, 0), b = b_mat(0, 1), c = b_mat(1, 0), d = b_mat(1, 1);

  TwoByTwoReport r;
  r.tol = tol;
  const Complex root = std::sqrt((a - d) * (a - d) + 4.0 * b * c);
  const Complex mixed = a * d2 + d * d1;
  const double scale = 1.0 + std::max(std::abs(d1), std::abs(d2)) * std::max(b_mat.cwiseAbs().maxCoeff(), 1.0);

  const std::array<std::array<Complex, 2>, 2> lambdas{{{d1, d2}, {d2, d1}}};
  std::size_t best = 0;
  for (std::size_t order = 0; order < 2; ++order) {
    for (std::size_t sign = 0; sign < 2; ++sign) {
      const Complex s = sign == 0 ? root : -root;
      const Complex mu1 = (a + d + s) / 2.0;
      const Complex mu2 = (a + d - s) / 2.0;
      const auto& l = lambdas[order];
      const std::size_t idx = 2 * order + sign;
      r.compatibility_residuals[idx] = std::abs(l[0] * mu2 + mu1 * l[1] - mixed) / scale;
      if (r.compatibility_residuals[idx] < r.compatibility_residuals[best]) best = idx;
      if (idx == best) {
        r.lambda_pair = l;
        r.mu_pair = {mu1, mu2};
      }
    }
  }
  r.reducible = r.min_residual() <= tol;

  r.abs_bc_residual = std::abs(std::abs(b) - std::abs(c));
  r.cross_residual = std::abs(a * std::conj(c) + b * std::conj(d) - std::conj(a) * b - std::conj(c) * d);
  const double b_scale = std::max(b_mat.cwiseAbs().maxCoeff(), 1e-300);
  r.b_normal = r.abs_bc_residual <= tol * b_scale && r.cross_residual <= tol * b_scale * b_scale;
  return r;
}

TwoByTwoReport reducible_2x2_normal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  const auto eig = eig_normal(a);
  const ComplexMatrix& u = eig.basis;
  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag.diagonal() = eig.eigenvalues;
  return reducible_2x2(diag, u.adjoint() * b * u, tol);
}

std::vector<Hyperplane> factors_to_hyperplanes(const LinearFactorization& f) {
  if (f.verdict != Verdict::reducible) {
    throw SpectralError(ErrorCode::NotReducible, "hyperplanes exist only for a reducible factorization");
  }
  std::vector<Hyperplane> out;
  for (const auto& factor : f.factors) {
    if (factor.coeffs.size() == 0 || factor.coeffs.cwiseAbs().maxCoeff() == 0.0) {
      throw SpectralError(ErrorCode::InvalidArgument, "zero factor vector is a constant, not a hyperplane");
    }
    out.push_back({factor.coeffs, factor.multiplicity});
  }
  return out;
}

}  // namespace jointspec
