#include "jointspec/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "jointspec/parallel.hpp"

namespace jointspec {

namespace {

Complex ipow(Complex z, int e) {
  Complex r = 1.0;
  Complex b = z;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

int total_degree(const MultiPoly::Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

using TermIt = MultiPoly::Terms::const_iterator;

// Terms in [begin, end) share exponents in variables < var and are sorted
// lexicographically, so equal exponents of `var` are contiguous and ascending.
Complex horner(TermIt begin, TermIt end, std::size_t var, std::span<const Complex> z) {
  if (begin == end) return 0.0;
  if (var == z.size()) return begin->second;

  std::vector<std::pair<int, Complex>> groups;
  for (TermIt it = begin; it != end;) {
    const int k = it->first[var];
    TermIt stop = it;
    while (stop != end && stop->first[var] == k) ++stop;
    groups.emplace_back(k, horner(it, stop, var + 1, z));
    it = stop;
  }
  Complex acc = 0.0;
  int prev = groups.back().first;
  for (auto g = groups.rbegin(); g != groups.rend(); ++g) {
    acc = acc * ipow(z[var], prev - g->first) + g->second;
    prev = g->first;
  }
  return acc * ipow(z[var], prev);
}

}  // namespace

MultiPoly::MultiPoly(int arity) : arity_(arity) {
  if (arity < 1) throw SpectralError(ErrorCode::InvalidArgument, "polynomial arity must be positive");
}

MultiPoly::MultiPoly(int arity, Terms terms) : MultiPoly(arity) {
  for (auto& [e, c] : terms) add_term(e, c);
}

MultiPoly MultiPoly::constant(int arity, Complex c) {
  MultiPoly p(arity);
  p.add_term(Exponent(static_cast<std::size_t>(arity), 0), c);
  return p;
}

MultiPoly MultiPoly::affine(const ComplexVector& a) {
  const int n = static_cast<int>(a.size());
  MultiPoly p = constant(n, 1.0);
  for (int j = 0; j < n; ++j) {
    Exponent e(static_cast<std::size_t>(n), 0);
    e[j] = 1;
    p.add_term(e, a(j));
  }
  return p;
}

MultiPoly MultiPoly::univariate(const std::vector<Complex>& coeffs) {
  MultiPoly p(1);
  for (std::size_t k = 0; k < coeffs.size(); ++k) p.add_term({static_cast<int>(k)}, coeffs[k]);
  return p;
}

int MultiPoly::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

Complex MultiPoly::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

double MultiPoly::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void MultiPoly::add_term(const Exponent& e, Complex c) {
  if (static_cast<int>(e.size()) != arity_) {
    throw SpectralError(ErrorCode::ArityMismatch, "exponent length differs from arity");
  }
  if (std::any_of(e.begin(), e.end(), [](int k) { return k < 0; })) {
    throw SpectralError(ErrorCode::InvalidArgument, "negative exponent");
  }
  if (c == Complex(0.0)) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex(0.0)) terms_.erase(it);
  }
}

MultiPoly MultiPoly::pruned(double rel) const {
  const double cut = rel * max_abs_coefficient();
  MultiPoly out(arity_);
  for (const auto& [e, c] : terms_) {
    if (std::abs(c) > cut) out.terms_.emplace(e, c);
  }
  return out;
}

std::vector<Complex> MultiPoly::dense() const {
  if (arity_ != 1) throw SpectralError(ErrorCode::ArityMismatch, "dense() needs a univariate polynomial");
  std::vector<Complex> out(static_cast<std::size_t>(degree()) + 1, 0.0);
  for (const auto& [e, c] : terms_) out[static_cast<std::size_t>(e[0])] = c;
  return out;
}

MultiPoly MultiPoly::derivative(int var) const {
  if (var < 0 || var >= arity_) throw SpectralError(ErrorCode::ArityMismatch, "derivative variable out of range");
  MultiPoly out(arity_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent d = e;
    d[var] -= 1;
    out.add_term(d, c * static_cast<double>(e[var]));
  }
  return out;
}

void MultiPoly::require_same_arity(const MultiPoly& other) const {
  if (other.arity_ != arity_) throw SpectralError(ErrorCode::ArityMismatch, "polynomial arities differ");
}

MultiPoly MultiPoly::operator+(const MultiPoly& other) const {
  require_same_arity(other);
  MultiPoly out = *this;
  for (const auto& [e, c] : other.terms_) out.add_term(e, c);
  return out;
}

MultiPoly MultiPoly::operator-(const MultiPoly& other) const { return *this + other * Complex(-1.0); }

MultiPoly MultiPoly::operator*(const MultiPoly& other) const {
  require_same_arity(other);
  MultiPoly out(arity_);
  Exponent e(static_cast<std::size_t>(arity_));
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : other.terms_) {
      for (int j = 0; j < arity_; ++j) e[j] = ea[j] + eb[j];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

MultiPoly MultiPoly::operator*(Complex s) const {
  MultiPoly out(arity_);
  for (const auto& [e, c] : terms_) out.add_term(e, c * s);
  return out;
}

MultiPoly charpoly(const OperatorTuple& tuple, const CharpolyOptions& opts) {
  const auto n = static_cast<std::size_t>(tuple.arity());
  const auto dim = static_cast<int>(tuple.dim());
  const auto m = static_cast<std::size_t>(dim) + 1;

  std::size_t grid = 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (grid > opts.grid_cap / m) {
      throw SpectralError(ErrorCode::GridTooLarge, "(N+1)^n exceeds the configured grid cap");
    }
    grid *= m;
  }
  if (!(opts.radius > 0.0)) throw SpectralError(ErrorCode::InvalidArgument, "interpolation radius must be positive");

  std::vector<Complex> omega(m);
  for (std::size_t k = 0; k < m; ++k) {
    omega[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m));
  }

  // values[idx], idx = sum_j k_j m^j with variable 0 fastest.
  std::vector<Complex> values(grid);
  parallel_for(grid, [&](std::size_t idx) {
    std::vector<Complex> z(n);
    std::size_t rest = idx;
    for (std::size_t j = 0; j < n; ++j) {
      z[j] = opts.radius * omega[rest % m];
      rest /= m;
    }
    values[idx] = determinant(tuple.pencil(z));
  });

  // Inverse DFT along each axis: c_e r^{|e|} = m^{-n} sum_k p(r w^k) w^{-k.e}.
  std::vector<Complex> fiber(m);
  std::size_t stride = 1;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t base = 0; base < grid; ++base) {
      if ((base / stride) % m != 0) continue;
      for (std::size_t e = 0; e < m; ++e) {
        Complex s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s += values[base + k * stride] * std::conj(omega[(k * e) % m]);
        fiber[e] = s / static_cast<double>(m);
      }
      for (std::size_t e = 0; e < m; ++e) values[base + e * stride] = fiber[e];
    }
    stride *= m;
  }

  MultiPoly::Terms terms;
  MultiPoly::Exponent exp(n);
  for (std::size_t idx = 0; idx < grid; ++idx) {
    std::size_t rest = idx;
    int deg = 0;
    for (std::size_t j = 0; j < n; ++j) {
      exp[j] = static_cast<int>(rest % m);
      deg += exp[j];
      rest /= m;
    }
    if (deg > dim || deg == 0) continue;
    terms.emplace(exp, values[idx] / std::pow(opts.radius, deg));
  }
  terms[MultiPoly::Exponent(n, 0)] = 1.0;
  return MultiPoly(static_cast<int>(n), std::move(terms)).pruned(opts.prune);
}

Complex evaluate(const MultiPoly& p, std::span<const Complex> z) {
  if (static_cast<int>(z.size()) != p.arity()) {
    throw SpectralError(ErrorCode::ArityMismatch, "evaluation point arity differs from polynomial arity");
  }
  return horner(p.terms().begin(), p.terms().end(), 0, z);
}

Complex evaluate(const MultiPoly& p, const ComplexVector& z) {
  return evaluate(p, std::span<const Complex>(z.data(), static_cast<std::size_t>(z.size())));
}

double evaluate_majorant(const MultiPoly& p, const ComplexVector& z) {
  if (z.size() != p.arity()) throw SpectralError(ErrorCode::ArityMismatch, "evaluation point arity differs");
  double s = 0.0;
  for (const auto& [e, c] : p.terms()) {
    double t = std::abs(c);
    for (int j = 0; j < p.arity(); ++j) t *= std::pow(std::abs(z(j)), e[j]);
    s += t;
  }
  return s;
}

MultiPoly restrict_to_line(const MultiPoly& p, const ComplexVector& base, const ComplexVector& dir) {
  if (base.size() != p.arity() || dir.size() != p.arity()) {
    throw SpectralError(ErrorCode::ArityMismatch, "line arity differs from polynomial arity");
  }
  if (dir.cwiseAbs().maxCoeff() == 0.0) throw SpectralError(ErrorCode::InvalidArgument, "line direction is zero");

  const int d = p.degree();
  // powers[j][e] = ascending coefficients of (base_j + t dir_j)^e
  std::vector<std::vector<std::vector<Complex>>> powers(static_cast<std::size_t>(p.arity()));
  for (int j = 0; j < p.arity(); ++j) {
    auto& pj = powers[j];
    pj.push_back({1.0});
    for (int e = 1; e <= d; ++e) {
      const auto& prev = pj.back();
      std::vector<Complex> next(prev.size() + 1, 0.0);
      for (std::size_t i = 0; i < prev.size(); ++i) {
        next[i] += prev[i] * base(j);
        next[i + 1] += prev[i] * dir(j);
      }
      pj.push_back(std::move(next));
    }
  }

  std::vector<Complex> out(static_cast<std::size_t>(d) + 1, 0.0);
  std::vector<Complex> acc, tmp;
  for (const auto& [e, c] : p.terms()) {
    acc.assign(1, c);
    for (int j = 0; j < p.arity(); ++j) {
      if (e[j] == 0) continue;
      const auto& f = powers[j][e[j]];
      tmp.assign(acc.size() + f.size() - 1, 0.0);
      for (std::size_t a = 0; a < acc.size(); ++a)
        for (std::size_t b = 0; b < f.size(); ++b) tmp[a + b] += acc[a] * f[b];
      acc.swap(tmp);
    }
    for (std::size_t k = 0; k < acc.size(); ++k) out[k] += acc[k];
  }
  return MultiPoly::univariate(out);
}

int UnivariateRoots::count() const {
  int c = 0;
  for (const auto& r : roots) c += r.multiplicity;
  return c;
}

ComplexVector UnivariateRoots::flattened() const {
  ComplexVector v(count());
  Eigen::Index i = 0;
  for (const auto& r : roots)
    for (int k = 0; k < r.multiplicity; ++k) v(i++) = r.value;
  return v;
}

std::pair<MultiPoly, int> trim_leading(const MultiPoly& q, double degeneracy) {
  auto c = q.dense();
  const double cut = degeneracy * q.max_abs_coefficient();
  int dropped = 0;
  while (c.size() > 1 && std::abs(c.back()) <= cut) {
    c.pop_back();
    ++dropped;
  }
  return {MultiPoly::univariate(c), dropped};
}

UnivariateRoots roots(const MultiPoly& q, const RootOptions& opts) {
  const std::vector<Complex> c = q.dense();
  const int d = static_cast<int>(c.size()) - 1;
  if (d < 1) throw SpectralError(ErrorCode::InvalidArgument, "root finding needs degree >= 1");
  if (std::abs(c.back()) <= opts.degeneracy * q.max_abs_coefficient()) {
    throw SpectralError(ErrorCode::DegenerateLeadingCoefficient, "leading coefficient is negligible");
  }

  // Scale t = s*x so the monic coefficients are O(1).
  double s = 0.0;
  for (int k = 0; k < d; ++k) {
    s = std::max(s, std::pow(std::abs(c[k] / c[d]), 1.0 / (d - k)));
  }
  if (!(s > 0.0)) s = 1.0;

  ComplexMatrix companion = ComplexMatrix::Zero(d, d);
  companion.diagonal(-1).setOnes();
  for (int k = 0; k < d; ++k) {
    companion(k, d - 1) = -(c[k] / c[d]) / std::pow(s, d - k);
  }
  ComplexVector raw = eigenvalues(companion) * s;

  UnivariateRoots out;
  out.degree = d;
  const MultiPoly& poly = q;
  const MultiPoly deriv = q.derivative(0);
  auto value_at = [&](Complex t) { return evaluate(poly, std::span<const Complex>(&t, 1)); };
  auto deriv_at = [&](Complex t) { return evaluate(deriv, std::span<const Complex>(&t, 1)); };

  for (const auto& group : cluster_values(raw, opts.cluster, opts.cluster)) {
    Complex mean = 0.0;
    for (auto i : group) mean += raw(i);
    mean /= static_cast<double>(group.size());
    double res = std::abs(value_at(mean));
    if (group.size() == 1) {
      // Newton polish; keep only improving steps.
      for (int it = 0; it < 3; ++it) {
        const Complex dq = deriv_at(mean);
        if (dq == Complex(0.0)) break;
        const Complex next = mean - value_at(mean) / dq;
        const double next_res = std::abs(value_at(next));
        if (!(next_res < res)) break;
        mean = next;
        res = next_res;
      }
    }
    out.roots.push_back({mean, static_cast<int>(group.size()), res});
  }
  return out;
}

}  // namespace jointspec
