#pragma once

#include <map>
#include <vector>

#include "jointspec/matrix_core.hpp"

namespace jointspec {

/// Sparse multivariate polynomial with complex coefficients.
///
/// Terms are keyed by exponent vector and kept in lexicographic order, which
/// is also the serialization order. Exact zeros are never stored.
class MultiPoly {
 public:
  using Exponent = std::vector<int>;
  using Terms = std::map<Exponent, Complex>;

  explicit MultiPoly(int arity);
  MultiPoly(int arity, Terms terms);

  static MultiPoly constant(int arity, Complex c);
  /// 1 + a_1 z_1 + ... + a_n z_n.
  static MultiPoly affine(const ComplexVector& a);
  /// Univariate polynomial from ascending coefficients.
  static MultiPoly univariate(const std::vector<Complex>& coeffs);

  int arity() const { return arity_; }
  int degree() const;
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  Complex coefficient(const Exponent& e) const;
  double max_abs_coefficient() const;

  /// Adds c to the coefficient of z^e, dropping the term if it cancels exactly.
  void add_term(const Exponent& e, Complex c);

  /// Drops terms with |c| <= rel * max|c|.
  MultiPoly pruned(double rel) const;

  /// Dense ascending coefficients of a univariate polynomial.
  std::vector<Complex> dense() const;

  /// Exact partial derivative with respect to variable `var`.
  MultiPoly derivative(int var) const;

  MultiPoly operator+(const MultiPoly& other) const;
  MultiPoly operator-(const MultiPoly& other) const;
  MultiPoly operator*(const MultiPoly& other) const;
  MultiPoly operator*(Complex s) const;

 private:
  void require_same_arity(const MultiPoly& other) const;

  int arity_;
  Terms terms_;
};

struct CharpolyOptions {
  double radius = 1.0;            // interpolation circle radius per variable
  double prune = 1e-10;           // relative coefficient prune threshold
  std::size_t grid_cap = 1000000; // maximum (N+1)^n determinant evaluations
};

/// det(I + z_1 A_1 + ... + z_n A_n) by interpolation on a tensor grid of
/// scaled (N+1)-st roots of unity, inverted axis by axis with the DFT.
MultiPoly charpoly(const OperatorTuple& tuple, const CharpolyOptions& opts = {});

/// Nested Horner evaluation.
Complex evaluate(const MultiPoly& p, std::span<const Complex> z);
Complex evaluate(const MultiPoly& p, const ComplexVector& z);

/// sum |c_e| |z^e|: the natural scale for rounding error in evaluate().
double evaluate_majorant(const MultiPoly& p, const ComplexVector& z);

/// q(t) = p(base + t dir) as a univariate polynomial.
MultiPoly restrict_to_line(const MultiPoly& p, const ComplexVector& base, const ComplexVector& dir);

struct Root {
  Complex value;
  int multiplicity = 1;
  double residual = 0.0;  // |q(value)|
};

struct UnivariateRoots {
  std::vector<Root> roots;
  int degree = 0;

  int count() const;
  /// Roots repeated by multiplicity.
  ComplexVector flattened() const;
};

struct RootOptions {
  double degeneracy = 1e-10;  // |leading| must exceed degeneracy * max|c|
  double cluster = 1e-6;      // roots within cluster*(1+|r|) are merged
};

/// Roots as eigenvalues of the (scaled) companion matrix.
/// Throws DegenerateLeadingCoefficient when the leading term is negligible.
UnivariateRoots roots(const MultiPoly& q, const RootOptions& opts = {});

/// Drops negligible leading coefficients of a univariate polynomial; returns
/// the trimmed polynomial and how many degrees were dropped (roots at infinity).
std::pair<MultiPoly, int> trim_leading(const MultiPoly& q, double degeneracy = 1e-10);

}  // namespace jointspec
