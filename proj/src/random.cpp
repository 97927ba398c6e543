#include "jointspec/random.hpp"

#include <cmath>
#include <numbers>

namespace jointspec {

Complex complex_gaussian(Rng& rng) {
  std::normal_distribution<double> g(0.0, std::numbers::sqrt2 / 2.0);
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

Complex uniform_disk(Rng& rng, double r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rho = r * std::sqrt(u(rng));
  const double theta = 2.0 * std::numbers::pi * u(rng);
  return std::polar(rho, theta);
}

ComplexVector random_vector(Eigen::Index n, Rng& rng) {
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_gaussian(rng);
  return v;
}

ComplexMatrix random_matrix(Eigen::Index n, Rng& rng) {
  ComplexMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = complex_gaussian(rng);
  return m;
}

ComplexMatrix random_hermitian(Eigen::Index n, Rng& rng) {
  const ComplexMatrix g = random_matrix(n, rng);
  return (g + g.adjoint()) / 2.0;
}

ComplexMatrix random_unitary(Eigen::Index n, Rng& rng) {
  const ComplexMatrix g = random_matrix(n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

ComplexMatrix random_normal(Eigen::Index n, Rng& rng) {
  const ComplexMatrix u = random_unitary(n, rng);
  return from_spectrum(u, random_vector(n, rng));
}

CommutingConstruction commuting_normal(Eigen::Index dim, Eigen::Index arity, Rng& rng,
                                       bool real_spectrum) {
  CommutingConstruction c;
  c.unitary = random_unitary(dim, rng);
  std::normal_distribution<double> g(0.0, 1.0);
  for (Eigen::Index j = 0; j < arity; ++j) {
    ComplexVector d(dim);
    for (Eigen::Index k = 0; k < dim; ++k) d(k) = real_spectrum ? Complex(g(rng), 0.0) : complex_gaussian(rng);
    c.matrices.push_back(from_spectrum(c.unitary, d));
    c.diagonals.push_back(std::move(d));
  }
  return c;
}

std::vector<ComplexMatrix> independent_normal(Eigen::Index dim, Eigen::Index arity, Rng& rng) {
  std::vector<ComplexMatrix> out;
  for (Eigen::Index j = 0; j < arity; ++j) out.push_back(random_normal(dim, rng));
  return out;
}

}  // namespace jointspec
