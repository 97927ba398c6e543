#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "jointspec/matrix_core.hpp"

namespace jointspec {

using Rng = std::mt19937_64;

// Seeded generators for the test corpus and the CLI `generate` command.

Complex complex_gaussian(Rng& rng);
/// Uniform in the disk of radius r.
Complex uniform_disk(Rng& rng, double r);
ComplexVector random_vector(Eigen::Index n, Rng& rng);
ComplexMatrix random_matrix(Eigen::Index n, Rng& rng);
ComplexMatrix random_hermitian(Eigen::Index n, Rng& rng);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
ComplexMatrix random_unitary(Eigen::Index n, Rng& rng);
/// U diag(d) U* with Haar U and Gaussian complex d.
ComplexMatrix random_normal(Eigen::Index n, Rng& rng);

/// A_j = U diag(lambda_j) U* for one shared Haar unitary U.
struct CommutingConstruction {
  ComplexMatrix unitary;
  std::vector<ComplexVector> diagonals;  // diagonals[j](k) = lambda_{jk}
  std::vector<ComplexMatrix> matrices;
};

/// `real_spectrum` draws real diagonals so every member is Hermitian.
CommutingConstruction commuting_normal(Eigen::Index dim, Eigen::Index arity, Rng& rng,
                                       bool real_spectrum = false);

/// Normal members built from independent Haar unitaries (generically non-commuting).
std::vector<ComplexMatrix> independent_normal(Eigen::Index dim, Eigen::Index arity, Rng& rng);

}  // namespace jointspec
