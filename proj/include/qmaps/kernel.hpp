#pragma once

#include <cstdint>
#include <random>

#include "qmaps/types.hpp"

namespace qmaps {

struct HermitianEig {
  RVector eigenvalues;   // ascending
  CMatrix eigenvectors;  // column i pairs with eigenvalues(i)
};

// Eigendecomposition of a Hermitian matrix. Eigenvalues come back ascending;
// each eigenvector is phase-fixed (first non-negligible component positive
// real) and ties between equal eigenvalues are broken by lexicographic order
// of the phase-fixed eigenvectors, so the output is deterministic.
HermitianEig hermitian_eig(const CMatrix& a, const Tolerance& tol = {});

// Minimum eigenvalue of the Hermitian part (a + a*)/2. No symmetry check.
double min_hermitian_part_eigenvalue(const CMatrix& a);

bool is_psd(const CMatrix& a, const Tolerance& tol = {});

// Unitary factor W of the polar decomposition a = W * p, p = (a* a)^{1/2}.
// Requires a square and invertible.
CMatrix polar_unitary(const CMatrix& a, const Tolerance& tol = {});

using Rng = std::mt19937_64;

// Entries are independent complex Gaussians (mean 0, unit variance).
CMatrix ginibre(Index rows, Index cols, Rng& rng);

// Haar-distributed unitary via QR with the standard phase correction.
CMatrix random_unitary(Index n, Rng& rng);
CMatrix random_unitary(Index n, std::uint64_t seed);

// Random unitary commuting with a positive-definite diagonal matrix: one Haar
// block per group of (approximately) equal diagonal values. Diagonal entries
// within 1e-8 of each other count as equal.
CMatrix random_unitary_commuting_with(const CMatrix& omega, Rng& rng, const Tolerance& tol = {});
CMatrix random_unitary_commuting_with(const CMatrix& omega, std::uint64_t seed,
                                      const Tolerance& tol = {});

// Random rows x cols matrix with operator norm <= 1 (a uniform scale in (0,1]
// applied after normalizing the largest singular value).
CMatrix random_contraction(Index rows, Index cols, Rng& rng);
CMatrix random_contraction(Index rows, Index cols, std::uint64_t seed);

}  // namespace qmaps
