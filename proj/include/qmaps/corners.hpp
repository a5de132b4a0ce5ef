#pragma once

#include <optional>

#include "qmaps/cpmap.hpp"
#include "qmaps/rankone.hpp"

namespace qmaps {

// A 2x2 block map on M_{n+n'}: phi and psi act on the diagonal corners, gamma
// on the upper-right n x n' block, and the lower-left block is forced to be
// the conjugate map of gamma so the whole thing preserves Hermiticity.
struct BlockMap {
  Index n = 0;
  Index nprime = 0;
  MatrixMap phi;    // M_n -> M_n
  MatrixMap psi;    // M_n' -> M_n'
  MatrixMap gamma;  // n x n' block -> n x n' block

  static BlockMap assemble(MatrixMap phi, MatrixMap psi, MatrixMap gamma);

  // The assembled endomorphism of M_{n+n'}.
  MatrixMap to_map() const;
};

// gamma is a corner from phi to psi when the assembled block map is CP.
bool is_corner(const MatrixMap& gamma, const MatrixMap& phi, const MatrixMap& psi,
               const Tolerance& tol = {});

// Builds the block-coupling map B -> sum_ij c_ij S_i B T_j* from Kraus sets of
// phi and psi and a coefficient matrix with ||C|| <= 1; always a corner.
MatrixMap corner_from_contraction(const KrausSet& s_ops, const KrausSet& t_ops, const CMatrix& c,
                                  const Tolerance& tol = {});

// For sigma a nonzero idempotent map on M_k and rho a faithful diagonal state:
// decides whether sigma has the form sigma(B) = tr(X* B Omega) X with X a
// unitary commuting with Omega, and returns that X (global phase fixed by
// phase_normalized). Exactly these maps are the norm-one idempotent corners
// from the rank-one unital map of rho to itself.
std::optional<CMatrix> classify_idempotent_corner(const MatrixMap& sigma, const State& rho,
                                                  const Tolerance& tol = {});

// Limit of t gamma (1 + t gamma)^{-1}: the idempotent with the same range and
// kernel as gamma. Works on rectangular block spaces.
MatrixMap sigma_limit(const MatrixMap& gamma, const Tolerance& tol = {});

}  // namespace qmaps
