#pragma once

#include <vector>

#include "qmaps/map.hpp"

namespace qmaps {

// Choi matrix of a map M_n -> M_m: the (nm x nm) block matrix whose (i,j)
// block of size m x m is the image of the matrix unit e_ij. The map is
// completely positive exactly when this matrix is positive semidefinite.
struct ChoiMatrix {
  Index dim_in = 0;
  Index dim_out = 0;
  CMatrix matrix;
};

// Kraus decomposition phi(A) = sum_i S_i A S_i*. Operators are dim_out x
// dim_in, mutually orthogonal under the trace inner product, ordered by
// descending weight, each phase-fixed (largest entry positive real).
struct KrausSet {
  Index dim_in = 0;
  Index dim_out = 0;
  std::vector<CMatrix> operators;
};

ChoiMatrix choi_of(const MatrixMap& phi);
MatrixMap map_from_choi(const ChoiMatrix& choi);
MatrixMap map_from_kraus(const KrausSet& kraus);
KrausSet make_kraus(std::vector<CMatrix> operators);

bool is_completely_positive(const MatrixMap& phi, const Tolerance& tol = {});

// Minimum eigenvalue of the Hermitian part of the Choi matrix. This is the
// quantity the q-positivity grid scans look at.
double min_choi_eigenvalue(const MatrixMap& phi);

KrausSet kraus_decompose(const MatrixMap& phi, const Tolerance& tol = {});

// The blockwise extension of phi to r x r block matrices (id tensor phi).
MatrixMap amplification(const MatrixMap& phi, Index r);

// Checks the compression identity for a map annihilating a projection e:
// with f = 1 - e, phi(A) must equal phi(fAf) on a spanning set.
bool check_faf(const MatrixMap& phi, const CMatrix& e, const Tolerance& tol = {});

}  // namespace qmaps
