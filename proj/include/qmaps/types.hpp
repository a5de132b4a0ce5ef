#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

#include "qmaps/error.hpp"

namespace qmaps {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

// psd_eps gates positivity decisions, eq_eps gates equality/symmetry checks.
// Both are applied relative to max(1, norm of the matrix at hand).
struct Tolerance {
  double psd_eps = 1e-9;
  double eq_eps = 1e-10;
};

// Largest singular value. Empty matrices have norm 0.
double op_norm(const CMatrix& a);

// Largest entry magnitude.
double inf_norm(const CMatrix& a);

bool all_finite(const CMatrix& a);
void require_finite(const CMatrix& a, const char* what);

bool is_hermitian(const CMatrix& a, double eps);

// e_ij of the given shape.
CMatrix matrix_unit(Index rows, Index cols, Index i, Index j);

CMatrix kron(const CMatrix& a, const CMatrix& b);

// Column stacking: entry (i,j) lands at index j*rows + i.
CVector vec(const CMatrix& a);
CMatrix unvec(const CVector& v, Index rows, Index cols);

// Rescale by a global phase so the largest-magnitude entry is positive real.
// Ties (within 1e-12 of the max) break toward the lowest column-major index.
CMatrix phase_normalized(const CMatrix& a);

inline double scaled(double eps, double norm) { return eps * std::max(1.0, norm); }

}  // namespace qmaps
