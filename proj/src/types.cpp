#include "qmaps/types.hpp"

#include <cmath>

namespace qmaps {

const char* to_string(Err code) {
  switch (code) {
    case Err::NotSquare: return "NotSquare";
    case Err::NotHermitian: return "NotHermitian";
    case Err::NotDiagonal: return "NotDiagonal";
    case Err::NotUnitary: return "NotUnitary";
    case Err::NotProjection: return "NotProjection";
    case Err::NotFiniteEntries: return "NotFiniteEntries";
    case Err::Singular: return "Singular";
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::NotHermitianChoi: return "NotHermitianChoi";
    case Err::NotCP: return "NotCP";
    case Err::NotCPDiagonal: return "NotCPDiagonal";
    case Err::ResolventSingular: return "ResolventSingular";
    case Err::NotNonNegativeSpectrum: return "NotNonNegativeSpectrum";
    case Err::LimitDiverged: return "LimitDiverged";
    case Err::NotAState: return "NotAState";
    case Err::NotFaithfulState: return "NotFaithfulState";
    case Err::NotIdempotent: return "NotIdempotent";
    case Err::ContractionNormExceeded: return "ContractionNormExceeded";
    case Err::PhiEKilledViolated: return "PhiEKilledViolated";
    case Err::InvalidParams: return "InvalidParams";
    case Err::NotRankOneUnital: return "NotRankOneUnital";
    case Err::TemplateMismatch: return "TemplateMismatch";
    case Err::NotAQCorner: return "NotAQCorner";
    case Err::BadInput: return "BadInput";
  }
  return "UnknownError";
}

double op_norm(const CMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  return a.jacobiSvd().singularValues()(0);
}

double inf_norm(const CMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

bool all_finite(const CMatrix& a) {
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
  return true;
}

void require_finite(const CMatrix& a, const char* what) {
  require(all_finite(a), Err::NotFiniteEntries, std::string(what) + " has a non-finite entry");
}

bool is_hermitian(const CMatrix& a, double eps) {
  if (a.rows() != a.cols()) return false;
  if (a.rows() == 0) return true;
  return inf_norm(a - a.adjoint()) <= eps;
}

CMatrix matrix_unit(Index rows, Index cols, Index i, Index j) {
  CMatrix e = CMatrix::Zero(rows, cols);
  e(i, j) = 1.0;
  return e;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector vec(const CMatrix& a) {
  return Eigen::Map<const CVector>(a.data(), a.size());
}

CMatrix unvec(const CVector& v, Index rows, Index cols) {
  require(v.size() == rows * cols, Err::DimensionMismatch, "unvec size mismatch");
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

CMatrix phase_normalized(const CMatrix& a) {
  const double top = inf_norm(a);
  if (top == 0.0) return a;
  Index best = -1;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (best < 0 && std::abs(a(i, j)) >= top * (1.0 - 1e-12)) best = j * a.rows() + i;
  const Complex pivot = a(best % a.rows(), best / a.rows());
  return a * (std::abs(pivot) / pivot);
}

}  // namespace qmaps
