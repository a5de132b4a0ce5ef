#include "qmaps/corners.hpp"

#include <cmath>

#include "qmaps/kernel.hpp"
#include "qmaps/qpositivity.hpp"

namespace qmaps {

BlockMap BlockMap::assemble(MatrixMap phi, MatrixMap psi, MatrixMap gamma) {
  require(phi.shape().endo() && phi.shape().algebra(), Err::NotSquare,
          "phi must act on a matrix algebra");
  require(psi.shape().endo() && psi.shape().algebra(), Err::NotSquare,
          "psi must act on a matrix algebra");
  const Index n = phi.shape().in_rows;
  const Index np = psi.shape().in_rows;
  require(gamma.shape() == MapShape{n, np, n, np}, Err::DimensionMismatch,
          "gamma must act on the n x n' block");
  return {n, np, std::move(phi), std::move(psi), std::move(gamma)};
}

MatrixMap BlockMap::to_map() const {
  const Index total = n + nprime;
  const MatrixMap gamma_star = gamma.conjugate_transpose_map();
  return MatrixMap::from_function({total, total, total, total}, [&](const CMatrix& u) {
    CMatrix out = CMatrix::Zero(total, total);
    out.topLeftCorner(n, n) = phi.apply(u.topLeftCorner(n, n));
    out.topRightCorner(n, nprime) = gamma.apply(u.topRightCorner(n, nprime));
    out.bottomLeftCorner(nprime, n) = gamma_star.apply(u.bottomLeftCorner(nprime, n));
    out.bottomRightCorner(nprime, nprime) = psi.apply(u.bottomRightCorner(nprime, nprime));
    return out;
  });
}

bool is_corner(const MatrixMap& gamma, const MatrixMap& phi, const MatrixMap& psi,
               const Tolerance& tol) {
  require(is_completely_positive(phi, tol) && is_completely_positive(psi, tol),
          Err::NotCPDiagonal, "diagonal blocks must be completely positive");
  return is_completely_positive(BlockMap::assemble(phi, psi, gamma).to_map(), tol);
}

MatrixMap corner_from_contraction(const KrausSet& s_ops, const KrausSet& t_ops, const CMatrix& c,
                                  const Tolerance& tol) {
  require(c.rows() == static_cast<Index>(s_ops.operators.size()) &&
              c.cols() == static_cast<Index>(t_ops.operators.size()),
          Err::DimensionMismatch, "coefficient matrix must pair the two Kraus sets");
  require_finite(c, "coefficient matrix");
  require(op_norm(c) <= 1.0 + tol.eq_eps, Err::ContractionNormExceeded,
          "coefficient matrix must be a contraction");
  require(s_ops.dim_out == s_ops.dim_in && t_ops.dim_out == t_ops.dim_in,
          Err::NotSquare, "corner construction expects endomorphism Kraus sets");
  const Index n = s_ops.dim_in;
  const Index np = t_ops.dim_in;
  return MatrixMap::from_function({n, np, n, np}, [&](const CMatrix& b) {
    CMatrix out = CMatrix::Zero(n, np);
    for (Index i = 0; i < c.rows(); ++i)
      for (Index j = 0; j < c.cols(); ++j)
        out += c(i, j) * s_ops.operators[i] * b * t_ops.operators[j].adjoint();
    return out;
  });
}

std::optional<CMatrix> classify_idempotent_corner(const MatrixMap& sigma, const State& rho,
                                                  const Tolerance& tol) {
  require(sigma.shape().endo() && sigma.shape().algebra(), Err::NotSquare,
          "classification works on maps of a matrix algebra");
  const Index k = sigma.shape().in_rows;
  require(rho.dim() == k, Err::DimensionMismatch, "state dimension must match the map");
  require(rho.is_diagonal() && rho.is_faithful(tol), Err::NotFaithfulState,
          "classification needs a faithful diagonal state");
  const double norm = sigma.norm();
  if (norm <= tol.psd_eps) return std::nullopt;  // zero map is not of this form
  require(sigma.compose(sigma).distance(sigma) <= 1e-7 * std::max(1.0, norm),
          Err::NotIdempotent, "sigma must be idempotent");

  // A map of the wanted form is rank one as an operator on M_k, so the action
  // matrix must factor as vec(X0) w*.
  Eigen::JacobiSVD<CMatrix> svd(sigma.action(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s.size() > 1 && s(1) > 1e-8 * s(0)) return std::nullopt;

  const CMatrix omega = rho.density();
  CMatrix x = unvec(svd.matrixU().col(0), k, k);
  // Normalize the scale so tr(X* X Omega) = 1, matching the functional
  // normalization tau(X) = 1; a unitary X satisfies it automatically.
  const double weight = (x.adjoint() * x * omega).trace().real();
  if (weight <= 0) return std::nullopt;
  x /= std::sqrt(weight);
  x = phase_normalized(x);

  const CMatrix id = CMatrix::Identity(k, k);
  if (inf_norm(x.adjoint() * x - id) > 1e-7) return std::nullopt;
  if (inf_norm(x * omega - omega * x) > 1e-7) return std::nullopt;

  // Rebuild tau(.) X from the candidate and insist it reproduces sigma.
  const CMatrix rebuilt = vec(x) * vec(CMatrix(x * omega)).adjoint();
  if (op_norm(rebuilt - sigma.action()) > 1e-7 * std::max(1.0, norm)) return std::nullopt;
  return x;
}

MatrixMap sigma_limit(const MatrixMap& gamma, const Tolerance& tol) {
  require(has_no_negative_eigenvalues(gamma, tol), Err::NotNonNegativeSpectrum,
          "action matrix has an eigenvalue on the negative real axis");
  const MatrixMap sigma = spectral_limit_idempotent(gamma, tol);

  const double scale = std::max(1.0, std::max(sigma.norm(), gamma.norm()));
  require(sigma.compose(sigma).distance(sigma) <= 1e-6 * scale, Err::LimitDiverged,
          "limit is not idempotent");
  require(gamma.compose(sigma).distance(gamma) <= 1e-6 * scale &&
              sigma.compose(gamma).distance(gamma) <= 1e-6 * scale,
          Err::LimitDiverged, "limit does not fix gamma");
  return sigma;
}

}  // namespace qmaps
