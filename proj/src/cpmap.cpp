#include "qmaps/cpmap.hpp"

#include <cmath>

#include "qmaps/kernel.hpp"

namespace qmaps {

ChoiMatrix choi_of(const MatrixMap& phi) {
  require(phi.shape().algebra(), Err::NotSquare, "choi_of needs a map between matrix algebras");
  const Index n = phi.shape().in_rows;
  const Index m = phi.shape().out_rows;
  CMatrix c(n * m, n * m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      c.block(i * m, j * m, m, m) = phi.apply(matrix_unit(n, n, i, j));
  return {n, m, std::move(c)};
}

MatrixMap map_from_choi(const ChoiMatrix& choi) {
  const Index n = choi.dim_in;
  const Index m = choi.dim_out;
  require(choi.matrix.rows() == n * m && choi.matrix.cols() == n * m, Err::DimensionMismatch,
          "Choi matrix size does not match its declared dimensions");
  CMatrix action(m * m, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      action.col(j * n + i) = vec(CMatrix(choi.matrix.block(i * m, j * m, m, m)));
  return MatrixMap::algebra_map(n, m, std::move(action));
}

KrausSet make_kraus(std::vector<CMatrix> operators) {
  require(!operators.empty(), Err::BadInput, "a Kraus set needs at least one operator");
  const Index m = operators.front().rows();
  const Index n = operators.front().cols();
  CMatrix gram(operators.size(), operators.size());
  for (std::size_t p = 0; p < operators.size(); ++p) {
    require(operators[p].rows() == m && operators[p].cols() == n, Err::DimensionMismatch,
            "Kraus operators must share one shape");
    require_finite(operators[p], "Kraus operator");
    for (std::size_t q = 0; q < operators.size(); ++q)
      gram(p, q) = (operators[p].adjoint() * operators[q]).trace();
  }
  // Linear independence of the operators = non-singular Gram matrix.
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  require(eig.eigenvalues()(0) > 1e-12 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff()),
          Err::BadInput, "Kraus operators must be linearly independent");
  return {n, m, std::move(operators)};
}

MatrixMap map_from_kraus(const KrausSet& kraus) {
  const Index n = kraus.dim_in;
  const Index m = kraus.dim_out;
  CMatrix action = CMatrix::Zero(m * m, n * n);
  for (const CMatrix& s : kraus.operators) action += kron(s.conjugate(), s);
  return MatrixMap::algebra_map(n, m, std::move(action));
}

bool is_completely_positive(const MatrixMap& phi, const Tolerance& tol) {
  const ChoiMatrix choi = choi_of(phi);
  require(is_hermitian(choi.matrix, scaled(tol.eq_eps, inf_norm(choi.matrix))),
          Err::NotHermitianChoi, "Choi matrix is not Hermitian");
  return is_psd(choi.matrix, tol);
}

double min_choi_eigenvalue(const MatrixMap& phi) {
  return min_hermitian_part_eigenvalue(choi_of(phi).matrix);
}

KrausSet kraus_decompose(const MatrixMap& phi, const Tolerance& tol) {
  const ChoiMatrix choi = choi_of(phi);
  const double norm = inf_norm(choi.matrix);
  require(is_hermitian(choi.matrix, scaled(tol.eq_eps, norm)), Err::NotHermitianChoi,
          "Choi matrix is not Hermitian");
  const HermitianEig eig = hermitian_eig(choi.matrix, tol);
  const double top = eig.eigenvalues.size() ? eig.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  require(eig.eigenvalues.size() == 0 || eig.eigenvalues(0) >= -scaled(tol.psd_eps, top),
          Err::NotCP, "map is not completely positive");

  const double cutoff = tol.psd_eps * std::max(1.0, choi.matrix.trace().real());
  std::vector<CMatrix> ops;
  for (Index i = eig.eigenvalues.size() - 1; i >= 0; --i) {
    const double w = eig.eigenvalues(i);
    if (w <= cutoff) break;  // descending pass; the rest is numerical zero
    ops.push_back(phase_normalized(
        CMatrix(std::sqrt(w) * unvec(eig.eigenvectors.col(i), choi.dim_out, choi.dim_in))));
  }
  require(!ops.empty(), Err::NotCP, "zero map has no Kraus decomposition");
  return {choi.dim_in, choi.dim_out, std::move(ops)};
}

MatrixMap amplification(const MatrixMap& phi, Index r) {
  require(phi.shape().algebra(), Err::NotSquare, "amplification needs an algebra map");
  const Index n = phi.shape().in_rows;
  const Index m = phi.shape().out_rows;
  const MapShape shape{r * n, r * n, r * m, r * m};
  return MatrixMap::from_function(shape, [&](const CMatrix& a) {
    CMatrix out(r * m, r * m);
    for (Index p = 0; p < r; ++p)
      for (Index q = 0; q < r; ++q)
        out.block(p * m, q * m, m, m) = phi.apply(a.block(p * n, q * n, n, n));
    return out;
  });
}

bool check_faf(const MatrixMap& phi, const CMatrix& e, const Tolerance& tol) {
  require(phi.shape().algebra(), Err::NotSquare, "check_faf needs an algebra map");
  const Index n = phi.shape().in_rows;
  require(e.rows() == n && e.cols() == n, Err::DimensionMismatch,
          "projection size does not match the map");
  const double e_norm = inf_norm(e);
  require(is_hermitian(e, scaled(tol.eq_eps, e_norm)) &&
              inf_norm(e * e - e) <= scaled(1e-7, e_norm),
          Err::NotProjection, "e must be a Hermitian projection");
  require(is_completely_positive(phi, tol), Err::NotCP, "check_faf needs a CP map");
  require(inf_norm(phi.apply(e)) <= scaled(tol.psd_eps, phi.norm()), Err::PhiEKilledViolated,
          "phi(e) must vanish");

  const CMatrix f = CMatrix::Identity(n, n) - e;
  const double bound = scaled(tol.psd_eps, phi.norm());
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const CMatrix unit = matrix_unit(n, n, i, j);
      if (inf_norm(phi.apply(unit) - phi.apply(f * unit * f)) > bound) return false;
    }
  return true;
}

}  // namespace qmaps
