#include "qmaps/rankone.hpp"

#include <cmath>
#include <numeric>

#include "qmaps/kernel.hpp"

namespace qmaps {

State::State(CMatrix density, const Tolerance& tol) : density_(std::move(density)) {
  require(density_.rows() == density_.cols() && density_.rows() > 0, Err::NotAState,
          "a state needs a nonempty square density matrix");
  require_finite(density_, "density matrix");
  require(is_hermitian(density_, scaled(tol.eq_eps, inf_norm(density_))), Err::NotAState,
          "density matrix must be Hermitian");
  require(is_psd(density_, tol), Err::NotAState, "density matrix must be positive semidefinite");
  require(std::abs(density_.trace().real() - 1.0) <= 1e-10 &&
              std::abs(density_.trace().imag()) <= 1e-10,
          Err::NotAState, "density matrix must have unit trace");
}

Complex State::value(const CMatrix& a) const {
  require(a.rows() == dim() && a.cols() == dim(), Err::DimensionMismatch,
          "state applied to a matrix of the wrong size");
  return (a * density_).trace();
}

bool State::is_diagonal(double eps) const {
  CMatrix off = density_;
  off.diagonal().setZero();
  return inf_norm(off) <= eps;
}

bool State::is_faithful(const Tolerance& tol) const {
  const HermitianEig eig = hermitian_eig(density_, tol);
  return eig.eigenvalues(0) > tol.psd_eps;
}

double EigenvalueList::sum() const {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

EigenvalueList eigenvalue_list(const State& rho, const Tolerance& tol) {
  const HermitianEig eig = hermitian_eig(rho.density(), tol);
  const double top = eig.eigenvalues(eig.eigenvalues.size() - 1);
  EigenvalueList list;
  for (Index i = eig.eigenvalues.size() - 1; i >= 0; --i) {
    const double v = eig.eigenvalues(i);
    if (v <= tol.psd_eps * top) break;  // descending; the tail is numerically zero
    list.values.push_back(v);
  }
  require(std::abs(list.sum() - 1.0) <= 1e-9, Err::NotAState,
          "surviving eigenvalues must sum to one");
  return list;
}

bool lists_equal(const EigenvalueList& a, const EigenvalueList& b, double tol) {
  if (a.k() != b.k()) return false;
  for (Index i = 0; i < a.k(); ++i)
    if (std::abs(a.values[i] - b.values[i]) > tol) return false;
  return true;
}

CMatrix diagonalizing_unitary(const State& rho, const Tolerance& tol) {
  const HermitianEig eig = hermitian_eig(rho.density(), tol);
  const Index n = rho.dim();
  CMatrix u(n, n);
  for (Index i = 0; i < n; ++i) u.col(i) = eig.eigenvectors.col(n - 1 - i);
  return u;
}

RankOneMap::RankOneMap(Index dim, State state) : dim_(dim), state_(std::move(state)) {
  require(dim_ == state_.dim(), Err::DimensionMismatch,
          "state dimension must match the algebra");
}

MatrixMap RankOneMap::as_map() const {
  const CMatrix id = CMatrix::Identity(dim_, dim_);
  return MatrixMap::from_function({dim_, dim_, dim_, dim_}, [&](const CMatrix& a) -> CMatrix {
    return state_.value(a) * id;
  });
}

std::optional<RankOneMap> RankOneMap::from_map(const MatrixMap& phi, const Tolerance& tol) {
  if (!phi.shape().endo() || !phi.shape().algebra()) return std::nullopt;
  const Index n = phi.shape().in_rows;
  if (n == 0) return std::nullopt;
  // phi(e_ij) = omega_ji * 1 forces the candidate state entry by entry.
  CMatrix omega(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const CMatrix img = phi.apply(matrix_unit(n, n, i, j));
      omega(j, i) = img.trace() / static_cast<double>(n);
    }
  try {
    State rho{(omega + omega.adjoint()) / 2.0, tol};
    RankOneMap candidate(n, rho);
    if (candidate.as_map().distance(phi) > scaled(1e-8, phi.norm())) return std::nullopt;
    return candidate;
  } catch (const Error&) {
    return std::nullopt;
  }
}

RankOneMap rank_one_from_list(const EigenvalueList& list, Index n) {
  require(list.k() >= 1 && list.k() <= n, Err::BadInput,
          "list length must fit inside the algebra dimension");
  CMatrix omega = CMatrix::Zero(n, n);
  for (Index i = 0; i < list.k(); ++i) omega(i, i) = list.values[i];
  return RankOneMap(n, State(omega));
}

MatrixMap conjugate_map(const MatrixMap& phi, const CMatrix& u, const Tolerance& tol) {
  require(phi.shape().endo() && phi.shape().algebra(), Err::NotSquare,
          "conjugation needs a map on one matrix algebra");
  const Index n = phi.shape().in_rows;
  require(u.rows() == n && u.cols() == n, Err::DimensionMismatch, "unitary size mismatch");
  require(inf_norm(u.adjoint() * u - CMatrix::Identity(n, n)) <= scaled(1e-10, 1.0),
          Err::NotUnitary, "conjugation needs a unitary");
  (void)tol;
  return MatrixMap::from_function(phi.shape(), [&](const CMatrix& a) -> CMatrix {
    return u.adjoint() * phi.apply(u * a * u.adjoint()) * u;
  });
}

bool are_conjugate(const RankOneMap& phi, const RankOneMap& psi, double tol) {
  if (phi.dim() != psi.dim()) return false;
  return lists_equal(eigenvalue_list(phi.state()), eigenvalue_list(psi.state()), tol);
}

bool is_q_pure(const RankOneMap& phi, const Tolerance& tol) {
  return eigenvalue_list(phi.state(), tol).k() == phi.dim();
}

}  // namespace qmaps
