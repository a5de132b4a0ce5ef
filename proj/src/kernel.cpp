#include "qmaps/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

namespace qmaps {

namespace {

CVector fix_phase(const CVector& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      return v * (std::abs(v(i)) / v(i));
    }
  }
  return v;
}

// Lexicographic order on (re, im) pairs, used only to break exact eigenvalue ties.
bool lex_less(const CVector& a, const CVector& b) {
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

}  // namespace

HermitianEig hermitian_eig(const CMatrix& a, const Tolerance& tol) {
  require(a.rows() == a.cols(), Err::NotSquare, "hermitian_eig needs a square matrix");
  require_finite(a, "hermitian_eig input");
  const Index n = a.rows();
  if (n == 0) return {RVector(0), CMatrix(0, 0)};
  require(is_hermitian(a, scaled(tol.eq_eps, inf_norm(a))), Err::NotHermitian,
          "hermitian_eig needs a Hermitian matrix");

  Eigen::SelfAdjointEigenSolver<CMatrix> solver((a + a.adjoint()) / 2.0);
  require(solver.info() == Eigen::Success, Err::NotHermitian, "eigensolver failed to converge");

  std::vector<CVector> vecs(n);
  for (Index i = 0; i < n; ++i) vecs[i] = fix_phase(solver.eigenvectors().col(i));
  RVector vals = solver.eigenvalues();

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index p, Index q) {
    if (vals(p) != vals(q)) return vals(p) < vals(q);
    return lex_less(vecs[p], vecs[q]);
  });

  HermitianEig out{RVector(n), CMatrix(n, n)};
  for (Index i = 0; i < n; ++i) {
    out.eigenvalues(i) = vals(order[i]);
    out.eigenvectors.col(i) = vecs[order[i]];
  }
  return out;
}

double min_hermitian_part_eigenvalue(const CMatrix& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver((a + a.adjoint()) / 2.0,
                                                Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

bool is_psd(const CMatrix& a, const Tolerance& tol) {
  require(a.rows() == a.cols(), Err::NotSquare, "is_psd needs a square matrix");
  if (a.rows() == 0) return true;
  const double norm = inf_norm(a);
  require(is_hermitian(a, scaled(tol.eq_eps, norm)), Err::NotHermitian,
          "is_psd needs a Hermitian matrix");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver((a + a.adjoint()) / 2.0,
                                                Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0) >= -scaled(tol.psd_eps, solver.eigenvalues().cwiseAbs().maxCoeff());
}

CMatrix polar_unitary(const CMatrix& a, const Tolerance& tol) {
  require(a.rows() == a.cols(), Err::NotSquare, "polar_unitary needs a square matrix");
  if (a.rows() == 0) return CMatrix(0, 0);
  require_finite(a, "polar_unitary input");
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  require(s(s.size() - 1) > scaled(tol.eq_eps, s(0)), Err::Singular,
          "polar_unitary needs an invertible matrix");
  return svd.matrixU() * svd.matrixV().adjoint();
}

CMatrix ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  return g;
}

CMatrix random_unitary(Index n, Rng& rng) {
  if (n == 0) return CMatrix(0, 0);
  const CMatrix g = ginibre(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    q.col(i) *= (std::abs(d) > 0 ? d / std::abs(d) : 1.0);
  }
  return q;
}

CMatrix random_unitary(Index n, std::uint64_t seed) {
  Rng rng(seed);
  return random_unitary(n, rng);
}

CMatrix random_unitary_commuting_with(const CMatrix& omega, Rng& rng, const Tolerance& tol) {
  require(omega.rows() == omega.cols(), Err::NotSquare, "need a square diagonal matrix");
  const Index n = omega.rows();
  if (n == 0) return CMatrix(0, 0);
  const double norm = inf_norm(omega);
  CMatrix off = omega;
  off.diagonal().setZero();
  require(inf_norm(off) <= scaled(tol.eq_eps, norm), Err::NotDiagonal,
          "need a diagonal matrix");
  for (Index i = 0; i < n; ++i) {
    require(std::abs(omega(i, i).imag()) <= scaled(tol.eq_eps, norm) && omega(i, i).real() > 0,
            Err::NotFaithfulState, "diagonal entries must be strictly positive");
  }

  // Group indices carrying (numerically) the same diagonal value. Groups need
  // not be contiguous; a Haar block is drawn per group and scattered back.
  std::vector<std::vector<Index>> groups;
  std::vector<double> values;
  for (Index i = 0; i < n; ++i) {
    const double x = omega(i, i).real();
    bool placed = false;
    for (std::size_t g = 0; g < values.size(); ++g) {
      if (std::abs(values[g] - x) <= 1e-8) {
        groups[g].push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) {
      values.push_back(x);
      groups.push_back({i});
    }
  }

  CMatrix u = CMatrix::Zero(n, n);
  for (const auto& group : groups) {
    const Index s = static_cast<Index>(group.size());
    const CMatrix block = random_unitary(s, rng);
    for (Index i = 0; i < s; ++i)
      for (Index j = 0; j < s; ++j) u(group[i], group[j]) = block(i, j);
  }
  return u;
}

CMatrix random_unitary_commuting_with(const CMatrix& omega, std::uint64_t seed,
                                      const Tolerance& tol) {
  Rng rng(seed);
  return random_unitary_commuting_with(omega, rng, tol);
}

CMatrix random_contraction(Index rows, Index cols, Rng& rng) {
  if (rows == 0 || cols == 0) return CMatrix(rows, cols);
  const CMatrix g = ginibre(rows, cols, rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double scale = 1.0 - unit(rng);  // in (0, 1]
  const double top = op_norm(g);
  return top > 0 ? CMatrix(g * (scale / top)) : g;
}

CMatrix random_contraction(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  return random_contraction(rows, cols, rng);
}

}  // namespace qmaps
