#include "qmaps/qpositivity.hpp"

#include <cmath>
#include <functional>

#include "qmaps/kernel.hpp"

namespace qmaps {

std::vector<double> t_grid(int count, double t_min, double t_max) {
  require(count >= 2 && t_min > 0 && t_max > t_min, Err::BadInput, "bad grid parameters");
  std::vector<double> grid;
  grid.reserve(count + 1);
  grid.push_back(0.0);
  const double lo = std::log10(t_min);
  const double hi = std::log10(t_max);
  for (int i = 0; i < count; ++i)
    grid.push_back(std::pow(10.0, lo + (hi - lo) * i / (count - 1)));
  return grid;
}

std::vector<double> default_t_grid() { return t_grid(50, 1e-3, 1e4); }

std::vector<double> witness_t_grid() {
  std::vector<double> grid = default_t_grid();
  grid.push_back(1e5);
  grid.push_back(1e6);
  return grid;
}

MatrixMap resolvent(const MatrixMap& phi, double t) {
  require(phi.shape().endo(), Err::DimensionMismatch,
          "resolvent needs an endomorphism of one matrix space");
  require(t >= 0 && std::isfinite(t), Err::BadInput, "resolvent needs t >= 0");
  const CMatrix& m = phi.action();
  const Index d = m.rows();
  const CMatrix a = CMatrix::Identity(d, d) + t * m;
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& s = svd.singularValues();
  require(d == 0 || s(d - 1) > s(0) / 1e12, Err::ResolventSingular,
          "1 + t phi is numerically singular");
  return MatrixMap(phi.shape(), CMatrix(a.partialPivLu().solve(m)));
}

bool has_no_negative_eigenvalues(const MatrixMap& phi, const Tolerance& tol) {
  require(phi.shape().endo(), Err::DimensionMismatch,
          "spectrum check needs an endomorphism of one matrix space");
  if (phi.action().rows() == 0) return true;
  Eigen::ComplexEigenSolver<CMatrix> eig(phi.action(), false);
  const double radius = eig.eigenvalues().cwiseAbs().maxCoeff();
  const double eps = scaled(tol.eq_eps, radius);
  for (Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const Complex z = eig.eigenvalues()(i);
    if (z.real() < -eps && std::abs(z.imag()) <= eps * std::abs(z.real())) return false;
  }
  return true;
}

namespace detail {

std::vector<double> scan_grid(std::span<const double> grid,
                              const std::function<double(double)>& eval, Exec exec) {
  std::vector<double> out(grid.size(), 0.0);
  std::vector<std::exception_ptr> errors(grid.size());
  const auto run_one = [&](std::size_t i) {
    try {
      out[i] = eval(grid[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(grid.size()); ++i)
      run_one(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) run_one(i);
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
  return out;
}

std::vector<double> scan_resolvent_choi(const MatrixMap& phi, const MatrixMap* psi,
                                        std::span<const double> grid, Exec exec) {
  return scan_grid(
      grid,
      [&](double t) -> double {
        MatrixMap r = [&] {
          try {
            return psi ? resolvent(phi, t) - resolvent(*psi, t) : resolvent(phi, t);
          } catch (const Error& e) {
            if (e.code() == Err::ResolventSingular) return MatrixMap();
            throw;
          }
        }();
        if (r.action().size() == 0) return kPoleValue;
        return min_choi_eigenvalue(r);
      },
      exec);
}

QPositivityReport report_from_scan(std::span<const double> grid,
                                   const std::vector<double>& values, double threshold) {
  QPositivityReport report;
  report.grid.assign(grid.begin(), grid.end());
  report.verdict = true;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < -threshold) {
      report.verdict = false;
      report.failing_t = grid[i];
      report.min_choi_eig_at_failure = values[i];
      break;
    }
  }
  return report;
}

}  // namespace detail

QPositivityReport is_q_positive(const MatrixMap& phi, std::span<const double> grid,
                                const Tolerance& tol, Exec exec) {
  require(phi.shape().endo() && phi.shape().algebra(), Err::NotSquare,
          "q-positivity is a property of maps on a matrix algebra");
  require(has_no_negative_eigenvalues(phi, tol), Err::NotNonNegativeSpectrum,
          "action matrix has an eigenvalue on the negative real axis");
  const ChoiMatrix choi = choi_of(phi);
  require(is_hermitian(choi.matrix, scaled(tol.eq_eps, inf_norm(choi.matrix))),
          Err::NotHermitianChoi, "map is not Hermiticity-preserving");
  const auto values = detail::scan_resolvent_choi(phi, nullptr, grid, exec);
  return detail::report_from_scan(grid, values, scaled(tol.psd_eps, phi.norm()));
}

QPositivityReport q_dominates(const MatrixMap& phi, const MatrixMap& psi,
                              std::span<const double> grid, const Tolerance& tol, Exec exec) {
  require(phi.shape() == psi.shape(), Err::DimensionMismatch,
          "q-dominance compares maps of one shape");
  require(phi.shape().endo() && phi.shape().algebra(), Err::NotSquare,
          "q-dominance is a property of maps on a matrix algebra");
  require(has_no_negative_eigenvalues(phi, tol) && has_no_negative_eigenvalues(psi, tol),
          Err::NotNonNegativeSpectrum,
          "action matrix has an eigenvalue on the negative real axis");
  const auto values = detail::scan_resolvent_choi(phi, &psi, grid, exec);
  return detail::report_from_scan(grid, values,
                                  scaled(tol.psd_eps, std::max(phi.norm(), psi.norm())));
}

namespace {

// Unitary similarity swapping the two diagonal entries of an upper-triangular
// 2x2 block [[a, b], [0, c]]: the rotation is built from the eigenvector
// (b, c - a) of the block for c, so G* M G comes back triangular with c first.
void swap_schur_pair(CMatrix& t, CMatrix& u, Index i) {
  const Complex a = t(i, i);
  const Complex b = t(i, i + 1);
  const Complex c = t(i + 1, i + 1);
  Eigen::Vector2cd v(b, c - a);
  const double len = v.norm();
  Eigen::Matrix2cd g;
  if (len < 1e-300) {
    g << 0.0, 1.0, 1.0, 0.0;  // equal entries, plain exchange
  } else {
    v /= len;
    g << v(0), -std::conj(v(1)), v(1), std::conj(v(0));
  }
  t.middleCols(i, 2).applyOnTheRight(g);
  t.middleRows(i, 2).applyOnTheLeft(g.adjoint());
  t(i + 1, i) = 0.0;
  u.middleCols(i, 2).applyOnTheRight(g);
}

}  // namespace

MatrixMap spectral_limit_idempotent(const MatrixMap& phi, [[maybe_unused]] const Tolerance& tol) {
  require(phi.shape().endo(), Err::DimensionMismatch,
          "limit idempotent needs an endomorphism of one matrix space");
  const CMatrix& m = phi.action();
  const Index d = m.rows();
  if (d == 0) return phi;

  // Spectral idempotent for the part of the spectrum away from zero, computed
  // from a reordered Schur form. Eigenvector bases degenerate badly when the
  // zero eigenvalue repeats (the generic case here), so everything is done
  // with unitary Schur vectors plus one small Sylvester solve instead.
  Eigen::ComplexSchur<CMatrix> schur(m, true);
  require(schur.info() == Eigen::Success, Err::LimitDiverged, "Schur decomposition failed");
  CMatrix t = schur.matrixT();
  CMatrix u = schur.matrixU();
  const double radius = t.diagonal().cwiseAbs().maxCoeff();
  if (radius == 0.0) return MatrixMap::zero(phi.shape());
  const double cutoff = 1e-8 * radius;
  const auto kept = [&](Index i) { return std::abs(t(i, i)) > cutoff; };

  // Bubble the kept eigenvalues to the top with adjacent swaps.
  bool moved = true;
  while (moved) {
    moved = false;
    for (Index i = 0; i + 1 < d; ++i)
      if (!kept(i) && kept(i + 1)) {
        swap_schur_pair(t, u, i);
        moved = true;
      }
  }
  Index k = 0;
  while (k < d && kept(k)) ++k;

  // How fast t * resolvent converges to the idempotent is set by the smallest
  // retained eigenvalue, so push the comparison point out accordingly; at a
  // fixed t the check would wrongly reject small-but-clean spectra.
  double min_kept = radius;
  for (Index i = 0; i < k; ++i) min_kept = std::min(min_kept, std::abs(t(i, i)));
  const double t_check = 1e8 / std::min(1.0, min_kept);

  if (k == d) {
    MatrixMap limit = MatrixMap::identity(phi.shape().in_rows, phi.shape().in_cols);
    require(limit.distance(resolvent(phi, t_check) * t_check) <= scaled(1e-6, limit.norm()),
            Err::LimitDiverged, "large-t resolvent does not match the spectral idempotent");
    return limit;
  }

  // With T = [[T11, T12], [0, T22]] the projector onto the T11 spectrum is
  // [[I, R], [0, 0]] where T11 R - R T22 = T12; back-substitute column by
  // column (T22 is triangular, and every shift T11 - T22_jj stays invertible
  // because the cutoff separates the diagonals).
  const CMatrix t11 = t.topLeftCorner(k, k);
  const CMatrix t12 = t.topRightCorner(k, d - k);
  const CMatrix t22 = t.bottomRightCorner(d - k, d - k);
  CMatrix r = CMatrix::Zero(k, d - k);
  for (Index j = 0; j < d - k; ++j) {
    CVector rhs = t12.col(j);
    for (Index i = 0; i < j; ++i) rhs += r.col(i) * t22(i, j);
    const CMatrix shifted = t11 - t22(j, j) * CMatrix::Identity(k, k);
    r.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  CMatrix proj = CMatrix::Zero(d, d);
  proj.topLeftCorner(k, k) = CMatrix::Identity(k, k);
  proj.topRightCorner(k, d - k) = r;
  MatrixMap limit(phi.shape(), CMatrix(u * proj * u.adjoint()));

  // The construction silently goes wrong for badly conditioned eigenbases, so
  // compare with the resolvent at a large t before trusting it.
  const MatrixMap probe = resolvent(phi, t_check) * t_check;
  require(limit.distance(probe) <= scaled(1e-6, limit.norm()), Err::LimitDiverged,
          "large-t resolvent does not match the spectral idempotent");
  return limit;
}

MatrixMap limit_idempotent(const MatrixMap& phi, const Tolerance& tol) {
  require(phi.shape().endo() && phi.shape().algebra(), Err::NotSquare,
          "limit_idempotent works on maps of a matrix algebra");
  require(has_no_negative_eigenvalues(phi, tol), Err::NotNonNegativeSpectrum,
          "action matrix has an eigenvalue on the negative real axis");

  // Boundedness hypothesis: t * resolvent stays a contraction as t grows. For
  // a CP resolvent the map norm is attained at the identity, which keeps the
  // check cheap; failing it means the limit cannot be the wanted idempotent.
  const Index n = phi.shape().in_rows;
  const CMatrix id = CMatrix::Identity(n, n);
  for (double t : {1e4, 1e6, 1e8}) {
    const MatrixMap r = resolvent(phi, t);
    const double norm_at_id = op_norm(r.apply(id)) * t;
    require(norm_at_id <= 1.0 + 1e-6, Err::LimitDiverged,
            "t * resolvent is not contractive at large t");
  }
  return spectral_limit_idempotent(phi, tol);
}

}  // namespace qmaps
