#include "qmaps/qcorners.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "qmaps/kernel.hpp"

namespace qmaps {

namespace {

CMatrix diag_of(const EigenvalueList& mu, Index dim) {
  CMatrix d = CMatrix::Zero(dim, dim);
  for (Index i = 0; i < mu.k() && i < dim; ++i) d(i, i) = mu.values[i];
  return d;
}

// diag(X, E) embedded in the n x n' block space.
CMatrix corner_range_element(const QCornerParams& p) {
  CMatrix z = CMatrix::Zero(p.n, p.nprime);
  z.topLeftCorner(p.k, p.k) = p.x;
  z.bottomRightCorner(p.n - p.k, p.nprime - p.k) = p.e;
  return z;
}

}  // namespace

bool disk_condition_at(Complex lambda, double t) {
  const double lhs = std::norm(lambda) * (1.0 + 2.0 * t);
  const double rhs = 1.0 + 2.0 * t * lambda.real();
  return lhs <= rhs + 1e-12 * (1.0 + 2.0 * t);
}

bool QCornerParams::lambda_in_disk(double eps) const {
  return std::norm(lambda) <= lambda.real() + eps;
}

void QCornerParams::validate(const EigenvalueList& mu, const Tolerance& tol) const {
  require(k >= 1 && k == mu.k() && k <= n && k <= nprime, Err::InvalidParams,
          "k must match the list length and fit in both dimensions");
  require(x.rows() == k && x.cols() == k, Err::InvalidParams, "X must be k x k");
  require(e.rows() == n - k && e.cols() == nprime - k, Err::InvalidParams,
          "E must be (n-k) x (n'-k)");
  require_finite(x, "X");
  require_finite(e, "E");
  require(std::isfinite(lambda.real()) && std::isfinite(lambda.imag()), Err::InvalidParams,
          "lambda must be finite");
  require(inf_norm(x.adjoint() * x - CMatrix::Identity(k, k)) <= 1e-8, Err::InvalidParams,
          "X must be unitary");
  const CMatrix omega = diag_of(mu, k);
  require(inf_norm(x * omega - omega * x) <= 1e-8, Err::InvalidParams,
          "X must commute with diag(mu)");
  require(op_norm(e) <= 1.0 + 1e-8, Err::InvalidParams, "E must be a contraction");
  (void)tol;
}

MatrixMap build_q_corner(const EigenvalueList& mu, const QCornerParams& params,
                         const Tolerance& tol) {
  params.validate(mu, tol);
  const CMatrix omega = diag_of(mu, params.k);
  const CMatrix z = corner_range_element(params);
  const CMatrix x_adj = params.x.adjoint();
  const Complex lambda = params.lambda;
  const Index k = params.k;
  return MatrixMap::from_function(
      {params.n, params.nprime, params.n, params.nprime}, [&](const CMatrix& m) -> CMatrix {
        const Complex tau = (x_adj * m.topLeftCorner(k, k) * omega).trace();
        return lambda * tau * z;
      });
}

BlockMap assemble_template(const EigenvalueList& mu, const QCornerParams& params,
                           const Tolerance& tol) {
  return BlockMap::assemble(rank_one_from_list(mu, params.n).as_map(),
                            rank_one_from_list(mu, params.nprime).as_map(),
                            build_q_corner(mu, params, tol));
}

MatrixMap transport(const MatrixMap& gamma, const CMatrix& u, const CMatrix& v,
                    const Tolerance& tol) {
  const MapShape shape = gamma.shape();
  require(shape.endo(), Err::DimensionMismatch, "transport needs an endomorphism of one block");
  require(u.rows() == shape.in_rows && u.cols() == shape.in_rows, Err::DimensionMismatch,
          "left unitary size mismatch");
  require(v.rows() == shape.in_cols && v.cols() == shape.in_cols, Err::DimensionMismatch,
          "right unitary size mismatch");
  require(inf_norm(u.adjoint() * u - CMatrix::Identity(u.rows(), u.rows())) <= 1e-10 &&
              inf_norm(v.adjoint() * v - CMatrix::Identity(v.rows(), v.rows())) <= 1e-10,
          Err::NotUnitary, "transport needs unitaries");
  (void)tol;
  return MatrixMap::from_function(shape, [&](const CMatrix& b) -> CMatrix {
    return u.adjoint() * gamma.apply(u * b * v.adjoint()) * v;
  });
}

std::optional<QCornerParams> recognize_q_corner(const MatrixMap& gamma, const EigenvalueList& mu,
                                                Index n, Index nprime, const Tolerance& tol) {
  const Index k = mu.k();
  if (k < 1 || k > n || k > nprime) return std::nullopt;
  if (gamma.shape() != MapShape{n, nprime, n, nprime}) return std::nullopt;
  const double norm = gamma.norm();
  if (norm <= tol.psd_eps) return std::nullopt;

  MatrixMap sigma;
  try {
    sigma = sigma_limit(gamma, tol);
  } catch (const Error&) {
    return std::nullopt;
  }

  // The family only reads the top-left k x k corner of its input, so every
  // other matrix unit must be annihilated.
  const double unit_bound = 1e-8 * std::max(1.0, sigma.norm());
  for (Index q = 0; q < nprime; ++q)
    for (Index p = 0; p < n; ++p) {
      if (p < k && q < k) continue;
      if (sigma.action().col(q * n + p).norm() > unit_bound) return std::nullopt;
    }

  const MatrixMap compressed =
      MatrixMap::from_function({k, k, k, k}, [&](const CMatrix& b) -> CMatrix {
        CMatrix big = CMatrix::Zero(n, nprime);
        big.topLeftCorner(k, k) = b;
        return sigma.apply(big).topLeftCorner(k, k);
      });

  std::optional<CMatrix> x;
  try {
    x = classify_idempotent_corner(compressed, State(diag_of(mu, k)), tol);
  } catch (const Error&) {
    return std::nullopt;
  }
  if (!x) return std::nullopt;

  CMatrix embedded = CMatrix::Zero(n, nprime);
  embedded.topLeftCorner(k, k) = *x;
  const CMatrix z = sigma.apply(embedded);
  if (inf_norm(z.topLeftCorner(k, k) - *x) > 1e-7) return std::nullopt;
  if (inf_norm(z.topRightCorner(k, nprime - k)) > 1e-7 ||
      inf_norm(z.bottomLeftCorner(n - k, k)) > 1e-7)
    return std::nullopt;

  QCornerParams params;
  params.k = k;
  params.n = n;
  params.nprime = nprime;
  params.x = *x;
  params.e = z.bottomRightCorner(n - k, nprime - k);
  if (op_norm(params.e) > 1.0 + 1e-7) return std::nullopt;

  // gamma acts on its range element as multiplication by lambda.
  const CVector zv = vec(z);
  params.lambda = zv.dot(vec(gamma.apply(z))) / zv.squaredNorm();

  try {
    if (build_q_corner(mu, params, tol).distance(gamma) > 1e-8 * std::max(1.0, norm))
      return std::nullopt;
  } catch (const Error&) {
    return std::nullopt;
  }
  return params;
}

namespace {

// Worst Choi eigenvalue of the template's resolvent at a single t, poles
// counted as unbounded violations.
double template_min_eig_at(const MatrixMap& theta, double t) {
  try {
    return min_choi_eigenvalue(resolvent(theta, t));
  } catch (const Error& e) {
    if (e.code() == Err::ResolventSingular) return detail::kPoleValue;
    throw;
  }
}

// For a template verdict known to be negative, locate a grid point (or, for
// hairline cases, a probed point past the crossing) that exhibits the failure.
void attach_failure_point(QPositivityReport& report, const MatrixMap& theta,
                          std::span<const double> grid, Complex lambda, double threshold) {
  const auto values = detail::scan_resolvent_choi(theta, nullptr, grid, Exec::parallel);
  const QPositivityReport sampled = detail::report_from_scan(grid, values, threshold);
  if (!sampled.verdict) {
    report.failing_t = sampled.failing_t;
    report.min_choi_eig_at_failure = sampled.min_choi_eig_at_failure;
    return;
  }
  const double gap = std::norm(lambda) - lambda.real();
  double t_probe = gap > 0 ? std::max((1.0 - std::norm(lambda)) / (2.0 * gap), 1e-3) : 1e-3;
  double best_t = t_probe;
  double best_value = 0.0;
  for (int step = 0; step < 60 && t_probe < 1e12; ++step, t_probe *= 1.5) {
    const double value = template_min_eig_at(theta, t_probe);
    if (value < best_value) {
      best_value = value;
      best_t = t_probe;
    }
    if (value < -threshold) break;
  }
  report.failing_t = best_t;
  report.min_choi_eig_at_failure = best_value;
}

}  // namespace

QPositivityReport is_q_corner(const MatrixMap& gamma, const RankOneMap& phi,
                              const RankOneMap& psi, std::span<const double> grid,
                              const Tolerance& tol) {
  const Index n = phi.dim();
  const Index nprime = psi.dim();
  require(gamma.shape() == MapShape{n, nprime, n, nprime}, Err::DimensionMismatch,
          "gamma must act on the n x n' block");

  // Move both implementing states to their eigenbases; verdicts are invariant
  // under this frame change.
  const CMatrix u = diagonalizing_unitary(phi.state(), tol);
  const CMatrix v = diagonalizing_unitary(psi.state(), tol);
  const MatrixMap gamma_d = transport(gamma, u, v, tol);
  const EigenvalueList mu = eigenvalue_list(phi.state(), tol);
  const EigenvalueList r = eigenvalue_list(psi.state(), tol);
  const BlockMap theta = BlockMap::assemble(rank_one_from_list(mu, n).as_map(),
                                            rank_one_from_list(r, nprime).as_map(), gamma_d);
  const MatrixMap theta_map = theta.to_map();
  const double threshold = scaled(tol.psd_eps, theta_map.norm());

  if (lists_equal(mu, r)) {
    if (const auto params = recognize_q_corner(gamma_d, mu, n, nprime, tol)) {
      QPositivityReport report;
      report.grid.assign(grid.begin(), grid.end());
      report.method = "closed-form";
      report.verdict = params->lambda_in_disk();
      if (!report.verdict)
        attach_failure_point(report, theta_map, grid, params->lambda, threshold);
      return report;
    }
  }

  // Not of the classified family: sample. An eigenvalue on the negative real
  // axis rules the map out by definition; the scan then pins a failing point
  // (near the resolvent pole if complete positivity alone never breaks).
  const auto values = detail::scan_resolvent_choi(theta_map, nullptr, grid, Exec::parallel);
  QPositivityReport report = detail::report_from_scan(grid, values, threshold);
  report.method = "sampled";
  if (report.verdict && !has_no_negative_eigenvalues(theta_map, tol)) {
    report.verdict = false;
    Eigen::ComplexEigenSolver<CMatrix> eig(theta_map.action(), false);
    double worst = 0.0;
    for (Index i = 0; i < eig.eigenvalues().size(); ++i) {
      const Complex zz = eig.eigenvalues()(i);
      if (zz.real() < worst && std::abs(zz.imag()) <= 1e-10 * std::abs(zz.real()))
        worst = zz.real();
    }
    const double t_pole = -1.0 / worst;
    report.failing_t = t_pole * (1.0 - 1e-3);
    report.min_choi_eig_at_failure = template_min_eig_at(theta_map, *report.failing_t);
  }
  return report;
}

const char* to_string(HyperMaxReason reason) {
  switch (reason) {
    case HyperMaxReason::DimMismatch: return "DimMismatch";
    case HyperMaxReason::ENotUnitary: return "ENotUnitary";
    case HyperMaxReason::LambdaZero: return "LambdaZero";
    case HyperMaxReason::LambdaNotOnBoundary: return "LambdaNotOnBoundary";
    case HyperMaxReason::Pass: return "Pass";
  }
  return "Unknown";
}

namespace {

// phi composed with right multiplication by a fixed positive matrix d.
MatrixMap cut_diagonal(const MatrixMap& phi, const CMatrix& d) {
  return MatrixMap::from_function(phi.shape(), [&](const CMatrix& a) -> CMatrix {
    return phi.apply(a) * d;
  });
}

}  // namespace

HyperMaxVerdict is_hyper_maximal(const QCornerParams& params, const EigenvalueList& mu,
                                 const Tolerance& tol) {
  params.validate(mu, tol);
  require(params.lambda_in_disk(), Err::NotAQCorner,
          "lambda must satisfy the q-corner disk condition");

  const Index k = params.k;
  const Index n = params.n;
  const Index nprime = params.nprime;
  const Complex lambda = params.lambda;
  const BlockMap theta = assemble_template(mu, params, tol);

  HyperMaxVerdict out;
  out.reason = HyperMaxReason::Pass;

  const bool e_unitary =
      (n - k == nprime - k) &&
      inf_norm(params.e.adjoint() * params.e -
               CMatrix::Identity(nprime - k, nprime - k)) <= 1e-8;

  if (n != nprime) {
    out.reason = HyperMaxReason::DimMismatch;
    if (n > nprime) {
      CMatrix d = CMatrix::Identity(n, n);
      d.bottomRightCorner(n - k, n - k) = params.e * params.e.adjoint();
      out.witness = BlockMap::assemble(cut_diagonal(theta.phi, d), theta.psi, theta.gamma);
      out.witness_note = "first diagonal block cut by EE*";
    } else {
      CMatrix d = CMatrix::Identity(nprime, nprime);
      d.bottomRightCorner(nprime - k, nprime - k) = params.e.adjoint() * params.e;
      out.witness = BlockMap::assemble(theta.phi, cut_diagonal(theta.psi, d), theta.gamma);
      out.witness_note = "second diagonal block cut by E*E";
    }
  } else if (!e_unitary) {
    out.reason = HyperMaxReason::ENotUnitary;
    CMatrix d = CMatrix::Identity(n, n);
    d.bottomRightCorner(n - k, n - k) = params.e * params.e.adjoint();
    out.witness = BlockMap::assemble(cut_diagonal(theta.phi, d), theta.psi, theta.gamma);
    out.witness_note = "first diagonal block cut by EE*";
  } else if (std::abs(lambda) <= 1e-8) {
    out.reason = HyperMaxReason::LambdaZero;
    out.witness = BlockMap::assemble(theta.phi * Complex(0.5), theta.psi, theta.gamma);
    out.witness_note = "first diagonal block halved";
  } else if (std::norm(lambda) < lambda.real() - 1e-8) {
    out.reason = HyperMaxReason::LambdaNotOnBoundary;
    const Complex a = std::norm(lambda) / lambda.real();
    out.witness =
        BlockMap::assemble(theta.phi * a, theta.psi * a, theta.gamma);
    out.witness_note = "diagonal blocks scaled to put lambda on the boundary";
  }

  out.verdict = !out.witness.has_value();
  if (out.witness) {
    const MatrixMap theta_map = theta.to_map();
    const MatrixMap witness_map = out.witness->to_map();
    out.witness_distance = theta_map.distance(witness_map);
    const auto grid = witness_t_grid();
    const auto dom =
        detail::scan_resolvent_choi(theta_map, &witness_map, grid, Exec::parallel);
    const auto qpos = detail::scan_resolvent_choi(witness_map, nullptr, grid, Exec::parallel);
    out.min_domination_eig = *std::min_element(dom.begin(), dom.end());
    out.min_witness_qpos_eig = *std::min_element(qpos.begin(), qpos.end());
  }
  return out;
}

ResolventDecomposition decompose_resolvent(const BlockMap& theta, double t,
                                           const Tolerance& tol) {
  const Index n = theta.n;
  const Index nprime = theta.nprime;

  const auto phi_ro = RankOneMap::from_map(theta.phi, tol);
  const auto psi_ro = RankOneMap::from_map(theta.psi, tol);
  require(phi_ro && psi_ro, Err::TemplateMismatch, "diagonal blocks are not rank-one unital");
  const EigenvalueList mu = eigenvalue_list(phi_ro->state(), tol);
  const EigenvalueList r = eigenvalue_list(psi_ro->state(), tol);
  require(lists_equal(mu, r), Err::TemplateMismatch, "diagonal blocks have different lists");
  require(inf_norm(phi_ro->state().density() - diag_of(mu, n)) <= 1e-8 &&
              inf_norm(psi_ro->state().density() - diag_of(mu, nprime)) <= 1e-8,
          Err::TemplateMismatch, "implementing states are not in the template frame");

  const auto params = recognize_q_corner(theta.gamma, mu, n, nprime, tol);
  require(params.has_value(), Err::TemplateMismatch,
          "off-diagonal block is not of the classified family");

  const Index k = params->k;
  const Index tail_dim = n + nprime - 2 * k;
  const CMatrix omega = diag_of(mu, k);
  const CMatrix x = params->x;
  const CMatrix e = params->e;
  const Complex lambda = params->lambda;
  const Complex denom = 1.0 + t * lambda;
  require(std::abs(denom) > 1e-12, Err::ResolventSingular,
          "resolvent pole at this grid point");
  const Complex c_t = lambda / denom;
  const double d_t = 1.0 / (1.0 + t);

  const auto rho = [&](const CMatrix& a) { return (a * omega).trace(); };
  const auto tau = [&](const CMatrix& b) { return (x.adjoint() * b * omega).trace(); };
  const auto tau_conj = [&](const CMatrix& c) { return std::conj(tau(c.adjoint())); };

  const auto split = [&](const CMatrix& m) {
    return std::array<CMatrix, 4>{m.topLeftCorner(k, k), m.topRightCorner(k, k),
                                  m.bottomLeftCorner(k, k), m.bottomRightCorner(k, k)};
  };

  const MatrixMap core =
      MatrixMap::from_function({2 * k, 2 * k, 2 * k, 2 * k}, [&](const CMatrix& m) {
        const auto [a, b, c, d] = split(m);
        CMatrix out(2 * k, 2 * k);
        out.topLeftCorner(k, k) = rho(a) * d_t * CMatrix::Identity(k, k);
        out.topRightCorner(k, k) = c_t * tau(b) * x;
        out.bottomLeftCorner(k, k) = std::conj(c_t) * tau_conj(c) * x.adjoint();
        out.bottomRightCorner(k, k) = rho(d) * d_t * CMatrix::Identity(k, k);
        return out;
      });

  const MapShape tail_shape{2 * k, 2 * k, tail_dim, tail_dim};
  const MatrixMap tail_cut = MatrixMap::from_function(tail_shape, [&](const CMatrix& m) {
    const auto [a, b, c, d] = split(m);
    CMatrix out(tail_dim, tail_dim);
    out.topLeftCorner(n - k, n - k) = rho(a) * d_t * (e * e.adjoint());
    out.topRightCorner(n - k, nprime - k) = c_t * tau(b) * e;
    out.bottomLeftCorner(nprime - k, n - k) = std::conj(c_t) * tau_conj(c) * e.adjoint();
    out.bottomRightCorner(nprime - k, nprime - k) =
        rho(d) * d_t * CMatrix::Identity(nprime - k, nprime - k);
    return out;
  });
  const MatrixMap tail = MatrixMap::from_function(tail_shape, [&](const CMatrix& m) {
    CMatrix out = tail_cut.apply(m);
    out.topLeftCorner(n - k, n - k) += rho(m.topLeftCorner(k, k)) * d_t *
                                       (CMatrix::Identity(n - k, n - k) - e * e.adjoint());
    return out;
  });

  // Compression onto the paired k x k corners and onto the complementary rows.
  CMatrix s = CMatrix::Zero(2 * k, n + nprime);
  s.block(0, 0, k, k) = CMatrix::Identity(k, k);
  s.block(k, n, k, k) = CMatrix::Identity(k, k);
  CMatrix tt = CMatrix::Zero(tail_dim, n + nprime);
  tt.block(0, k, n - k, n - k) = CMatrix::Identity(n - k, n - k);
  tt.block(n - k, n + k, nprime - k, nprime - k) =
      CMatrix::Identity(nprime - k, nprime - k);

  const Index total = n + nprime;
  const MatrixMap recomposed =
      MatrixMap::from_function({total, total, total, total}, [&](const CMatrix& m) {
        const CMatrix compressed = s * m * s.adjoint();
        return CMatrix(s.adjoint() * core.apply(compressed) * s +
                       tt.adjoint() * tail.apply(compressed) * tt);
      });

  ResolventDecomposition out{core, tail, tail_cut, 0.0, 0.0};
  out.residual = recomposed.distance(resolvent(theta.to_map(), t));
  // The off-diagonal block family solves its own resolvent equation in closed
  // form: gamma (1 + t gamma)^{-1} = gamma / (1 + t lambda).
  out.gamma_formula_residual = (resolvent(theta.gamma, t) - theta.gamma * (1.0 / denom)).norm();
  return out;
}

}  // namespace qmaps
