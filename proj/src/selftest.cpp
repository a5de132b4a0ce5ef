#include "qmaps/selftest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qmaps/cocycle.hpp"
#include "qmaps/kernel.hpp"

namespace qmaps {
namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Collects check outcomes; only the first failure is kept verbatim.
struct Suite {
  bool ok = true;
  std::string failure;

  void expect(bool cond, const std::string& msg) {
    if (!cond && ok) {
      ok = false;
      failure = msg;
    }
  }
};

std::string at_instance(const char* what, int i) {
  return std::string(what) + " (instance " + std::to_string(i) + ")";
}

double urand(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Index irand(Rng& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

// Descending positive entries summing to one; smallest entry bounded away
// from zero so weights never fall below numerical resolution.
EigenvalueList random_list(Index k, Rng& rng) {
  std::vector<double> v(static_cast<std::size_t>(k));
  for (auto& x : v) x = urand(rng, 0.1, 1.0);
  std::sort(v.begin(), v.end(), std::greater<>());
  double sum = 0;
  for (double x : v) sum += x;
  for (auto& x : v) x /= sum;
  return EigenvalueList{std::move(v)};
}

// Descending list whose consecutive gaps are either exactly zero (repeated
// entries) or at least 0.3 before normalization, so group structure is
// unambiguous. With `require_two_values` the list never collapses to a
// multiple of the identity.
EigenvalueList gapped_list(Index k, Rng& rng, bool allow_repeats, bool require_two_values) {
  while (true) {
    std::vector<double> v(static_cast<std::size_t>(k));
    double acc = 0.0;
    for (Index i = k - 1; i >= 0; --i) {
      const bool repeat = i < k - 1 && allow_repeats && urand(rng, 0.0, 1.0) < 0.25;
      acc += repeat ? 0.0 : urand(rng, 0.3, 0.6);
      v[static_cast<std::size_t>(i)] = acc;
    }
    double sum = 0;
    for (double x : v) sum += x;
    for (auto& x : v) x /= sum;
    if (require_two_values && k > 1 && v.front() - v.back() < 1e-6) continue;
    return EigenvalueList{std::move(v)};
  }
}

CMatrix diag_of(const EigenvalueList& list) {
  CMatrix m = CMatrix::Zero(list.k(), list.k());
  for (Index i = 0; i < list.k(); ++i) m(i, i) = list.values[static_cast<std::size_t>(i)];
  return m;
}

CMatrix haar_or_empty(Index d, Rng& rng) {
  return d == 0 ? CMatrix(0, 0) : random_unitary(d, rng);
}

CMatrix contraction_or_empty(Index rows, Index cols, Rng& rng) {
  if (rows == 0 || cols == 0) return CMatrix(rows, cols);
  return random_contraction(rows, cols, rng);
}

// Kraus set whose weights all lie in [0.2, 1]: sampled as a random partial
// spectral decomposition so the operators are far from linear dependence.
KrausSet random_kraus(Index n, Index m, Index count, Rng& rng) {
  const Index d = n * m;
  const CMatrix u = random_unitary(d, rng);
  RVector eigs = RVector::Zero(d);
  for (Index i = 0; i < count; ++i) eigs(i) = urand(rng, 0.2, 1.0);
  ChoiMatrix choi{n, m, u * eigs.asDiagonal() * u.adjoint()};
  return kraus_decompose(map_from_choi(choi));
}

// sum_ij c_ij S_i B T_j*, without the contraction gate of the library builder
// so deliberately-too-large coefficient matrices can be assembled.
MatrixMap coupling_from_sets(const KrausSet& s, const KrausSet& t, const CMatrix& c) {
  MapShape shape{s.dim_in, t.dim_in, s.dim_out, t.dim_out};
  return MatrixMap::from_function(shape, [&](const CMatrix& b) {
    CMatrix out = CMatrix::Zero(s.dim_out, t.dim_out);
    for (std::size_t i = 0; i < s.operators.size(); ++i)
      for (std::size_t j = 0; j < t.operators.size(); ++j)
        out += c(static_cast<Index>(i), static_cast<Index>(j)) * s.operators[i] * b *
               t.operators[j].adjoint();
    return out;
  });
}

// B -> tr(X* B Omega) X on M_k.
MatrixMap coupling_sigma(const CMatrix& x, const CMatrix& omega) {
  const Index k = x.rows();
  return MatrixMap::from_function({k, k, k, k}, [&](const CMatrix& b) {
    return CMatrix((x.adjoint() * b * omega).trace() * x);
  });
}

// Distance after removing the free global phase between two matrices.
double phase_aligned_distance(const CMatrix& a, const CMatrix& b) {
  const Complex c = (a.adjoint() * b).trace();
  const Complex phase = std::abs(c) > 1e-12 ? c / std::abs(c) : Complex(1.0, 0.0);
  return op_norm(a * phase - b);
}

Index numeric_rank(const CMatrix& a, double rel_cut) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  const RVector& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cut = sv(0) * rel_cut;
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

// Orthonormal basis of the null space (columns).
CMatrix kernel_basis(const CMatrix& a, double rel_cut) {
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
  const Index r = numeric_rank(a, rel_cut);
  return svd.matrixV().rightCols(a.cols() - r);
}

// How far `sub` sticks out of the span of `space` (both with orthonormal
// columns). Zero iff sub is contained in space; bounds the principal angles.
double containment_residual(const CMatrix& sub, const CMatrix& space) {
  if (sub.cols() == 0) return 0.0;
  return op_norm(sub - space * (space.adjoint() * sub));
}

QCornerParams make_params(const EigenvalueList& mu, Index n, Index nprime, Complex lambda,
                          Rng& rng, bool unitary_e) {
  QCornerParams p;
  p.k = mu.k();
  p.n = n;
  p.nprime = nprime;
  p.x = random_unitary_commuting_with(diag_of(mu), rng);
  p.e = unitary_e ? haar_or_empty(n - p.k, rng) : contraction_or_empty(n - p.k, nprime - p.k, rng);
  p.lambda = lambda;
  return p;
}

Complex circle_point(double radius, double theta) {
  return {0.5 + radius * std::cos(theta), radius * std::sin(theta)};
}

bool unitary_within(const CMatrix& e, double eps) {
  if (e.rows() != e.cols()) return false;
  if (e.rows() == 0) return true;
  return op_norm(CMatrix(e.adjoint() * e - CMatrix::Identity(e.cols(), e.cols()))) <= eps;
}

// ---- criterion 1: Choi/Kraus round trips ----------------------------------

std::string suite_round_trip(Suite& s, Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Index n = irand(rng, 1, 4);
    const Index m = irand(rng, 1, 4);
    const Index count = irand(rng, 1, std::min<Index>(3, n * m));
    std::optional<KrausSet> made;
    for (int tries = 0; tries < 20 && !made; ++tries) {
      std::vector<CMatrix> ops;
      for (Index r = 0; r < count; ++r) ops.push_back(0.5 * ginibre(m, n, rng));
      try {
        made = make_kraus(std::move(ops));
      } catch (const Error&) {
        // a nearly dependent draw; take a fresh one
      }
    }
    s.expect(made.has_value(), at_instance("could not draw an independent operator set", i));
    if (!made) return {};
    const MatrixMap phi = map_from_kraus(*made);
    s.expect(is_completely_positive(phi), at_instance("built map not recognized as CP", i));
    const MatrixMap rebuilt = map_from_kraus(kraus_decompose(phi));
    const double err = rebuilt.distance(phi);
    worst = std::max(worst, err);
    s.expect(err <= 1e-9, at_instance(("round trip error " + fmt(err)).c_str(), i));
  }

  const MatrixMap transpose =
      MatrixMap::from_function({2, 2, 2, 2}, [](const CMatrix& a) { return a.transpose(); });
  const double eig = min_choi_eigenvalue(transpose);
  s.expect(std::abs(eig + 1.0) <= 1e-10,
           "transpose bottom eigenvalue off: " + std::string(fmt(eig)));
  s.expect(!is_completely_positive(transpose), "transpose accepted as CP");
  bool rejected = false;
  try {
    (void)kraus_decompose(transpose);
  } catch (const Error& e) {
    rejected = e.code() == Err::NotCP;
  }
  s.expect(rejected, "transpose decomposition not rejected with the CP error");
  return "100 maps round-tripped, worst error " + std::string(fmt(worst)) +
         "; transpose rejected at -1";
}

// ---- criterion 2: the large-t limit idempotent ----------------------------

void check_limit_properties(Suite& s, const MatrixMap& phi, int i, double& worst_alg,
                            double& worst_tail) {
  const MatrixMap limit = limit_idempotent(phi);
  const double leave = std::max(phi.compose(limit).distance(phi), limit.compose(phi).distance(phi));
  worst_alg = std::max(worst_alg, leave);
  s.expect(leave <= 1e-8, at_instance(("absorption residual " + fmt(leave)).c_str(), i));
  const double idem = limit.compose(limit).distance(limit);
  worst_alg = std::max(worst_alg, idem);
  s.expect(idem <= 1e-8, at_instance(("idempotency residual " + fmt(idem)).c_str(), i));
  s.expect(is_completely_positive(limit), at_instance("limit not CP", i));

  const double cut = 1e-7;
  const Index rank_phi = numeric_rank(phi.action(), cut);
  const Index rank_limit = numeric_rank(limit.action(), cut);
  s.expect(rank_phi == rank_limit,
           at_instance(("rank mismatch " + std::to_string(rank_phi) + " vs " +
                        std::to_string(rank_limit))
                           .c_str(),
                       i));
  const CMatrix ker_phi = kernel_basis(phi.action(), cut);
  const CMatrix ker_limit = kernel_basis(limit.action(), cut);
  const double angles = std::max(containment_residual(ker_phi, ker_limit),
                                 containment_residual(ker_limit, ker_phi));
  s.expect(angles <= 1e-6, at_instance(("null spaces apart by " + fmt(angles)).c_str(), i));

  const double t_check = 1e8;
  const MatrixMap tail = resolvent(phi, t_check) * Complex(t_check, 0.0);
  const double tail_err = tail.distance(limit);
  worst_tail = std::max(worst_tail, tail_err);
  s.expect(tail_err <= scaled(1e-6, limit.norm()),
           at_instance(("large-t disagreement " + fmt(tail_err)).c_str(), i));
}

std::string suite_limit_idempotent(Suite& s, Rng& rng) {
  double worst_alg = 0.0, worst_tail = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Index n = irand(rng, 2, 4);
    const Index k = irand(rng, 1, n);
    MatrixMap phi = rank_one_from_list(random_list(k, rng), n).as_map();
    if (i % 2 == 1) phi = conjugate_map(phi, random_unitary(n, rng));
    check_limit_properties(s, phi, i, worst_alg, worst_tail);
    if (!s.ok) return {};
  }
  for (int i = 0; i < 50; ++i) {
    const Index k = irand(rng, 1, 2);
    const Index n = irand(rng, k, 3);
    const Index nprime = irand(rng, k, 3);
    const EigenvalueList mu = random_list(k, rng);
    const double r = urand(rng, 0.2, 0.9);
    const Complex lambda = circle_point(0.5 * r, urand(rng, 0.0, 2.0 * kPi));
    const QCornerParams params = make_params(mu, n, nprime, lambda, rng, false);
    const MatrixMap theta = assemble_template(mu, params).to_map();
    s.expect(theta.compose(theta).distance(theta) > 1e-3,
             at_instance("generator produced an idempotent", 100 + i));
    check_limit_properties(s, theta, 100 + i, worst_alg, worst_tail);
    if (!s.ok) return {};
  }
  return "150 maps: worst algebraic residual " + std::string(fmt(worst_alg)) +
         ", worst large-t gap " + std::string(fmt(worst_tail));
}

// ---- criterion 3: coupling by a coefficient matrix ------------------------

std::string suite_contraction_criterion(Suite& s, Rng& rng) {
  double worst_neg = 0.0;
  for (int i = 0; i < 200; ++i) {
    const bool inside = i < 100;
    const Index n = irand(rng, 2, 3);
    const Index nprime = irand(rng, 2, 3);
    const KrausSet sset = random_kraus(n, n, irand(rng, 2, 3), rng);
    const KrausSet tset = random_kraus(nprime, nprime, irand(rng, 2, 3), rng);
    const MatrixMap phi = map_from_kraus(sset);
    const MatrixMap psi = map_from_kraus(tset);

    CMatrix c = ginibre(static_cast<Index>(sset.operators.size()),
                        static_cast<Index>(tset.operators.size()), rng);
    const double target = inside ? urand(rng, 0.3, 1.0) : urand(rng, 1.1, 2.0);
    c *= target / op_norm(c);

    if (inside) {
      const MatrixMap gamma = corner_from_contraction(sset, tset, c);
      s.expect(is_corner(gamma, phi, psi), at_instance("in-ball coupling rejected", i));
    } else {
      const MatrixMap gamma = coupling_from_sets(sset, tset, c);
      s.expect(!is_corner(gamma, phi, psi), at_instance("out-of-ball coupling accepted", i));
      const double eig = min_choi_eigenvalue(BlockMap::assemble(phi, psi, gamma).to_map());
      worst_neg = std::min(worst_neg, eig);
      s.expect(eig <= -1e-6,
               at_instance(("violation too shallow: " + fmt(eig)).c_str(), i));
    }
  }
  return "200 couplings decided; deepest violation " + std::string(fmt(worst_neg));
}

// ---- criterion 4: idempotent couplings of a state with itself -------------

std::string suite_idempotent_classification(Suite& s, Rng& rng) {
  double worst_rec = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Index k = irand(rng, 2, 4);
    const EigenvalueList list = gapped_list(k, rng, true, false);
    const CMatrix omega = diag_of(list);
    const State rho{omega};
    const CMatrix x = random_unitary_commuting_with(omega, rng);
    const MatrixMap sigma = coupling_sigma(x, omega);
    const MatrixMap phi = RankOneMap(k, rho).as_map();

    s.expect(is_corner(sigma, phi, phi), at_instance("commuting coupling rejected", i));
    const double idem = sigma.compose(sigma).distance(sigma);
    s.expect(idem <= 1e-9, at_instance(("not idempotent: " + fmt(idem)).c_str(), i));
    const auto recovered = classify_idempotent_corner(sigma, rho);
    s.expect(recovered.has_value(), at_instance("recognition failed", i));
    if (!recovered) return {};
    const double rec = phase_aligned_distance(*recovered, x);
    worst_rec = std::max(worst_rec, rec);
    s.expect(rec <= 1e-8, at_instance(("recovered matrix off by " + fmt(rec)).c_str(), i));
  }
  for (int i = 0; i < 50; ++i) {
    const Index k = irand(rng, 2, 4);
    const EigenvalueList list = gapped_list(k, rng, true, true);
    const CMatrix omega = diag_of(list);
    CMatrix x;
    double comm = 0.0;
    for (int tries = 0; tries < 100; ++tries) {
      x = random_unitary(k, rng);
      comm = (x * omega - omega * x).norm();
      if (comm >= 0.05) break;
    }
    s.expect(comm >= 0.05, at_instance("could not draw a non-commuting unitary", i));
    const State rho{omega};
    const MatrixMap sigma = coupling_sigma(x, omega);
    s.expect(!classify_idempotent_corner(sigma, rho).has_value(),
             at_instance("non-commuting coupling classified", i));
    s.expect(!is_corner(sigma, RankOneMap(k, rho).as_map(), RankOneMap(k, rho).as_map()),
             at_instance("non-commuting coupling accepted", i));
  }
  return "100 recoveries (worst " + std::string(fmt(worst_rec)) + "), 50 rejections";
}

// ---- criterion 5: the boundary circle of the scalar family ----------------

std::string suite_disk_boundary(Suite& s, Rng& rng) {
  const std::vector<double> grid = default_t_grid();
  for (int i = 0; i < 80; ++i) {
    const bool on_circle = i < 40;
    const double theta = 2.0 * kPi * static_cast<double>(i % 40) / 40.0;
    const Complex lambda = circle_point(on_circle ? 0.5 : 0.55, theta);

    const Index k = irand(rng, 1, 2);
    const Index n = irand(rng, k, 3);
    const Index nprime = irand(rng, k, 3);
    const EigenvalueList mu = random_list(k, rng);
    const QCornerParams params = make_params(mu, n, nprime, lambda, rng, false);
    const MatrixMap gamma = build_q_corner(mu, params);
    const RankOneMap phi = rank_one_from_list(mu, n);
    const RankOneMap psi = rank_one_from_list(mu, nprime);

    const QPositivityReport rep = is_q_corner(gamma, phi, psi, grid);
    const bool closed_form = std::norm(lambda) <= lambda.real() + 1e-10;
    s.expect(closed_form == on_circle, at_instance("sweep geometry is off", i));
    s.expect(rep.verdict == closed_form, at_instance("verdict disagrees with the disk", i));
    if (!on_circle) {
      s.expect(rep.failing_t.has_value() && *rep.failing_t <= 1e4,
               at_instance("no failing parameter at or below 1e4", i));
    }

    // Pointwise agreement between the scalar inequality and the scanned
    // bottom eigenvalue, wherever double precision can resolve the sign.
    const MatrixMap theta_map = assemble_template(mu, params).to_map();
    const std::vector<double> values =
        detail::scan_resolvent_choi(theta_map, nullptr, grid, Exec::parallel);
    const double mu_min = mu.values.back();
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double t = grid[g];
      const double margin =
          (1.0 + 2.0 * t * lambda.real()) - std::norm(lambda) * (1.0 + 2.0 * t);
      const bool cond = disk_condition_at(lambda, t);
      const double shifted = std::abs(Complex(1.0, 0.0) + t * lambda);
      const double denom =
          (1.0 + t) * shifted * (shifted + std::abs(lambda) * (1.0 + t));
      const double predicted = denom > 0 ? mu_min * std::abs(margin) / denom : 0.0;
      if (margin >= 1e-6) {
        s.expect(cond, at_instance("inequality check flipped positive margin", i));
        s.expect(values[g] >= -1e-8,
                 at_instance(("negative eigenvalue on a passing point: " + fmt(values[g])).c_str(),
                             i));
      } else if (margin <= -1e-6 && predicted > 1e-7) {
        s.expect(!cond, at_instance("inequality check flipped negative margin", i));
        s.expect(values[g] < -0.4 * predicted,
                 at_instance(("violation shallower than predicted: " + fmt(values[g])).c_str(),
                             i));
      }
    }
    if (!s.ok) return {};
  }
  return "80 sweep points matched the scalar inequality on the whole grid";
}

// ---- criterion 6: splitting the resolvent of the assembled family ---------

std::string suite_resolvent_splitting(Suite& s, Rng& rng) {
  const std::array<double, 10> ts{0.0, 1e-3, 1e-2, 0.1, 1.0, 5.0, 10.0, 100.0, 1e3, 1e4};
  double worst_split = 0.0, worst_scalar = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Index k = irand(rng, 1, 3);
    const Index n = irand(rng, k, 4);
    const Index nprime = irand(rng, k, 4);
    const EigenvalueList mu = random_list(k, rng);
    const double r = i % 5 == 0 ? 1.0 : urand(rng, 0.0, 1.0);
    const Complex lambda = circle_point(0.5 * r, urand(rng, 0.0, 2.0 * kPi));
    const BlockMap theta = assemble_template(mu, make_params(mu, n, nprime, lambda, rng, false));
    for (double t : ts) {
      const ResolventDecomposition dec = decompose_resolvent(theta, t);
      worst_split = std::max(worst_split, dec.residual);
      worst_scalar = std::max(worst_scalar, dec.gamma_formula_residual);
      s.expect(dec.residual <= 1e-9,
               at_instance(("splitting residual " + fmt(dec.residual) + " at t=" + fmt(t)).c_str(),
                           i));
      s.expect(dec.gamma_formula_residual <= 1e-10,
               at_instance(("scalar form residual " + fmt(dec.gamma_formula_residual) +
                            " at t=" + fmt(t))
                               .c_str(),
                           i));
    }
    if (!s.ok) return {};
  }
  return "500 decompositions; worst residuals " + std::string(fmt(worst_split)) + " / " +
         std::string(fmt(worst_scalar));
}

// ---- criterion 7: the four-way maximality decision ------------------------

std::string suite_maximality_decision(Suite& s, Rng& rng) {
  int false_cases = 0;
  double worst_dom = 0.0, worst_qpos = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int cls = i % 4;
    Index k = 0, n = 0, nprime = 0;
    CMatrix e;
    Complex lambda;
    if (cls == 0) {
      k = irand(rng, 1, 3);
      n = nprime = irand(rng, k, 4);
      e = haar_or_empty(n - k, rng);
      double th = urand(rng, 0.0, 2.0 * kPi);
      while (std::abs(std::cos(th / 2.0)) < 0.15) th = urand(rng, 0.0, 2.0 * kPi);
      lambda = circle_point(0.5, th);
    } else if (cls == 1) {
      k = irand(rng, 1, 2);
      n = nprime = irand(rng, k + 1, 4);
      e = 0.9 * contraction_or_empty(n - k, n - k, rng);
      lambda = circle_point(0.5, urand(rng, 0.0, 2.0 * kPi));
    } else if (cls == 2) {
      k = irand(rng, 1, 3);
      n = nprime = irand(rng, k, 4);
      e = haar_or_empty(n - k, rng);
      lambda = circle_point(0.5 * urand(rng, 0.1, 0.85), urand(rng, 0.0, 2.0 * kPi));
    } else if (i % 8 == 3) {
      k = irand(rng, 1, 2);
      n = irand(rng, k, 4);
      nprime = n;
      while (nprime == n) nprime = irand(rng, k, 4);
      e = contraction_or_empty(n - k, nprime - k, rng);
      lambda = circle_point(0.5, urand(rng, 0.0, 2.0 * kPi));
    } else {
      k = irand(rng, 1, 3);
      n = nprime = irand(rng, k, 4);
      e = haar_or_empty(n - k, rng);
      lambda = Complex(0.0, 0.0);
    }

    const EigenvalueList mu = random_list(k, rng);
    QCornerParams params;
    params.k = k;
    params.n = n;
    params.nprime = nprime;
    params.x = random_unitary_commuting_with(diag_of(mu), rng);
    params.e = e;
    params.lambda = lambda;

    const bool closed_form = n == nprime && unitary_within(e, 1e-8) &&
                             std::abs(lambda) > 1e-8 &&
                             std::abs(std::norm(lambda) - lambda.real()) <= 1e-8;
    const HyperMaxVerdict v = is_hyper_maximal(params, mu);
    s.expect(v.verdict == closed_form, at_instance("decision disagrees with closed form", i));
    if (v.verdict) {
      s.expect(!v.witness.has_value(), at_instance("positive verdict carries a witness", i));
    } else {
      ++false_cases;
      s.expect(v.witness.has_value(), at_instance("negative verdict without witness", i));
      if (!v.witness) return {};
      const MatrixMap gamma = build_q_corner(mu, params);
      s.expect(v.witness->gamma.distance(gamma) <= 1e-10,
               at_instance("witness changed the off-diagonal block", i));
      s.expect(v.witness_distance >= 1e-3,
               at_instance(("witness too close: " + fmt(v.witness_distance)).c_str(), i));
      worst_dom = std::min(worst_dom, v.min_domination_eig);
      worst_qpos = std::min(worst_qpos, v.min_witness_qpos_eig);
      s.expect(v.min_domination_eig >= -1e-8,
               at_instance(("domination margin " + fmt(v.min_domination_eig)).c_str(), i));
      s.expect(v.min_witness_qpos_eig >= -1e-8,
               at_instance(("witness positivity margin " + fmt(v.min_witness_qpos_eig)).c_str(),
                           i));
    }
    if (!s.ok) return {};
  }
  return std::to_string(false_cases) + " witnesses certified, margins above " +
         fmt(std::min(worst_dom, worst_qpos));
}

// ---- criterion 8: verdicts survive changes of frame -----------------------

// Encodes verdict-or-error so frames can be compared uniformly.
int maximality_fingerprint(const QCornerParams& params, const EigenvalueList& mu) {
  try {
    return is_hyper_maximal(params, mu).verdict ? 1 : 0;
  } catch (const Error& e) {
    return 2 + static_cast<int>(e.code());
  }
}

std::string suite_frame_equivariance(Suite& s, Rng& rng) {
  const std::vector<double> grid = default_t_grid();
  for (int i = 0; i < 50; ++i) {
    const Index k = irand(rng, 1, 2);
    const Index n = irand(rng, k, 3);
    const Index nprime = irand(rng, k, 3);
    const EigenvalueList mu = random_list(k, rng);

    Complex lambda;
    if (i % 3 == 0) {
      double th = urand(rng, 0.0, 2.0 * kPi);
      while (std::abs(std::cos(th / 2.0)) < 0.15) th = urand(rng, 0.0, 2.0 * kPi);
      lambda = circle_point(0.5, th);
    } else if (i % 3 == 1) {
      lambda = circle_point(0.5 * urand(rng, 0.1, 0.85), urand(rng, 0.0, 2.0 * kPi));
    } else {
      lambda = circle_point(0.55, urand(rng, 0.0, 2.0 * kPi));
    }
    const bool unitary_e = n == nprime && i % 2 == 0;
    const QCornerParams params = make_params(mu, n, nprime, lambda, rng, unitary_e);

    const MatrixMap gamma = build_q_corner(mu, params);
    const RankOneMap phi = rank_one_from_list(mu, n);
    const RankOneMap psi = rank_one_from_list(mu, nprime);
    const bool before = is_q_corner(gamma, phi, psi, grid).verdict;

    const CMatrix u = random_unitary(n, rng);
    const CMatrix v = random_unitary(nprime, rng);
    const MatrixMap moved = transport(gamma, u, v);
    const auto phi_u = RankOneMap::from_map(conjugate_map(phi.as_map(), u));
    const auto psi_v = RankOneMap::from_map(conjugate_map(psi.as_map(), v));
    s.expect(phi_u.has_value() && psi_v.has_value(),
             at_instance("conjugated diagonal maps not recognized", i));
    if (!phi_u || !psi_v) return {};
    const bool after = is_q_corner(moved, *phi_u, *psi_v, grid).verdict;
    s.expect(before == after, at_instance("q-corner verdict changed under transport", i));

    // Pull the transported block back into the eigenbasis of the conjugated
    // states and compare the maximality decision there.
    const CMatrix wu = diagonalizing_unitary(phi_u->state());
    const CMatrix wv = diagonalizing_unitary(psi_v->state());
    const MatrixMap back = transport(moved, wu, wv);
    const auto again = recognize_q_corner(back, mu, n, nprime);
    s.expect(again.has_value(), at_instance("transported block no longer recognized", i));
    if (!again) return {};
    s.expect(maximality_fingerprint(params, mu) == maximality_fingerprint(*again, mu),
             at_instance("maximality verdict changed under transport", i));
    if (!s.ok) return {};
  }
  return "50 transports preserved both verdicts";
}

// ---- criterion 9: the conjugacy decision table ----------------------------

RankOneMap rotated_map(const EigenvalueList& list, Index n, Rng& rng) {
  const MatrixMap m =
      conjugate_map(rank_one_from_list(list, n).as_map(), random_unitary(n, rng));
  return RankOneMap::from_map(m).value();
}

std::string suite_conjugacy_decisions(Suite& s, Rng& rng) {
  const PowersWeightTag shared{WeightKind::TypeII_FormF, "w0"};
  const PowersWeightTag other_special{WeightKind::TypeII_FormF, "w1"};
  const PowersWeightTag general{WeightKind::TypeII_General, "g0"};

  // The three pinned cases.
  const EigenvalueList two{{0.6, 0.4}};
  const EigenvalueList three{{0.5, 0.3, 0.2}};
  {
    const RankOneMap a = rotated_map(two, 3, rng);
    const RankOneMap b = rotated_map(two, 3, rng);
    const CocycleVerdict same = decide_cocycle(a, b, shared, shared);
    s.expect(same.outcome == CocycleOutcome::CocycleConjugate, "matched pair not accepted");
    s.expect(same.n == 3 && same.nprime == 3, "dimensions not surfaced");

    const auto corner = hyper_maximal_corner_between(a, b);
    s.expect(corner.has_value(), "no connecting block for a matched pair");
    if (corner) {
      s.expect(is_hyper_maximal(corner->params, two).verdict,
               "connecting block is not maximal");
      const MatrixMap gamma = transport(build_q_corner(two, corner->params),
                                        corner->u.adjoint(), corner->v.adjoint());
      s.expect(is_q_corner(gamma, a, b, default_t_grid()).verdict,
               "connecting block fails the scan in the original frame");
    }

    const RankOneMap c = rotated_map(three, 3, rng);
    s.expect(decide_cocycle(a, c, shared, shared).outcome ==
                 CocycleOutcome::NotCocycleConjugate,
             "different spectra accepted (special tags)");
    s.expect(decide_cocycle(a, c, general, general).outcome ==
                 CocycleOutcome::NotCocycleConjugate,
             "different spectra accepted (general tags)");

    const RankOneMap small = rotated_map(two, 2, rng);
    s.expect(decide_cocycle(small, b, shared, shared).outcome ==
                 CocycleOutcome::NotCocycleConjugate,
             "dimension gap accepted");
    s.expect(decide_cocycle(a, a, shared, shared).outcome ==
                 CocycleOutcome::CocycleConjugate,
             "reflexivity broken");
  }

  for (int i = 0; i < 50; ++i) {
    const Index k = irand(rng, 1, 3);
    EigenvalueList la = random_list(k, rng);
    EigenvalueList lb = la;
    const int shape = i % 5;
    if (shape == 3) {
      lb.values[0] += 0.05;
      double sum = 0;
      for (double x : lb.values) sum += x;
      for (auto& x : lb.values) x /= sum;
    } else if (shape == 4) {
      lb = random_list(k == 3 ? 2 : k + 1, rng);
    }
    const Index n = irand(rng, la.k(), 4);
    const Index nprime = irand(rng, lb.k(), 4);

    PowersWeightTag nu = shared, eta = shared;
    const int tags = i % 4;
    if (tags == 1) eta = other_special;
    if (tags == 2) eta = general;
    if (tags == 3) nu = eta = general;

    const RankOneMap phi = rotated_map(la, n, rng);
    const RankOneMap psi = rotated_map(lb, nprime, rng);

    CocycleOutcome expected;
    if (!lists_equal(la, lb, 1e-8)) {
      expected = CocycleOutcome::NotCocycleConjugate;
    } else if (nu.kind == WeightKind::TypeII_FormF && nu == eta) {
      expected = n == nprime ? CocycleOutcome::CocycleConjugate
                             : CocycleOutcome::NotCocycleConjugate;
    } else {
      expected = CocycleOutcome::Inconclusive;
    }

    const CocycleVerdict verdict = decide_cocycle(phi, psi, nu, eta);
    s.expect(verdict.outcome == expected, at_instance("table entry wrong", i));
    s.expect(decide_cocycle(psi, phi, eta, nu).outcome == verdict.outcome,
             at_instance("argument swap changed the outcome", i));
    const RankOneMap phi2 =
        RankOneMap::from_map(conjugate_map(phi.as_map(), random_unitary(n, rng))).value();
    const RankOneMap psi2 =
        RankOneMap::from_map(conjugate_map(psi.as_map(), random_unitary(nprime, rng))).value();
    s.expect(decide_cocycle(phi2, psi2, nu, eta).outcome == verdict.outcome,
             at_instance("conjugation changed the outcome", i));
    if (!s.ok) return {};
  }
  return "3 pinned cases plus 50 randomized decisions matched the table";
}

CriterionResult run_one(int number, const char* name, std::uint64_t seed,
                        std::string (*body)(Suite&, Rng&)) {
  Suite s;
  Rng rng(seed);
  std::string note;
  try {
    note = body(s, rng);
  } catch (const std::exception& e) {
    s.expect(false, std::string("unexpected exception: ") + e.what());
  }
  return CriterionResult{number, name, s.ok, s.ok ? note : s.failure};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
  Rng master(seed);
  std::array<std::uint64_t, 9> seeds{};
  for (auto& x : seeds) x = master();

  std::vector<CriterionResult> out;
  out.push_back(run_one(1, "choi-kraus-round-trip", seeds[0], suite_round_trip));
  out.push_back(run_one(2, "limit-idempotent", seeds[1], suite_limit_idempotent));
  out.push_back(run_one(3, "coupling-norm-criterion", seeds[2], suite_contraction_criterion));
  out.push_back(run_one(4, "idempotent-classification", seeds[3], suite_idempotent_classification));
  out.push_back(run_one(5, "disk-boundary-sweep", seeds[4], suite_disk_boundary));
  out.push_back(run_one(6, "resolvent-splitting", seeds[5], suite_resolvent_splitting));
  out.push_back(run_one(7, "maximality-decision", seeds[6], suite_maximality_decision));
  out.push_back(run_one(8, "frame-equivariance", seeds[7], suite_frame_equivariance));
  out.push_back(run_one(9, "conjugacy-decision-table", seeds[8], suite_conjugacy_decisions));
  return out;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return !results.empty();
}

}  // namespace qmaps
