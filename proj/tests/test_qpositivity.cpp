#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "qmaps/kernel.hpp"
#include "qmaps/qpositivity.hpp"

using namespace qmaps;

namespace {

template <class F>
std::optional<Err> thrown_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// The unital map A -> tr(A Omega) 1 on M_n. Idempotent whenever tr(Omega)=1,
// which makes its resolvent family a closed-form tripwire for everything here.
MatrixMap averaging_map(const CMatrix& omega) {
  const Index n = omega.rows();
  return MatrixMap::from_function({n, n, n, n}, [&](const CMatrix& a) {
    return CMatrix((a * omega).trace() * CMatrix::Identity(n, n));
  });
}

// Entrywise map on M_2 fixing the diagonal and scaling the corners by lambda
// and conj(lambda). CP exactly when |lambda| <= 1; its resolvent family stays
// CP for all t exactly when lambda lies in the disk |lambda - 1/2| <= 1/2.
MatrixMap phase_damp(Complex lambda) {
  CMatrix action = CMatrix::Zero(4, 4);
  action(0, 0) = 1.0;
  action(1, 1) = std::conj(lambda);  // e_10 slot
  action(2, 2) = lambda;             // e_01 slot
  action(3, 3) = 1.0;
  return MatrixMap::algebra_map(2, 2, action);
}

MatrixMap transpose_map(Index n) {
  return MatrixMap::from_function({n, n, n, n},
                                  [](const CMatrix& a) { return CMatrix(a.transpose()); });
}

const CMatrix kOmega2 = [] {
  CMatrix w = CMatrix::Zero(2, 2);
  w(0, 0) = 0.7;
  w(1, 1) = 0.3;
  return w;
}();

}  // namespace

TEST_CASE("t_grid is zero plus log-spaced points") {
  std::vector<double> grid = t_grid(50, 1e-3, 1e4);
  REQUIRE(grid.size() == 51);
  CHECK(grid[0] == 0.0);
  CHECK(grid[1] == doctest::Approx(1e-3));
  CHECK(grid.back() == doctest::Approx(1e4));
  // Constant ratio between consecutive positive points.
  const double ratio = grid[2] / grid[1];
  for (std::size_t i = 2; i + 1 < grid.size(); ++i)
    CHECK(grid[i + 1] / grid[i] == doctest::Approx(ratio).epsilon(1e-10));
  CHECK(default_t_grid() == grid);
  // The witness grid strictly extends the default one.
  std::vector<double> wg = witness_t_grid();
  CHECK(wg.size() > grid.size());
  CHECK(wg.back() >= 1e6);
}

TEST_CASE("resolvent of an idempotent has the scalar closed form") {
  MatrixMap phi = averaging_map(kOmega2);
  for (double t : {0.0, 0.5, 3.0, 1e3}) {
    MatrixMap r = resolvent(phi, t);
    CHECK(r.distance(phi * Complex{1.0 / (1.0 + t), 0.0}) < 1e-11);
  }
}

TEST_CASE("resolvents compose additively in t") {
  Rng rng(41);
  CMatrix g = ginibre(4, 4, rng);
  MatrixMap phi = MatrixMap::algebra_map(2, 2, CMatrix(g / (4.0 * op_norm(g))));
  MatrixMap lhs = resolvent(resolvent(phi, 0.7), 1.3);
  MatrixMap rhs = resolvent(phi, 2.0);
  CHECK(lhs.distance(rhs) < 1e-12);
}

TEST_CASE("resolvent validates and reports poles") {
  MatrixMap phi = MatrixMap::identity(2, 2);
  CHECK(thrown_code([&] { resolvent(phi, -1.0); }) == Err::BadInput);
  MatrixMap negated = phi * Complex{-1.0, 0.0};
  CHECK(thrown_code([&] { resolvent(negated, 1.0); }) == Err::ResolventSingular);
}

TEST_CASE("negative-axis spectrum detection") {
  CHECK(has_no_negative_eigenvalues(MatrixMap::identity(2, 2)));
  CHECK_FALSE(has_no_negative_eigenvalues(MatrixMap::identity(2, 2) * Complex{-1.0, 0.0}));
  // The flip eigenvalue of the transpose action sits at -1.
  CHECK_FALSE(has_no_negative_eigenvalues(transpose_map(2)));
  // Spectrum on the imaginary axis is fine.
  CHECK(has_no_negative_eigenvalues(MatrixMap::identity(2, 2) * Complex{0.0, 1.0}));
}

TEST_CASE("averaging maps pass the grid scan") {
  MatrixMap phi = averaging_map(kOmega2);
  QPositivityReport report = is_q_positive(phi, default_t_grid());
  CHECK(report.verdict);
  CHECK_FALSE(report.failing_t.has_value());
  CHECK(report.method == "sampled");
  CHECK(report.grid.size() == default_t_grid().size());
}

TEST_CASE("phase damping off the disk fails at the predicted parameter") {
  // lambda = 0.9i is CP at t = 0 but |lambda|^2 > Re lambda, so the family
  // leaves CP once (1 - |l|^2) / (2 |l|^2) < t; that threshold is ~0.1173.
  MatrixMap phi = phase_damp(Complex{0.0, 0.9});
  CHECK(is_completely_positive(phi));
  QPositivityReport report = is_q_positive(phi, default_t_grid());
  CHECK_FALSE(report.verdict);
  REQUIRE(report.failing_t.has_value());
  CHECK(*report.failing_t > 0.117);
  CHECK(*report.failing_t < 0.2);
  REQUIRE(report.min_choi_eig_at_failure.has_value());
  CHECK(*report.min_choi_eig_at_failure < -1e-9);
  // Inside the disk the same construction survives the whole grid.
  CHECK(is_q_positive(phase_damp(Complex{0.5, 0.5}), default_t_grid()).verdict);
}

TEST_CASE("scan rejects maps with forbidden spectrum or skew Choi") {
  CHECK(thrown_code([] { is_q_positive(transpose_map(2), default_t_grid()); }) ==
        Err::NotNonNegativeSpectrum);
  // Left multiplication by e_01 does not preserve Hermiticity.
  CMatrix s = matrix_unit(2, 2, 0, 1);
  MatrixMap skew = MatrixMap::from_function({2, 2, 2, 2},
                                            [&](const CMatrix& a) { return CMatrix(s * a); });
  CHECK(thrown_code([&] { is_q_positive(skew, default_t_grid()); }) == Err::NotHermitianChoi);
}

TEST_CASE("subordination of scalar multiples") {
  MatrixMap phi = averaging_map(kOmega2);
  MatrixMap half = phi * Complex{0.5, 0.0};
  CHECK(q_dominates(phi, phi, default_t_grid()).verdict);
  CHECK(q_dominates(phi, half, default_t_grid()).verdict);
  QPositivityReport rev = q_dominates(half, phi, default_t_grid());
  CHECK_FALSE(rev.verdict);
  REQUIRE(rev.failing_t.has_value());
  CHECK(*rev.failing_t == 0.0);  // already fails at t = 0
}

TEST_CASE("limit idempotent of an averaging map is the map itself") {
  MatrixMap phi = averaging_map(kOmega2);
  CHECK(limit_idempotent(phi).distance(phi) < 1e-6);
  // Scaling shrinks the map but not its limit.
  MatrixMap scaled_down = phi * Complex{0.3, 0.0};
  CHECK(limit_idempotent(scaled_down).distance(phi) < 1e-6);
  MatrixMap zero = MatrixMap::zero({2, 2, 2, 2});
  CHECK(limit_idempotent(zero).distance(zero) < 1e-12);
}

TEST_CASE("limit idempotent enforces the contractive-limit hypothesis") {
  // A -> A_00 diag(1, 3) is idempotent but its limit is not a contraction,
  // so the guarded entry point refuses while the spectral core still works.
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 3.0;
  MatrixMap phi = MatrixMap::from_function({2, 2, 2, 2},
                                           [&](const CMatrix& a) { return CMatrix(a(0, 0) * m); });
  CHECK(thrown_code([&] { limit_idempotent(phi); }) == Err::LimitDiverged);
  MatrixMap core = spectral_limit_idempotent(phi);
  CHECK(core.distance(phi) < 1e-6);
  CHECK(core.compose(core).distance(core) < 1e-8);
}

TEST_CASE("spectral limit thresholds roundoff-size eigenvalues to zero") {
  CMatrix action = CMatrix::Zero(4, 4);
  action(0, 0) = 2.0;
  action(1, 1) = 0.5;
  action(2, 2) = 1e-15;  // below the spectral cutoff and invisible at t = 1e8
  MatrixMap phi = MatrixMap::algebra_map(2, 2, action);
  CMatrix expect = CMatrix::Zero(4, 4);
  expect(0, 0) = 1.0;
  expect(1, 1) = 1.0;
  CHECK(spectral_limit_idempotent(phi).distance(MatrixMap::algebra_map(2, 2, expect)) < 1e-6);
}

TEST_CASE("ambiguous near-zero eigenvalues are refused, not guessed") {
  // 1e-12 falls under the spectral cutoff but is still visible to the
  // large-t resolvent, so the cross-check must fire rather than pick a side.
  CMatrix action = CMatrix::Zero(4, 4);
  action(0, 0) = 2.0;
  action(1, 1) = 1e-12;
  MatrixMap phi = MatrixMap::algebra_map(2, 2, action);
  CHECK(thrown_code([&] { spectral_limit_idempotent(phi); }) == Err::LimitDiverged);
}

TEST_CASE("pole sentinel flows through the detail scan") {
  MatrixMap negated = MatrixMap::identity(2, 2) * Complex{-0.5, 0.0};
  std::vector<double> grid = {0.0, 2.0};
  std::vector<double> values = detail::scan_resolvent_choi(negated, nullptr, grid, Exec::serial);
  REQUIRE(values.size() == 2);
  CHECK(values[1] == detail::kPoleValue);
  QPositivityReport report = detail::report_from_scan(grid, values, 1e-9);
  CHECK_FALSE(report.verdict);
  CHECK(*report.failing_t == 0.0);  // -0.5 id is already not CP at t = 0
}

TEST_CASE("serial and parallel scans agree exactly") {
  MatrixMap phi = phase_damp(Complex{0.0, 0.9});
  QPositivityReport serial = is_q_positive(phi, default_t_grid(), {}, Exec::serial);
  QPositivityReport parallel = is_q_positive(phi, default_t_grid(), {}, Exec::parallel);
  CHECK(serial.verdict == parallel.verdict);
  CHECK(*serial.failing_t == *parallel.failing_t);
  CHECK(*serial.min_choi_eig_at_failure == *parallel.min_choi_eig_at_failure);
}
