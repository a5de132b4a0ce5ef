#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "qmaps/corners.hpp"
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

MatrixMap averaging_map(const CMatrix& omega) {
  const Index n = omega.rows();
  return MatrixMap::from_function({n, n, n, n}, [&](const CMatrix& a) {
    return CMatrix((a * omega).trace() * CMatrix::Identity(n, n));
  });
}

// sigma(B) = tr(X* B Omega) X on square blocks.
MatrixMap coupling_map(const CMatrix& x, const CMatrix& omega) {
  const Index k = x.rows();
  return MatrixMap::from_function({k, k, k, k}, [&](const CMatrix& b) {
    return CMatrix((x.adjoint() * b * omega).trace() * x);
  });
}

CMatrix diag3(double a, double b, double c) {
  CMatrix m = CMatrix::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

}  // namespace

TEST_CASE("assembled block maps act blockwise") {
  CMatrix omega = CMatrix::Zero(2, 2);
  omega(0, 0) = 0.7;
  omega(1, 1) = 0.3;
  MatrixMap phi = averaging_map(omega);
  MatrixMap psi = MatrixMap::identity(1, 1);
  MatrixMap gamma = MatrixMap::identity(2, 1) * Complex{0.5, 0.0};
  BlockMap theta = BlockMap::assemble(phi, psi, gamma);
  CHECK(theta.n == 2);
  CHECK(theta.nprime == 1);

  MatrixMap full = theta.to_map();
  CHECK(full.shape().in_rows == 3);
  CMatrix m(3, 3);
  m << 1.0, 2.0, Complex{0.0, 1.0},
       3.0, -1.0, 0.0,
       Complex{0.0, -1.0}, 0.0, 4.0;
  CMatrix out = full.apply(m);
  // Top-left: tr(B omega) I with B = [[1,2],[3,-1]].
  const Complex top = 1.0 * 0.7 + (-1.0) * 0.3;
  CHECK(std::abs(out(0, 0) - top) < 1e-13);
  CHECK(std::abs(out(1, 1) - top) < 1e-13);
  CHECK(std::abs(out(0, 1)) < 1e-13);
  // Corners scaled by 1/2, lower-left through the conjugate map.
  CHECK(std::abs(out(0, 2) - Complex{0.0, 0.5}) < 1e-13);
  CHECK(std::abs(out(2, 0) - Complex{0.0, -0.5}) < 1e-13);
  CHECK(std::abs(out(2, 2) - 4.0) < 1e-13);
  // Hermitian in, Hermitian out.
  CHECK(inf_norm(CMatrix(out - out.adjoint())) < 1e-13);
}

TEST_CASE("assemble rejects mismatched blocks") {
  MatrixMap phi = MatrixMap::identity(2, 2);
  MatrixMap psi = MatrixMap::identity(3, 3);
  CHECK(thrown_code([&] { BlockMap::assemble(phi, psi, MatrixMap::identity(2, 2)); }) ==
        Err::DimensionMismatch);
}

TEST_CASE("scalar corner between scalar algebras, by hand") {
  MatrixMap one = MatrixMap::identity(1, 1);
  auto corner = [&](Complex c) { return MatrixMap(MapShape{1, 1, 1, 1},
                                                  CMatrix::Constant(1, 1, c)); };
  CHECK(is_corner(corner(Complex{1.0, 0.0}), one, one));
  CHECK(is_corner(corner(Complex{0.0, 0.6}), one, one));
  // The assembled Choi core is [[1, c], [conj c, 1]]: |c| <= 1 is the line.
  CHECK_FALSE(is_corner(corner(Complex{2.0, 0.0}), one, one));
  CHECK(thrown_code([&] { is_corner(one, one * Complex{-1.0, 0.0}, one); }) ==
        Err::NotCPDiagonal);
}

TEST_CASE("corner_from_contraction always produces corners") {
  Rng rng(53);
  KrausSet s_ops = make_kraus({ginibre(2, 2, rng), ginibre(2, 2, rng)});
  KrausSet t_ops = make_kraus({ginibre(3, 3, rng), ginibre(3, 3, rng)});
  MatrixMap phi = map_from_kraus(s_ops);
  MatrixMap psi = map_from_kraus(t_ops);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    CMatrix c = random_contraction(2, 2, seed);
    MatrixMap gamma = corner_from_contraction(s_ops, t_ops, c);
    CHECK(gamma.shape().in_rows == 2);
    CHECK(gamma.shape().in_cols == 3);
    CHECK(is_corner(gamma, phi, psi));
  }
  CHECK(thrown_code([&] {
    corner_from_contraction(s_ops, t_ops, CMatrix(CMatrix::Identity(2, 2) * 1.5));
  }) == Err::ContractionNormExceeded);
}

TEST_CASE("classify recovers a diagonal-phase coupling") {
  CMatrix omega = diag3(0.5, 0.3, 0.2);
  CMatrix x = CMatrix::Zero(3, 3);
  x(0, 0) = 1.0;
  x(1, 1) = std::polar(1.0, 1.1);
  x(2, 2) = std::polar(1.0, -0.4);
  MatrixMap sigma = coupling_map(x, omega);
  std::optional<CMatrix> hit = classify_idempotent_corner(sigma, State(omega));
  REQUIRE(hit.has_value());
  CHECK(inf_norm(*hit - phase_normalized(x)) < 1e-8);
  // Sanity: the recovered matrix rebuilds the map.
  CHECK(coupling_map(*hit, omega).distance(sigma) < 1e-8);
}

TEST_CASE("classify recovers a block coupling over a repeated weight") {
  CMatrix omega = diag3(0.4, 0.4, 0.2);
  CMatrix x = random_unitary_commuting_with(omega, 61u);
  MatrixMap sigma = coupling_map(x, omega);
  std::optional<CMatrix> hit = classify_idempotent_corner(sigma, State(omega));
  REQUIRE(hit.has_value());
  CHECK(inf_norm(*hit - phase_normalized(x)) < 1e-8);
}

TEST_CASE("classify turns away maps outside the family") {
  CMatrix omega = diag3(0.5, 0.3, 0.2);
  State rho(omega);
  // Idempotent of rank > 1.
  CHECK_FALSE(classify_idempotent_corner(MatrixMap::identity(3, 3), rho).has_value());
  // Zero map.
  CHECK_FALSE(classify_idempotent_corner(MatrixMap::zero({3, 3, 3, 3}), rho).has_value());
  // Non-unitary range matrix, normalized to stay idempotent.
  CMatrix y = diag3(2.0, 1.0, 1.0) / std::sqrt(2.5);
  CHECK_FALSE(classify_idempotent_corner(coupling_map(y, omega), rho).has_value());
  // Unitary but not commuting with omega.
  CMatrix swap = CMatrix::Zero(3, 3);
  swap(0, 1) = swap(1, 0) = swap(2, 2) = 1.0;
  CHECK_FALSE(classify_idempotent_corner(coupling_map(swap, omega), rho).has_value());
  // Not idempotent at all.
  MatrixMap half = coupling_map(CMatrix::Identity(3, 3), omega) * Complex{0.5, 0.0};
  CHECK(thrown_code([&] { classify_idempotent_corner(half, rho); }) == Err::NotIdempotent);
  // Deficient reference state.
  CHECK(thrown_code([&] {
    classify_idempotent_corner(coupling_map(CMatrix::Identity(3, 3), omega),
                               State(diag3(0.7, 0.3, 0.0)));
  }) == Err::NotFaithfulState);
}

TEST_CASE("sigma_limit rescales a scalar multiple of an idempotent") {
  CMatrix omega = diag3(0.5, 0.3, 0.2);
  MatrixMap sigma = coupling_map(CMatrix::Identity(3, 3), omega);
  MatrixMap gamma = sigma * Complex{0.7, 0.0};
  CHECK(sigma_limit(gamma).distance(sigma) < 1e-6);
  // A complex eigenvalue off the negative axis is fine too.
  MatrixMap tilted = sigma * Complex{0.3, 0.4};
  CHECK(sigma_limit(tilted).distance(sigma) < 1e-6);
}

TEST_CASE("sigma_limit refuses divergent and backward maps") {
  // Nilpotent action: t gamma (1 + t gamma)^{-1} = t gamma grows without bound.
  MatrixMap nilpotent(MapShape{2, 2, 2, 2}, matrix_unit(4, 4, 0, 1));
  CHECK(thrown_code([&] { sigma_limit(nilpotent); }) == Err::LimitDiverged);
  MatrixMap backward = MatrixMap::identity(2, 2) * Complex{-0.5, 0.0};
  CHECK(thrown_code([&] { sigma_limit(backward); }) == Err::NotNonNegativeSpectrum);
}
