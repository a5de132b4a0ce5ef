#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <optional>
#include <vector>

#include "qmaps/cpmap.hpp"
#include "qmaps/kernel.hpp"

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

MatrixMap transpose_map(Index n) {
  return MatrixMap::from_function({n, n, n, n},
                                  [](const CMatrix& a) { return CMatrix(a.transpose()); });
}

// phi(A) = sum_i S_i A S_i* computed directly, bypassing map_from_kraus.
CMatrix kraus_apply(const std::vector<CMatrix>& ops, const CMatrix& a) {
  CMatrix out = CMatrix::Zero(ops[0].rows(), ops[0].rows());
  for (const CMatrix& s : ops) out += s * a * s.adjoint();
  return out;
}

}  // namespace

TEST_CASE("Choi matrix of the identity map, entry by entry") {
  ChoiMatrix choi = choi_of(MatrixMap::identity(2, 2));
  REQUIRE(choi.matrix.rows() == 4);
  // Block (i,j) holds e_ij, so exactly four entries are 1.
  CMatrix expect = CMatrix::Zero(4, 4);
  expect(0, 0) = expect(0, 3) = expect(3, 0) = expect(3, 3) = 1.0;
  CHECK(inf_norm(choi.matrix - expect) < 1e-15);
  HermitianEig eig = hermitian_eig(choi.matrix);
  CHECK(eig.eigenvalues(3) == doctest::Approx(2.0));
  CHECK(eig.eigenvalues(2) == doctest::Approx(0.0));
}

TEST_CASE("Choi matrix of the transpose is the flip") {
  ChoiMatrix choi = choi_of(transpose_map(2));
  CMatrix expect = CMatrix::Zero(4, 4);
  expect(0, 0) = expect(1, 2) = expect(2, 1) = expect(3, 3) = 1.0;
  CHECK(inf_norm(choi.matrix - expect) < 1e-15);
  // Eigenvalues {-1, 1, 1, 1}: positive on matrices, not completely positive.
  CHECK(min_choi_eigenvalue(transpose_map(2)) == doctest::Approx(-1.0));
  CHECK_FALSE(is_completely_positive(transpose_map(2)));
  CHECK(is_completely_positive(MatrixMap::identity(2, 2)));
}

TEST_CASE("choi_of and map_from_choi invert each other") {
  Rng rng(5);
  MatrixMap phi = MatrixMap::algebra_map(2, 3, ginibre(9, 4, rng));
  ChoiMatrix choi = choi_of(phi);
  CHECK(choi.dim_in == 2);
  CHECK(choi.dim_out == 3);
  CHECK(map_from_choi(choi).distance(phi) < 1e-12);
}

TEST_CASE("single Kraus operator gives a rank-one Choi matrix") {
  Rng rng(9);
  CMatrix s = ginibre(2, 3, rng);
  MatrixMap phi = map_from_kraus(make_kraus({s}));
  CMatrix a = ginibre(3, 3, rng);
  CHECK(inf_norm(phi.apply(a) - s * a * s.adjoint()) < 1e-12);
  CVector vs = vec(s);
  CHECK(inf_norm(choi_of(phi).matrix - vs * vs.adjoint()) < 1e-12);
}

TEST_CASE("make_kraus rejects dependent and mismatched sets") {
  Rng rng(13);
  CMatrix s = ginibre(2, 2, rng);
  CHECK(thrown_code([&] { make_kraus({s, CMatrix(2.0 * s)}); }) == Err::BadInput);
  CHECK(thrown_code([&] { make_kraus({s, ginibre(3, 2, rng)}); }) == Err::DimensionMismatch);
  CHECK(thrown_code([] { return make_kraus({}); }) == Err::BadInput);
}

TEST_CASE("kraus_decompose round trips a random CP map") {
  Rng rng(17);
  std::vector<CMatrix> ops = {ginibre(3, 2, rng), ginibre(3, 2, rng)};
  MatrixMap phi = map_from_kraus(make_kraus(ops));
  KrausSet recovered = kraus_decompose(phi);
  REQUIRE(recovered.operators.size() == 2);
  CHECK(map_from_kraus(recovered).distance(phi) < 1e-10);
  // Descending weights, trace-orthogonal, phase-fixed.
  double w0 = recovered.operators[0].squaredNorm();
  double w1 = recovered.operators[1].squaredNorm();
  CHECK(w0 >= w1);
  Complex cross = (recovered.operators[0].adjoint() * recovered.operators[1]).trace();
  CHECK(std::abs(cross) < 1e-10);
  for (const CMatrix& op : recovered.operators)
    CHECK(inf_norm(phase_normalized(op) - op) < 1e-12);
  // Independent route: recovered operators reproduce the action pointwise.
  CMatrix a = ginibre(2, 2, rng);
  CHECK(inf_norm(kraus_apply(recovered.operators, a) - phi.apply(a)) < 1e-11);
}

TEST_CASE("kraus_decompose refuses maps that are not CP") {
  CHECK(thrown_code([] { kraus_decompose(transpose_map(2)); }) == Err::NotCP);
}

TEST_CASE("amplification reproduces the Choi matrix on the unit pattern") {
  Rng rng(23);
  MatrixMap phi = map_from_kraus(make_kraus({ginibre(2, 2, rng), ginibre(2, 2, rng)}));
  // The block matrix with (i,j) block e_ij; feeding it through id (x) phi
  // must land exactly on the Choi matrix.
  Index n = 2;
  CMatrix pattern = CMatrix::Zero(n * n, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      pattern.block(i * n, j * n, n, n) = matrix_unit(n, n, i, j);
  MatrixMap amp = amplification(phi, n);
  CHECK(inf_norm(amp.apply(pattern) - choi_of(phi).matrix) < 1e-12);
}

TEST_CASE("amplification of a CP map stays CP and scales the identity") {
  Rng rng(29);
  MatrixMap phi = map_from_kraus(make_kraus({ginibre(2, 2, rng)}));
  MatrixMap amp = amplification(phi, 3);
  CHECK(amp.shape().in_rows == 6);
  CHECK(is_completely_positive(amp));
  MatrixMap id_amp = amplification(MatrixMap::identity(2, 2), 3);
  CHECK(id_amp.distance(MatrixMap::identity(6, 6)) < 1e-13);
  // Transpose fails complete positivity through its amplification as well.
  CHECK_FALSE(is_completely_positive(amplification(transpose_map(2), 2)));
}

TEST_CASE("sums and scalings of CP maps") {
  Rng rng(31);
  MatrixMap f = map_from_kraus(make_kraus({ginibre(2, 2, rng)}));
  MatrixMap g = map_from_kraus(make_kraus({ginibre(2, 2, rng)}));
  CHECK(is_completely_positive(f + g));
  CHECK(is_completely_positive(f * Complex{0.25, 0.0}));
  CHECK_FALSE(is_completely_positive(f * Complex{-1.0, 0.0}));
}

TEST_CASE("check_faf holds for a map annihilating a corner projection") {
  // phi(A) = tr(A Omega) 1 with Omega supported on the first two coordinates
  // of a three-dimensional space kills e = diag(0,0,1).
  CMatrix omega = CMatrix::Zero(3, 3);
  omega(0, 0) = 0.6;
  omega(1, 1) = 0.4;
  MatrixMap phi = MatrixMap::from_function({3, 3, 3, 3}, [&](const CMatrix& a) {
    return CMatrix((a * omega).trace() * CMatrix::Identity(3, 3));
  });
  CMatrix e = CMatrix::Zero(3, 3);
  e(2, 2) = 1.0;
  CHECK(check_faf(phi, e));
}

TEST_CASE("check_faf rejects maps that see the projection") {
  CMatrix e = CMatrix::Zero(2, 2);
  e(1, 1) = 1.0;
  CHECK(thrown_code([&] { check_faf(MatrixMap::identity(2, 2), e); }) ==
        Err::PhiEKilledViolated);
  CHECK(thrown_code([&] { check_faf(transpose_map(2), e); }) == Err::NotCP);
  CMatrix slanted(2, 2);
  slanted << 0.0, 1.0, 0.0, 0.0;
  CHECK(thrown_code([&] { check_faf(MatrixMap::identity(2, 2), slanted); }) ==
        Err::NotProjection);
}
