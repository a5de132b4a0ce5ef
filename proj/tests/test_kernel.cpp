#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <optional>

#include "qmaps/kernel.hpp"
#include "qmaps/map.hpp"

using namespace qmaps;

namespace {

const Complex I{0.0, 1.0};

template <class F>
std::optional<Err> thrown_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("vec uses column stacking") {
  CMatrix a(2, 2);
  a << 1.0, 3.0, 2.0, 4.0;
  CVector v = vec(a);
  CHECK(v(0).real() == doctest::Approx(1.0));
  CHECK(v(1).real() == doctest::Approx(2.0));  // (1,0) comes before (0,1)
  CHECK(v(2).real() == doctest::Approx(3.0));
  CHECK(v(3).real() == doctest::Approx(4.0));
  CHECK(inf_norm(unvec(v, 2, 2) - a) == doctest::Approx(0.0));
}

TEST_CASE("matrix units and kron") {
  CMatrix u = matrix_unit(2, 3, 1, 2);
  CHECK(u.rows() == 2);
  CHECK(u.cols() == 3);
  CHECK(std::abs(u(1, 2) - 1.0) < 1e-15);
  CHECK(u.cwiseAbs().sum() == doctest::Approx(1.0));

  CMatrix a(2, 2), b(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  b << 0.0, 1.0, 1.0, 0.0;
  CMatrix k = kron(a, b);
  CHECK(k.rows() == 4);
  CHECK(std::abs(k(0, 1) - 1.0) < 1e-15);   // a00 * b01
  CHECK(std::abs(k(2, 1) - 3.0) < 1e-15);   // a10 * b01
  CHECK(std::abs(k(3, 2) - 4.0) < 1e-15);   // a11 * b10
}

TEST_CASE("phase normalization pins the leading entry") {
  CMatrix a(2, 2);
  a << Complex{0.0, 2.0}, Complex{1.0, 0.0}, Complex{0.0, 0.0}, Complex{-1.0, 0.0};
  CMatrix p = phase_normalized(a);
  // Largest-magnitude entry is 2i; dividing out the phase makes it 2.
  CHECK(p(0, 0).real() == doctest::Approx(2.0));
  CHECK(p(0, 0).imag() == doctest::Approx(0.0));
  CHECK(op_norm(p) == doctest::Approx(op_norm(a)));
  // Idempotent: already-normalized input is untouched.
  CHECK(inf_norm(phase_normalized(p) - p) < 1e-14);
}

TEST_CASE("hermitian_eig on the flip matrix") {
  CMatrix a(2, 2);
  a << 0.0, 1.0, 1.0, 0.0;
  HermitianEig eig = hermitian_eig(a);
  REQUIRE(eig.eigenvalues.size() == 2);
  CHECK(eig.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(eig.eigenvalues(1) == doctest::Approx(1.0));
  const double s = 1.0 / std::sqrt(2.0);
  // Phase fixing makes the first component positive real in both columns.
  CHECK(std::abs(eig.eigenvectors(0, 0) - s) < 1e-12);
  CHECK(std::abs(eig.eigenvectors(1, 0) + s) < 1e-12);
  CHECK(std::abs(eig.eigenvectors(0, 1) - s) < 1e-12);
  CHECK(std::abs(eig.eigenvectors(1, 1) - s) < 1e-12);
}

TEST_CASE("hermitian_eig is deterministic on degenerate spectra") {
  CMatrix a = CMatrix::Identity(3, 3) * 2.0;
  a(2, 2) = 5.0;
  HermitianEig first = hermitian_eig(a);
  HermitianEig second = hermitian_eig(a);
  CHECK(inf_norm(first.eigenvectors - second.eigenvectors) == 0.0);
  CHECK((first.eigenvalues - second.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  // Reconstruction sanity.
  CMatrix rebuilt = first.eigenvectors * first.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
                    first.eigenvectors.adjoint();
  CHECK(inf_norm(rebuilt - a) < 1e-12);
}

TEST_CASE("hermitian_eig validates its input") {
  CHECK(thrown_code([] { hermitian_eig(CMatrix::Zero(2, 3)); }) == Err::NotSquare);
  CMatrix a(2, 2);
  a << 0.0, 1.0, 0.0, 0.0;
  CHECK(thrown_code([&] { hermitian_eig(a); }) == Err::NotHermitian);
}

TEST_CASE("min_hermitian_part_eigenvalue symmetrizes first") {
  CMatrix a(2, 2);
  a << 0.0, 2.0, 0.0, 0.0;
  // Hermitian part is the flip matrix; its bottom eigenvalue is -1.
  CHECK(min_hermitian_part_eigenvalue(a) == doctest::Approx(-1.0));
}

TEST_CASE("is_psd tolerates roundoff-size dips only") {
  CMatrix good(2, 2);
  good << 1.0, 0.0, 0.0, 0.0;
  CHECK(is_psd(good));
  CMatrix dip = good;
  dip(1, 1) = -1e-12;
  CHECK(is_psd(dip));
  CMatrix bad = good;
  bad(1, 1) = -1e-3;
  CHECK_FALSE(is_psd(bad));
}

TEST_CASE("polar_unitary on a hand-worked example") {
  CMatrix a(2, 2);
  a << 0.0, -2.0, 3.0, 0.0;
  CMatrix w = polar_unitary(a);
  CMatrix expect(2, 2);
  expect << 0.0, -1.0, 1.0, 0.0;
  CHECK(inf_norm(w - expect) < 1e-12);
  CHECK(thrown_code([] { polar_unitary(CMatrix::Zero(2, 2)); }) == Err::Singular);
}

TEST_CASE("random_unitary is unitary and seed-stable") {
  CMatrix u = random_unitary(4, 7u);
  CHECK(inf_norm(CMatrix(u.adjoint() * u) - CMatrix::Identity(4, 4)) < 1e-12);
  CHECK(inf_norm(u - random_unitary(4, 7u)) == 0.0);
  CHECK(inf_norm(u - random_unitary(4, 8u)) > 1e-3);
}

TEST_CASE("random_unitary_commuting_with respects the block structure") {
  CMatrix omega = CMatrix::Zero(3, 3);
  omega(0, 0) = 0.4;
  omega(1, 1) = 0.4;
  omega(2, 2) = 0.2;
  CMatrix x = random_unitary_commuting_with(omega, 11u);
  CHECK(inf_norm(CMatrix(x.adjoint() * x) - CMatrix::Identity(3, 3)) < 1e-10);
  CHECK(inf_norm(CMatrix(x * omega - omega * x)) < 1e-10);
  // The 0.2 slot is its own block, so the mixed entries vanish.
  CHECK(std::abs(x(0, 2)) < 1e-14);
  CHECK(std::abs(x(2, 1)) < 1e-14);
  // Repeated value 0.4 should actually mix: a diagonal result would be a
  // measure-zero accident for a Haar 2x2 block.
  CHECK(std::abs(x(0, 1)) > 1e-6);
}

TEST_CASE("random_unitary_commuting_with checks the density") {
  Rng rng(3);
  CMatrix full(2, 2);
  full << 0.5, 0.1, 0.1, 0.5;
  CHECK(thrown_code([&] { random_unitary_commuting_with(full, rng); }) == Err::NotDiagonal);
  CMatrix deficient = CMatrix::Zero(2, 2);
  deficient(0, 0) = 1.0;
  CHECK(thrown_code([&] { random_unitary_commuting_with(deficient, rng); }) ==
        Err::NotFaithfulState);
}

TEST_CASE("random_contraction stays inside the unit ball") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CMatrix c = random_contraction(3, 2, seed);
    CHECK(op_norm(c) <= 1.0 + 1e-12);
    CHECK(op_norm(c) > 0.0);
  }
}

TEST_CASE("MatrixMap round trips through from_function") {
  // f(A) = s A s* for a fixed s; from_function must reproduce apply exactly.
  CMatrix s(2, 2);
  s << 1.0, I, 0.0, 2.0;
  MatrixMap f = MatrixMap::from_function({2, 2, 2, 2},
                                         [&](const CMatrix& a) { return CMatrix(s * a * s.adjoint()); });
  CMatrix a(2, 2);
  a << 1.0, 2.0 + I, 3.0, -1.0;
  CHECK(inf_norm(f.apply(a) - s * a * s.adjoint()) < 1e-13);
}

TEST_CASE("MatrixMap compose and identity") {
  MatrixMap id = MatrixMap::identity(2, 2);
  CMatrix s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  MatrixMap f = MatrixMap::from_function({2, 2, 2, 2},
                                         [&](const CMatrix& a) { return CMatrix(s * a); });
  CHECK(f.compose(id).distance(f) < 1e-14);
  CHECK(id.compose(f).distance(f) < 1e-14);
  // Composition order: (f o f)(A) = s^2 A = A here.
  CHECK(f.compose(f).distance(id) < 1e-14);
}

TEST_CASE("conjugate_transpose_map pairs with the original on adjoints") {
  Rng rng(21);
  CMatrix g = ginibre(6, 6, rng);
  MatrixMap f(MapShape{2, 3, 2, 3}, g);
  MatrixMap fc = f.conjugate_transpose_map();
  CHECK(fc.shape().in_rows == 3);
  CHECK(fc.shape().in_cols == 2);
  CMatrix a = ginibre(2, 3, rng);
  CHECK(inf_norm(fc.apply(a.adjoint()) - f.apply(a).adjoint()) < 1e-12);
  // Applying the construction twice gives back the original map.
  CHECK(fc.conjugate_transpose_map().distance(f) < 1e-13);
}

TEST_CASE("MatrixMap arithmetic and distance") {
  MatrixMap id = MatrixMap::identity(2, 2);
  MatrixMap twice = id + id;
  CHECK(twice.distance(id * Complex{2.0, 0.0}) < 1e-15);
  CHECK((twice - id).distance(id) < 1e-15);
  CHECK(id.norm() == doctest::Approx(1.0));
  CHECK(thrown_code([&] { id + MatrixMap::identity(3, 3); }) == Err::DimensionMismatch);
}

TEST_CASE("MatrixMap constructor rejects bad action shapes") {
  CHECK(thrown_code([] { MatrixMap(MapShape{2, 2, 2, 2}, CMatrix::Zero(4, 3)); }) ==
        Err::DimensionMismatch);
  CMatrix nan_action = CMatrix::Zero(4, 4);
  nan_action(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK(thrown_code([&] { MatrixMap(MapShape{2, 2, 2, 2}, nan_action); }) ==
        Err::NotFiniteEntries);
}
