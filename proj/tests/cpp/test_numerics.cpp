#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "corelab/numerics.hpp"

using namespace corelab;
using cd = std::complex<double>;

namespace {

ComplexMatrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cd(g(rng), g(rng));
  return m;
}

}  // namespace

TEST_CASE("orthonormal_range basics") {
  Tolerance tol;
  SUBCASE("identity keeps full rank") {
    Subspace s = orthonormal_range(ComplexMatrix::Identity(3, 3), tol);
    CHECK(s.dim() == 3);
    CHECK(operator_norm(s.projection() - ComplexMatrix::Identity(3, 3)) <
          tol.eq_tol);
  }
  SUBCASE("single column is normalized") {
    ComplexMatrix m(2, 1);
    m << 1.0, 1.0;
    Subspace s = orthonormal_range(m, tol);
    REQUIRE(s.dim() == 1);
    ComplexVector expect(2);
    expect << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CHECK((s.frame().col(0) - expect).norm() < 1e-12);
  }
  SUBCASE("rank-1 square matrix collapses to one column") {
    ComplexMatrix m(2, 2);
    m << 1.0, 1.0, 1.0, 1.0;
    Subspace s = orthonormal_range(m, tol);
    REQUIRE(s.dim() == 1);
    ComplexVector expect(2);
    expect << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CHECK((s.frame().col(0) - expect).norm() < 1e-12);
  }
  SUBCASE("numerically zero matrix has rank 0") {
    ComplexMatrix m = ComplexMatrix::Constant(3, 3, cd(1e-14, 0));
    CHECK(orthonormal_range(m, tol).dim() == 0);
  }
  SUBCASE("random frames are orthonormal") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
      ComplexMatrix m = random_matrix(rng, 5, 3);
      Subspace s = orthonormal_range(m, tol);
      ComplexMatrix gram = s.frame().adjoint() * s.frame();
      CHECK(operator_norm(gram -
                          ComplexMatrix::Identity(s.dim(), s.dim())) <
            tol.eq_tol);
    }
  }
}

TEST_CASE("subspace_intersect") {
  Tolerance tol;
  SUBCASE("full with full") {
    Subspace f = Subspace::full(3);
    CHECK(subspace_intersect(f, f, tol).dim() == 3);
  }
  SUBCASE("orthogonal lines meet in zero") {
    ComplexMatrix e1 = ComplexMatrix::Zero(2, 1);
    e1(0, 0) = 1.0;
    ComplexMatrix e2 = ComplexMatrix::Zero(2, 1);
    e2(1, 0) = 1.0;
    CHECK(subspace_intersect(Subspace(2, e1), Subspace(2, e2), tol).dim() == 0);
  }
  SUBCASE("two planes in C^3 meet along e2") {
    ComplexMatrix a = ComplexMatrix::Zero(3, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;  // span{e1,e2}
    ComplexMatrix b = ComplexMatrix::Zero(3, 2);
    b(1, 0) = 1.0;
    b(2, 1) = 1.0;  // span{e2,e3}
    Subspace meet = subspace_intersect(Subspace(3, a), Subspace(3, b), tol);
    REQUIRE(meet.dim() == 1);
    ComplexVector e2 = ComplexVector::Zero(3);
    e2(1) = 1.0;
    CHECK((meet.frame().col(0) - e2).norm() < 1e-9);
  }
  SUBCASE("dimension bound and containment on random pairs") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
      Subspace a = orthonormal_range(random_matrix(rng, 6, 4), tol);
      Subspace b = orthonormal_range(random_matrix(rng, 6, 4), tol);
      Subspace meet = subspace_intersect(a, b, tol);
      CHECK(meet.dim() >= a.dim() + b.dim() - 6);
      CHECK(a.contains(meet, tol.eq_tol));
      CHECK(b.contains(meet, tol.eq_tol));
    }
  }
  SUBCASE("mismatched ambient throws") {
    CHECK_THROWS_AS(subspace_intersect(Subspace::full(2), Subspace::full(3)),
                    AnalysisError);
  }
}

TEST_CASE("subspace_complement_within") {
  Tolerance tol;
  SUBCASE("line inside the plane") {
    ComplexMatrix e1 = ComplexMatrix::Zero(2, 1);
    e1(0, 0) = 1.0;
    Subspace comp =
        subspace_complement_within(Subspace::full(2), Subspace(2, e1), tol);
    REQUIRE(comp.dim() == 1);
    CHECK(std::abs(comp.frame()(1, 0)) > 0.999);
  }
  SUBCASE("whole equals part gives zero") {
    Subspace f = Subspace::full(3);
    CHECK(subspace_complement_within(f, f, tol).dim() == 0);
  }
  SUBCASE("two-dim whole minus its first axis") {
    ComplexMatrix w(3, 2);
    w.setZero();
    w(0, 0) = 1.0 / std::sqrt(2.0);
    w(1, 0) = 1.0 / std::sqrt(2.0);
    w(2, 1) = 1.0;
    ComplexMatrix p = w.leftCols(1);
    Subspace comp =
        subspace_complement_within(Subspace(3, w), Subspace(3, p), tol);
    REQUIRE(comp.dim() == 1);
    ComplexVector e3 = ComplexVector::Zero(3);
    e3(2) = 1.0;
    CHECK((comp.frame().col(0) - e3).norm() < 1e-9);
  }
}

TEST_CASE("is_psd") {
  Tolerance tol;
  CHECK(is_psd(ComplexMatrix::Identity(2, 2), tol));
  ComplexMatrix d(2, 2);
  d << 1.0, 0.0, 0.0, -1.0;
  CHECK_FALSE(is_psd(d, tol));
  ComplexMatrix p(2, 2);
  p << 0.5, -0.5, -0.5, 0.5;
  CHECK(is_psd(p, tol));
  ComplexMatrix nh(2, 2);
  nh << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(is_psd(nh, tol), AnalysisError);
}

TEST_CASE("psd_sqrt") {
  Tolerance tol;
  SUBCASE("identity") {
    CHECK(operator_norm(psd_sqrt(ComplexMatrix::Identity(2, 2), tol) -
                        ComplexMatrix::Identity(2, 2)) < 1e-12);
  }
  SUBCASE("diagonal") {
    ComplexMatrix d(2, 2);
    d << 4.0, 0.0, 0.0, 9.0;
    ComplexMatrix expect(2, 2);
    expect << 2.0, 0.0, 0.0, 3.0;
    CHECK(operator_norm(psd_sqrt(d, tol) - expect) < 1e-12);
  }
  SUBCASE("projection is its own square root") {
    ComplexMatrix p(2, 2);
    p << 0.5, -0.5, -0.5, 0.5;
    CHECK(operator_norm(psd_sqrt(p, tol) - p) < 1e-9);
  }
  SUBCASE("square of sqrt recovers random PSD input") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
      ComplexMatrix m = random_matrix(rng, 4, 4);
      ComplexMatrix psd = m * m.adjoint();
      ComplexMatrix r = psd_sqrt(psd, tol);
      CHECK(operator_norm(r * r - psd) < 10 * tol.eq_tol *
                                             std::max(operator_norm(psd), 1.0));
    }
  }
  SUBCASE("rejects indefinite input") {
    ComplexMatrix d(2, 2);
    d << 1.0, 0.0, 0.0, -1.0;
    CHECK_THROWS_AS(psd_sqrt(d, tol), AnalysisError);
  }
}

TEST_CASE("operator_norm") {
  CHECK(operator_norm(ComplexMatrix::Identity(3, 3)) == doctest::Approx(1.0));
  ComplexMatrix row(1, 2);
  row << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK(operator_norm(row) == doctest::Approx(1.0));
  CHECK(operator_norm(2.0 * ComplexMatrix::Identity(2, 2)) ==
        doctest::Approx(2.0));
}

TEST_CASE("kron") {
  SUBCASE("identity times identity") {
    CHECK(operator_norm(kron(ComplexMatrix::Identity(2, 2),
                             ComplexMatrix::Identity(2, 2)) -
                        ComplexMatrix::Identity(4, 4)) == 0.0);
  }
  SUBCASE("diag and identity") {
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
    expect(0, 0) = 1.0;
    expect(1, 1) = 1.0;
    CHECK(operator_norm(kron(d, ComplexMatrix::Identity(2, 2)) - expect) ==
          0.0);
  }
  SUBCASE("left-factor-major index layout") {
    // e1 e2* (x) e2 e1* should land at row 0*2+1=1, col 1*2+0=2.
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 1) = 1.0;
    ComplexMatrix b = ComplexMatrix::Zero(2, 2);
    b(1, 0) = 1.0;
    ComplexMatrix k = kron(a, b);
    ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
    expect(1, 2) = 1.0;
    CHECK(operator_norm(k - expect) == 0.0);
  }
  SUBCASE("associativity is exact in layout") {
    std::mt19937_64 rng(5);
    ComplexMatrix a = random_matrix(rng, 2, 3);
    ComplexMatrix b = random_matrix(rng, 3, 2);
    ComplexMatrix c = random_matrix(rng, 2, 2);
    CHECK(operator_norm(kron(kron(a, b), c) - kron(a, kron(b, c))) < 1e-12);
  }
}

TEST_CASE("solve_linear_space") {
  Tolerance tol;
  SUBCASE("commutant of identity is everything") {
    std::vector<LinearConstraint> cs{[](const ComplexMatrix& x) {
      return ComplexMatrix(x * ComplexMatrix::Identity(2, 2) -
                           ComplexMatrix::Identity(2, 2) * x);
    }};
    CHECK(solve_linear_space(cs, 2, tol).size() == 4);
  }
  SUBCASE("commutant of diag(1,2) is the diagonal matrices") {
    ComplexMatrix d(2, 2);
    d << 1.0, 0.0, 0.0, 2.0;
    std::vector<LinearConstraint> cs{
        [d](const ComplexMatrix& x) { return ComplexMatrix(x * d - d * x); }};
    auto basis = solve_linear_space(cs, 2, tol);
    REQUIRE(basis.size() == 2);
    for (const auto& m : basis) {
      CHECK(std::abs(m(0, 1)) < 1e-10);
      CHECK(std::abs(m(1, 0)) < 1e-10);
    }
  }
  SUBCASE("X = 0 leaves nothing") {
    std::vector<LinearConstraint> cs{
        [](const ComplexMatrix& x) { return x; }};
    CHECK(solve_linear_space(cs, 2, tol).empty());
  }
  SUBCASE("solutions satisfy the constraints and are HS-orthonormal") {
    std::mt19937_64 rng(31);
    ComplexMatrix g = random_matrix(rng, 3, 3);
    std::vector<LinearConstraint> cs{
        [g](const ComplexMatrix& x) { return ComplexMatrix(x * g - g * x); }};
    auto basis = solve_linear_space(cs, 3, tol);
    REQUIRE(basis.size() >= 1);  // identity always commutes
    for (size_t i = 0; i < basis.size(); ++i) {
      CHECK(operator_norm(basis[i] * g - g * basis[i]) < tol.eq_tol);
      for (size_t j = 0; j < basis.size(); ++j) {
        double expect = i == j ? 1.0 : 0.0;
        CHECK(std::abs(hs_dot(basis[i], basis[j]) - cd(expect, 0)) < 1e-9);
      }
    }
  }
}

TEST_CASE("hermitian_eigen is descending with fixed phases") {
  ComplexMatrix m(2, 2);
  m << 1.0, cd(0.0, -1.0), cd(0.0, 1.0), 1.0;  // eigenvalues 2 and 0
  HermitianEigen eg = hermitian_eigen(m);
  CHECK(eg.values[0] == doctest::Approx(2.0));
  CHECK(eg.values[1] == doctest::Approx(0.0));
  for (int j = 0; j < 2; ++j) {
    // first significant component real positive
    for (int i = 0; i < 2; ++i) {
      cd z = eg.vectors(i, j);
      if (std::abs(z) > 1e-8) {
        CHECK(z.imag() == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(z.real() > 0.0);
        break;
      }
    }
  }
  CHECK(operator_norm(m * eg.vectors -
                      eg.vectors * ComplexMatrix(eg.values.cast<cd>().asDiagonal())) <
        1e-9);
}

TEST_CASE("tolerance validation") {
  Tolerance bad;
  bad.eq_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), ParseError);
}
