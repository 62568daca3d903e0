#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "corelab/jsonio.hpp"
#include "corelab/reps.hpp"
#include "test_util.hpp"

using namespace corelab;
using testutil::fixture;
using testutil::cd;

namespace {

KGraphRep load_k(const char* name) {
  return load_rep_file(fixture(name)).kgraph_rep;
}

GraphRep load_g(const char* name) {
  return load_rep_file(fixture(name)).graph_rep;
}

}  // namespace

TEST_CASE("fixture residuals and coisometry") {
  Tolerance tol;
  KGraphRep flip = load_k("atomic_flip.json");
  CHECK(check_kgraph_rep(flip).commutation <= tol.eq_tol);
  CHECK(coisometry_residual(flip) <= tol.eq_tol);
  CHECK(is_fully_coisometric(flip, tol));
  CHECK(is_completely_contractive(flip, tol));
  CHECK_FALSE(is_isometric(flip, tol));

  KGraphRep ndc = load_k("not_doubly_commuting.json");
  CHECK(check_kgraph_rep(ndc).commutation <= tol.eq_tol);
  CHECK(is_fully_coisometric(ndc, tol));

  GraphRep cyc = load_g("cycle3_iso.json");
  GraphRepResiduals res = check_graph_rep(cyc);
  CHECK(res.worst() <= tol.eq_tol);
  CHECK(is_isometric(cyc, tol));
  CHECK(is_fully_coisometric(cyc, tol));

  GraphRep row = load_g("loops2_row.json");
  CHECK(is_fully_coisometric(row, tol));
  CHECK_FALSE(is_isometric(row, tol));
}

TEST_CASE("shape and residual enforcement") {
  Tolerance tol;
  GraphRep rep = load_g("cycle3_iso.json");
  GraphRep broken = rep;
  broken.A.pop_back();
  CHECK_THROWS_AS(check_graph_rep(broken), ParseError);

  // violating covariance leaves the shape fine but raises the residual
  GraphRep off = rep;
  off.A[0] = ComplexMatrix::Identity(3, 3);
  CHECK(check_graph_rep(off).covariance > 0.5);
  CHECK_THROWS_AS(require_valid(off, tol), AnalysisError);
}

TEST_CASE("row operators multiply source projections") {
  GraphRep cyc = load_g("cycle3_iso.json");
  ComplexMatrix row = row_operator(cyc);
  REQUIRE(row.rows() == 3);
  REQUIRE(row.cols() == 9);
  for (const Edge& e : cyc.graph.edges())
    CHECK(operator_norm(ComplexMatrix(
              row.middleCols(e.id * 3, 3) -
              cyc.A[static_cast<size_t>(e.id)] *
                  cyc.sigma[static_cast<size_t>(e.source)])) == 0);

  KGraphRep flip = load_k("atomic_flip.json");
  CHECK(row_operator(flip, 0).cols() == 8);
  ComplexMatrix g = row_operator(flip, 1) * row_operator(flip, 1).adjoint();
  CHECK(operator_norm(ComplexMatrix(g - ComplexMatrix::Identity(4, 4))) <
        1e-12);
}

TEST_CASE("word rows via a_tilde_n") {
  KGraphRep flip = load_k("atomic_flip.json");
  ComplexMatrix a11 = a_tilde_n(flip, {1, 1});
  REQUIRE(a11.cols() == 16);
  // block of word index 0 = A_1 B_1 (colors in ascending order)
  ComplexMatrix want = flip.rows[0][0] * flip.rows[1][0];
  CHECK(operator_norm(ComplexMatrix(a11.leftCols(4) - want)) < 1e-12);
  // fully coisometric in every degree
  CHECK(operator_norm(ComplexMatrix(a11 * a11.adjoint() -
                                    ComplexMatrix::Identity(4, 4))) < 1e-12);
  ComplexMatrix a0 = a_tilde_n(flip, {0, 0});
  CHECK(operator_norm(ComplexMatrix(a0 - ComplexMatrix::Identity(4, 4))) ==
        0);
}

TEST_CASE("doubly commuting residuals match the frozen values") {
  Tolerance tol;
  KGraphRep flip = load_k("atomic_flip.json");
  CHECK(doubly_commuting_residual(flip) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_FALSE(is_doubly_commuting(flip, tol));

  CHECK(doubly_commuting_residual(load_k("not_partially_iso.json")) < 1e-9);
  CHECK(doubly_commuting_residual(load_k("not_partially_iso_w_major.json")) <
        1e-9);
  CHECK(doubly_commuting_residual(load_k("not_doubly_commuting.json")) > 0.1);
}

TEST_CASE("theta exchange matrix is the relation permutation") {
  KGraphRep flip = load_k("atomic_flip.json");
  ComplexMatrix t = theta_exchange_matrix(flip.kgraph, 0, 1);
  REQUIRE(t.rows() == 4);
  // theta(0,0) = (1,1): t[m'*m1+l', l*m2+m] = t[3, 0] = 1
  CHECK(t(3, 0) == cd(1, 0));
  CHECK(t(2, 1) == cd(1, 0));  // theta(0,1) = (0,1) -> t[1*2+0, 0*2+1]
  for (Eigen::Index c = 0; c < 4; ++c) CHECK(t.col(c).sum() == cd(1, 0));
  for (Eigen::Index r = 0; r < 4; ++r) CHECK(t.row(r).sum() == cd(1, 0));
}

TEST_CASE("popescu defect grid") {
  Tolerance tol;
  KGraphRep flip = load_k("atomic_flip.json");
  CHECK_THROWS_AS(defect_operator(flip, 0.0), AnalysisError);
  CHECK_THROWS_AS(defect_operator(flip, 1.0), AnalysisError);
  CHECK_THROWS_AS(defect_operator(flip, -0.5), AnalysisError);

  // for a fully coisometric pair of rows the defect eigenvalues are
  // (1 - s^2)^2 exactly
  for (double s : {0.25, 0.5, 0.9}) {
    ComplexMatrix d = defect_operator(flip, s);
    auto eig = hermitian_eigen(d);
    double want = (1 - s * s) * (1 - s * s);
    CHECK(eig.values(0) == doctest::Approx(want).epsilon(1e-9));
    CHECK(eig.values(eig.values.size() - 1) ==
          doctest::Approx(want).epsilon(1e-9));
  }

  PopescuReport rep = satisfies_popescu(flip, {0.9, 0.25, 0.5}, tol);
  REQUIRE(rep.grid.size() == 3);
  CHECK(rep.grid[0] == 0.25);  // grid reported sorted
  CHECK(rep.grid[2] == 0.9);
  CHECK(rep.verdict);
  for (bool b : rep.psd) CHECK(b);

  // strict-contraction generators lose positivity above some s
  KGraphRep fc = load_k("fc_algebra.json");
  PopescuReport pf = satisfies_popescu(fc, {0.25, 0.5, 0.75, 0.99}, tol);
  CHECK(pf.psd[0]);
  CHECK_FALSE(pf.psd[3]);
  CHECK_FALSE(pf.verdict);
  CHECK_THROWS_AS(satisfies_popescu(flip, {}, tol), AnalysisError);
}

TEST_CASE("regular dilation condition") {
  Tolerance tol;
  RegularDilationReport flip =
      regular_dilation_condition(load_k("atomic_flip.json"), tol);
  REQUIRE(flip.subsets.size() == 4);
  CHECK(flip.subsets[0].empty());
  CHECK(flip.subsets[3] == std::vector<int>{0, 1});
  CHECK(flip.psd[0]);  // empty subset gives the identity
  CHECK_FALSE(flip.all_hold);
  CHECK(flip.min_eigenvalue[3] == doctest::Approx(-1.0).epsilon(1e-9));

  RegularDilationReport npi =
      regular_dilation_condition(load_k("not_partially_iso.json"), tol);
  CHECK(npi.all_hold);
  for (double e : npi.min_eigenvalue) CHECK(e >= -1e-9);
}

TEST_CASE("product rep collects word products") {
  KGraphRep flip = load_k("atomic_flip.json");
  GraphRep prod = product_rep(flip, {1, 1});
  CHECK(prod.graph.vertex_count() == 1);
  REQUIRE(prod.graph.edge_count() == 4);
  CHECK(operator_norm(ComplexMatrix(
            prod.A[0] - flip.rows[0][0] * flip.rows[1][0])) < 1e-12);
  CHECK(is_fully_coisometric(prod));

  GraphRep one = product_rep(flip, {0, 0});
  REQUIRE(one.graph.edge_count() == 1);
  CHECK(operator_norm(ComplexMatrix(one.A[0] -
                                    ComplexMatrix::Identity(4, 4))) == 0);
}

TEST_CASE("generator lists") {
  GraphRep cyc = load_g("cycle3_iso.json");
  CHECK(generators(cyc).size() == 6);  // 3 sigmas + 3 edges
  KGraphRep flip = load_k("atomic_flip.json");
  CHECK(generators(flip).size() == 4);
  CHECK(operator_norm(ComplexMatrix(generators(flip)[2] - flip.rows[1][0])) ==
        0);
}

TEST_CASE("contractivity of the fc generators") {
  Tolerance tol;
  KGraphRep fc = load_k("fc_algebra.json");
  CHECK_FALSE(is_completely_contractive(fc, tol));
  CHECK_FALSE(is_fully_coisometric(fc, tol));
  // row row* = G1 G1* + G2 G2* has spectrum {2 - sqrt 2, 2 + sqrt 2}
  CHECK(operator_norm(row_operator(fc, 0)) ==
        doctest::Approx(std::sqrt(2.0 + std::sqrt(2.0))).epsilon(1e-9));
}

TEST_CASE("random block reps are doubly commuting") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 5; ++t) {
    auto a = testutil::random_coisometric_row(rng, 2, 1 + (t % 2));
    auto b = testutil::random_coisometric_row(rng, 2, 1 + ((t + 1) % 2));
    KGraphRep rep = testutil::block_rep(a, b);
    CHECK(check_kgraph_rep(rep).commutation < 1e-9);
    CHECK(is_fully_coisometric(rep));
    CHECK(doubly_commuting_residual(rep) < 1e-9);
  }
}
