#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "corelab/jsonio.hpp"
#include "corelab/structure.hpp"
#include "test_util.hpp"

using namespace corelab;
using testutil::fixture;
using testutil::cd;

namespace {

ComplexMatrix m2(double a, double b, double c, double d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// idempotent pair with G1 + G2 = I and G1 G2 = G2 G1 = 0
std::vector<ComplexMatrix> fc_generators() {
  return {m2(1, 0, -1, 0), m2(0, 0, 1, 1)};
}

Subspace line(std::initializer_list<cd> entries) {
  ComplexVector v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (cd e : entries) v(i++) = e;
  v.normalize();
  return Subspace(v.size(), v);
}

}  // namespace

TEST_CASE("hs_orthonormalize drops dependent directions") {
  ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  auto basis = hs_orthonormalize({id, 2.0 * id, m2(0, 1, 0, 0)});
  CHECK(basis.size() == 2);
  for (const auto& b : basis)
    CHECK(std::abs(hs_dot(b, b) - cd(1, 0)) < 1e-9);
  CHECK(std::abs(hs_dot(basis[0], basis[1])) < 1e-9);
}

TEST_CASE("generated algebras and commutants") {
  OperatorAlgebra diag = generate_algebra({m2(1, 0, 0, 2)}, 2);
  CHECK(diag.basis.size() == 2);
  CHECK(is_star_closed(diag));
  CHECK(commutant(diag).basis.size() == 2);

  OperatorAlgebra full = generate_algebra({m2(0, 1, 0, 0), m2(0, 0, 1, 0)}, 2);
  CHECK(full.basis.size() == 4);
  CHECK(is_star_closed(full));
  CHECK(commutant(full).basis.size() == 1);
  CHECK(algebra_contains(full, m2(3, 1, -2, 7)));

  OperatorAlgebra fc = generate_algebra(fc_generators(), 2);
  CHECK(fc.basis.size() == 2);
  CHECK_FALSE(is_star_closed(fc));
  CHECK(star_residual(fc) > 0.1);
  CHECK(commutant(fc).basis.size() == 2);
  CHECK(algebra_contains(fc, ComplexMatrix::Identity(2, 2)));
}

TEST_CASE("cyclic closure and minimal coinvariant descent") {
  OperatorAlgebra fc = generate_algebra(fc_generators(), 2);
  ComplexVector e1 = ComplexVector::Unit(2, 0);
  CHECK(cyclic_closure(fc, e1).dim() == 2);

  Subspace min = minimal_coinvariant(fc, e1);
  CHECK(subspace_equal(min, line({1, 0})));

  OperatorAlgebra diag = generate_algebra({m2(1, 0, 0, 2)}, 2);
  ComplexVector mix(2);
  mix << 1, 1;
  Subspace dmin = minimal_coinvariant(diag, mix);
  REQUIRE(dmin.dim() == 1);
  // a coordinate line: the projection stays diagonal
  CHECK(std::abs(dmin.projection()(0, 1)) < 1e-7);

  CHECK_THROWS_AS(minimal_coinvariant(fc, ComplexVector::Zero(2)),
                  AnalysisError);
}

TEST_CASE("minimal cyclic coinvariant acceptance and non-uniqueness") {
  OperatorAlgebra fc = generate_algebra(fc_generators(), 2);
  CHECK(is_minimal_cyclic_coinvariant(fc, line({1, 0})));
  CHECK(is_minimal_cyclic_coinvariant(fc, line({1, 1})));
  CHECK_FALSE(is_minimal_cyclic_coinvariant(fc, Subspace::full(2)));
  CHECK_FALSE(is_minimal_cyclic_coinvariant(fc, line({0, 1})));
}

TEST_CASE("row structure of the non-doubly-commuting fixture") {
  KGraphRep rep =
      load_rep_file(fixture("not_doubly_commuting.json")).kgraph_rep;
  OperatorAlgebra alg = generate_algebra(generators(rep), rep.dim);
  CHECK(alg.basis.size() == 5);

  MinimalFamily fam = minimal_coinvariant_family(alg);
  CHECK(fam.cyclic);
  REQUIRE(fam.summands.size() == 1);
  CHECK(subspace_equal(fam.vhat, line({1, 1, 0})));
  CHECK(subspace_equal(minimal_cyclic_coinvariant(alg), line({1, 1, 0})));
}

TEST_CASE("block structure of the flip fixture") {
  KGraphRep rep = load_rep_file(fixture("atomic_flip.json")).kgraph_rep;
  OperatorAlgebra alg = generate_algebra(generators(rep), rep.dim);
  CHECK(alg.basis.size() == 8);
  CHECK(is_star_closed(alg));
  CHECK(commutant(alg).basis.size() == 2);

  MinimalFamily fam = minimal_coinvariant_family(alg);
  CHECK(subspace_equal(fam.vhat, Subspace::full(4)));
  REQUIRE(fam.summands.size() == 2);
  CHECK(fam.summands[0].dim() == 2);
  CHECK(fam.summands[1].dim() == 2);

  BlockDecomposition bd = block_decomposition(alg);
  REQUIRE(bd.blocks.size() == 2);
  ComplexMatrix central = ComplexMatrix::Zero(4, 4);
  for (const BlockClass& b : bd.blocks) {
    CHECK(b.block_dim == 2);
    CHECK(b.multiplicity == 1);
    REQUIRE(b.intertwiners.size() == 1);
    central += b.central_projection;
  }
  CHECK(operator_norm(ComplexMatrix(central -
                                    ComplexMatrix::Identity(4, 4))) < 1e-7);

  // double commutant recovers the algebra
  OperatorAlgebra bic = commutant(commutant(alg));
  CHECK(bic.basis.size() == alg.basis.size());
  for (const auto& b : alg.basis) CHECK(algebra_contains(bic, b));
}

TEST_CASE("non-self-adjoint algebra compresses to a block pair") {
  KGraphRep rep = load_rep_file(fixture("not_partially_iso.json")).kgraph_rep;
  OperatorAlgebra alg = generate_algebra(generators(rep), rep.dim);
  CHECK(alg.basis.size() == 24);
  CHECK_FALSE(is_star_closed(alg));

  Subspace vhat = minimal_cyclic_coinvariant(alg);
  CHECK(vhat.dim() == 4);

  OperatorAlgebra small = compress(alg, vhat);
  CHECK(small.basis.size() == 8);
  CHECK(is_star_closed(small));

  BlockDecomposition bd = block_decomposition(small);
  REQUIRE(bd.blocks.size() == 2);
  for (const BlockClass& b : bd.blocks) {
    CHECK(b.block_dim == 2);
    CHECK(b.multiplicity == 1);
  }

  KGraphRep cr = compress(rep, vhat);
  CHECK(is_fully_coisometric(cr));
  CHECK(phi_fixed_points(cr).size() == 2);
}

TEST_CASE("phi map and its fixed points") {
  GraphRep half = load_rep_file(fixture("loops2_half.json")).graph_rep;
  ComplexMatrix one = ComplexMatrix::Identity(1, 1);
  CHECK(std::abs(phi_map(half, one)(0, 0) - cd(0.5, 0)) < 1e-12);

  KGraphRep flip = load_rep_file(fixture("atomic_flip.json")).kgraph_rep;
  ComplexMatrix id4 = ComplexMatrix::Identity(4, 4);
  CHECK(operator_norm(ComplexMatrix(phi_map(flip, id4) - id4)) < 1e-12);
  CHECK(operator_norm(ComplexMatrix(phi_map(flip, id4, 0) - id4)) < 1e-12);
  CHECK_THROWS_AS(phi_map(flip, id4, 7), AnalysisError);

  // vertex projections are diagonal; an off-diagonal argument is rejected
  GraphRep cyc = load_rep_file(fixture("cycle3_iso.json")).graph_rep;
  ComplexMatrix off = ComplexMatrix::Zero(3, 3);
  off(0, 1) = 1;
  CHECK_THROWS_AS(phi_map(cyc, off), AnalysisError);

  // fixed points = commutant for the flip family (already on vhat)
  auto fixed = phi_fixed_points(flip);
  OperatorAlgebra alg = generate_algebra(generators(flip), flip.dim);
  OperatorAlgebra comm = commutant(alg);
  REQUIRE(fixed.size() == comm.basis.size());
  for (const auto& f : fixed) CHECK(containment_residual(comm, f) < 1e-7);
}

TEST_CASE("irreducible pairs have scalar fixed points; doubling squares them") {
  ComplexMatrix c1 = m2(0.6, 0, 0, 0.8);
  ComplexMatrix c2 = m2(0, 0.8, 0.6, 0);
  GraphRep single = testutil::loop_rep({c1, c2});
  CHECK(is_fully_coisometric(single));
  CHECK(generate_algebra({c1, c2}, 2).basis.size() == 4);
  auto fixed1 = phi_fixed_points(single);
  REQUIRE(fixed1.size() == 1);
  CHECK(operator_norm(ComplexMatrix(fixed1[0] - fixed1[0](0, 0) *
                                                    ComplexMatrix::Identity(
                                                        2, 2))) < 1e-7);

  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  GraphRep doubled = testutil::loop_rep(
      {testutil::blkdiag2(c1, c1), testutil::blkdiag2(c2, c2)});
  auto fixed2 = phi_fixed_points(doubled);
  CHECK(fixed2.size() == 4);

  ComplexMatrix swap = ComplexMatrix::Zero(4, 4);
  swap.block(0, 2, 2, 2) = ComplexMatrix::Identity(2, 2);
  swap.block(2, 0, 2, 2) = ComplexMatrix::Identity(2, 2);
  OperatorAlgebra span{4, hs_orthonormalize(fixed2)};
  CHECK(containment_residual(span, swap) < 1e-7);
  (void)z;
}

TEST_CASE("unitary equivalence certification") {
  ComplexMatrix c1 = m2(0.6, 0, 0, 0.8);
  ComplexMatrix c2 = m2(0, 0.8, 0.6, 0);
  std::vector<ComplexMatrix> a = {c1, c2};

  EquivalenceResult self = unitary_equivalence(a, a);
  CHECK(self.verdict == EquivalenceResult::Verdict::Equivalent);
  CHECK(self.max_residual <= 1e-9);

  std::mt19937_64 rng(5);
  ComplexMatrix u = testutil::haar_unitary(rng, 2);
  std::vector<ComplexMatrix> b = {u * c1 * u.adjoint(), u * c2 * u.adjoint()};
  EquivalenceResult res = unitary_equivalence(a, b);
  REQUIRE(res.verdict == EquivalenceResult::Verdict::Equivalent);
  CHECK(res.intertwiner_dim >= 1);
  ComplexMatrix w = res.unitary;
  CHECK(operator_norm(ComplexMatrix(w * w.adjoint() -
                                    ComplexMatrix::Identity(2, 2))) < 1e-9);
  for (size_t i = 0; i < a.size(); ++i)
    CHECK(operator_norm(ComplexMatrix(w * a[i] * w.adjoint() - b[i])) < 1e-8);

  ComplexMatrix s1(1, 1), s2(1, 1);
  s1 << 1.0;
  s2 << 0.5;
  EquivalenceResult no = unitary_equivalence({s1}, {s2});
  CHECK(no.verdict == EquivalenceResult::Verdict::NotEquivalent);
  CHECK(no.intertwiner_dim == 0);

  CHECK_THROWS_AS(unitary_equivalence({s1}, {s1, s2}), AnalysisError);
}

TEST_CASE("word subspaces against the full minimal subspace") {
  KGraphRep flip = load_rep_file(fixture("atomic_flip.json")).kgraph_rep;
  for (std::vector<int> m : {std::vector<int>{1, 1}, {1, 0}, {0, 1}}) {
    WmReport rep = wm_equals_vhat(flip, m);
    CHECK(rep.equal);
    CHECK(rep.contained);
    CHECK(rep.distance < 1e-9);
    CHECK(rep.all_positive == (m[0] >= 1 && m[1] >= 1));
  }

  KGraphRep ndc =
      load_rep_file(fixture("not_doubly_commuting.json")).kgraph_rep;
  WmReport w10 = wm_equals_vhat(ndc, {1, 0});
  CHECK(w10.vhat.dim() == 1);
  CHECK(w10.wm.dim() == 2);
  CHECK_FALSE(w10.equal);
  CHECK_FALSE(w10.contained);
  CHECK(w10.distance == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(wm_equals_vhat(ndc, {1, -1}), AnalysisError);
  CHECK_THROWS_AS(wm_equals_vhat(ndc, {1, 0, 0}), AnalysisError);
}

TEST_CASE("random doubly commuting families keep word subspaces inside") {
  std::mt19937_64 rng(77);
  const std::pair<int, int> shapes[] = {{1, 1}, {1, 2}, {2, 1}, {1, 3}};
  for (int t = 0; t < 8; ++t) {
    auto [p, r] = shapes[t % 4];
    auto a = testutil::random_coisometric_row(rng, 2, p);
    auto b = testutil::random_coisometric_row(rng, 2, r);
    KGraphRep rep = testutil::block_rep(a, b);
    REQUIRE(doubly_commuting_residual(rep) < 1e-9);
    WmReport w11 = wm_equals_vhat(rep, {1, 1});
    CHECK(w11.equal);
    WmReport w10 = wm_equals_vhat(rep, {1, 0});
    CHECK(w10.contained);
    WmReport w01 = wm_equals_vhat(rep, {0, 1});
    CHECK(w01.contained);
  }
}
