#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corelab/kgraphs.hpp"
#include "test_util.hpp"

using namespace corelab;

TEST_CASE("theta construction validates permutations") {
  CHECK_THROWS_AS(ThetaKGraph(2, {2, 2}, {}), ParseError);
  CHECK_THROWS_AS(ThetaKGraph(2, {2, 2}, {{{0, 1}, {0, 0, 3, 2}}}),
                  ParseError);
  CHECK_THROWS_AS(ThetaKGraph(2, {2, 2}, {{{0, 1}, {1, 0, 3}}}), ParseError);
  ThetaKGraph g = testutil::theta_both_swap();
  CHECK(g.k() == 2);
  CHECK(g.theta(0, 1) == std::vector<int>{3, 1, 2, 0});
  // inverse of an involution is itself
  CHECK(g.theta_inverse(0, 1) == std::vector<int>{3, 1, 2, 0});
}

TEST_CASE("normal form sorts by color through theta") {
  ThetaKGraph g = testutil::theta_both_swap();
  // e^1_0 e^2_0 = e^2_1 e^1_1: the unsorted word (color2,1)(color1,1)
  // normalizes to (color1,0)(color2,0).
  Word w = {{1, 1}, {0, 1}};
  Word nf = normal_form(g, w);
  REQUIRE(nf.size() == 2);
  CHECK(nf[0] == Letter{0, 0});
  CHECK(nf[1] == Letter{1, 0});
  // degree is preserved
  CHECK(degree(g, nf) == std::vector<int>{1, 1});

  // sorting with reversed priority puts color 2 first and inverts the swap
  Word back = sort_by_priority(g, nf, {1, 0});
  REQUIRE(back.size() == 2);
  CHECK(back[0] == Letter{1, 1});
  CHECK(back[1] == Letter{0, 1});

  // the trivial relations leave indices alone
  ThetaKGraph h = testutil::theta_second_swap();
  Word v = normal_form(h, {{1, 0}, {0, 1}});
  CHECK(v[0] == Letter{0, 1});
  CHECK(v[1] == Letter{1, 1});
}

TEST_CASE("words_of_degree and word_index") {
  ThetaKGraph g = testutil::theta_both_swap();
  auto words = words_of_degree(g, {1, 1});
  REQUIRE(words.size() == 4);
  CHECK(words[0] == Word{{0, 0}, {1, 0}});
  CHECK(words[3] == Word{{0, 1}, {1, 1}});
  for (size_t i = 0; i < words.size(); ++i)
    CHECK(word_index(g, words[i]) == static_cast<int>(i));

  auto deg20 = words_of_degree(g, {2, 0});
  CHECK(deg20.size() == 4);
  CHECK(words_of_degree(g, {0, 0}).size() == 1);
}

TEST_CASE("triple consistency diagnostic") {
  // all-identity relations always compose consistently
  std::map<std::pair<int, int>, std::vector<int>> id3;
  id3[{0, 1}] = {0, 1, 2, 3};
  id3[{0, 2}] = {0, 1, 2, 3};
  id3[{1, 2}] = {0, 1, 2, 3};
  ThetaKGraph ok(3, {2, 2, 2}, id3);
  CHECK(validate_theta(ok).ok);

  // swapping indices across colors 1-2 and 1-3 but not 2-3 breaks the
  // hexagon condition
  std::map<std::pair<int, int>, std::vector<int>> bad;
  bad[{0, 1}] = {0, 2, 1, 3};  // (l,m) -> (m,l)
  bad[{0, 2}] = {0, 2, 1, 3};
  bad[{1, 2}] = {0, 1, 2, 3};
  ThetaKGraph nope(3, {2, 2, 2}, bad);
  ThetaDiagnostic diag = validate_theta(nope);
  CHECK_FALSE(diag.ok);
  CHECK(!diag.message.empty());

  // k = 2 is always consistent
  CHECK(validate_theta(testutil::theta_both_swap()).ok);
}

TEST_CASE("normal form is invariant under the relation rewrite") {
  ThetaKGraph g = testutil::theta_both_swap();
  // theta(0,0) = (1,1): the two sides of the relation normalize identically.
  Word lhs = {{0, 0}, {1, 0}};
  Word rhs = {{1, 1}, {0, 1}};
  CHECK(normal_form(g, lhs) == normal_form(g, rhs));
}
