#include <doctest.h>

#include <random>
#include <set>

#include "rw2/presets.hpp"
#include "rw2/thompson.hpp"

using namespace rw2;

namespace {

void nodes(const NTree& t, TreeAddr& at, std::set<TreeAddr>& out) {
  if (t.is_leaf()) return;
  out.insert(at);
  for (int i = 0; i < static_cast<int>(t.kids.size()); ++i) {
    at.push_back(i);
    nodes(t.kids[i], at, out);
    at.pop_back();
  }
}

std::set<TreeAddr> nodes(const NTree& t) {
  std::set<TreeAddr> s;
  TreeAddr a;
  nodes(t, a, s);
  return s;
}

NTree from_nodes(const std::set<TreeAddr>& s, TreeAddr& at, int n) {
  NTree t;
  if (!s.count(at)) return t;
  for (int i = 0; i < n; ++i) {
    at.push_back(i);
    t.kids.push_back(from_nodes(s, at, n));
    at.pop_back();
  }
  return t;
}

TreeDiagram random_d(int n, std::mt19937_64& rng, bool op = false) { return random_diagram(n, 12, op, rng); }

}  // namespace

TEST_CASE("tree notation round-trips") {
  for (const char* s : {".", "(. .)", "((. .) (. .))", "(. (. . .) .)"}) CHECK(to_string(parse_tree(s)) == s);
  CHECK_THROWS(parse_tree("(. ."));
  CHECK_THROWS_AS(check_arity(parse_tree("(. . .)"), 2), ThompsonError);
}

TEST_CASE("minimal common expansion is the union of node sets") {
  std::mt19937_64 rng(11);
  for (int n = 2; n <= 4; ++n)
    for (int k = 0; k < 200; ++k) {
      NTree a = random_tree(n, 1 + k % 5, rng), b = random_tree(n, 1 + (k / 5) % 5, rng);
      auto u = nodes(a);
      auto nb = nodes(b);
      u.insert(nb.begin(), nb.end());
      TreeAddr root;
      NTree want = from_nodes(u, root, n);
      NTree m = mce(a, b);
      CHECK(m == want);
      CHECK(is_expansion_of(m, a));
      CHECK(is_expansion_of(m, b));
      CHECK(leaf_count(m) == 1 + (n - 1) * caret_count(m));
    }
}

TEST_CASE("group axioms on random diagrams") {
  std::mt19937_64 rng(12);
  for (int n = 2; n <= 4; ++n)
    for (int k = 0; k < 100; ++k) {
      auto a = random_d(n, rng), b = random_d(n, rng), c = random_d(n, rng);
      CHECK(td_mul(td_mul(a, b), c) == td_mul(a, td_mul(b, c)));
      CHECK(td_mul(a, td_inv(a)) == td_id(n));
      CHECK(td_mul(td_id(n), a) == td_reduce(a));
    }
}

TEST_CASE("reduction is idempotent and preserves the element") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 100; ++k) {
    auto a = random_d(3, rng);
    auto big = td_expand(a, 0);
    CHECK(td_reduce(big) == td_reduce(a));
    CHECK(td_reduce(td_reduce(a)) == td_reduce(a));
  }
}

TEST_CASE("theta of a single rotation") {
  Theory2 c2 = gen({"catalan", 2});
  TreeDiagram d = theta(c2, {Letter{"alpha1", {}}}, 2);
  CHECK(to_string(d.dom) == "(. (. .))");
  CHECK(to_string(d.cod) == "((. .) .)");
  CHECK(d.perm == std::vector<int>{0, 1, 2});
}

TEST_CASE("theta is a homomorphism") {
  for (int n = 2; n <= 3; ++n) {
    Theory2 th = gen({"catalan", n});
    std::mt19937_64 rng(20 + n);
    auto letter = [&]() {
      Letter l{"alpha" + std::to_string(1 + static_cast<int>(rng() % (n - 1))), {}, rng() % 2 == 1};
      int len = static_cast<int>(rng() % 3);
      for (int i = 0; i < len; ++i) l.address.push_back({kTensor, 1 + static_cast<int>(rng() % n)});
      return l;
    };
    for (int k = 0; k < 60; ++k) {
      OperatorWord u{letter(), letter()}, v{letter()};
      OperatorWord uv = u;
      uv.insert(uv.end(), v.begin(), v.end());
      if (op_word(th, uv).empty) continue;
      CHECK(theta(th, uv, n) == td_mul(theta(th, u, n), theta(th, v, n)));
    }
  }
}

TEST_CASE("idempotent letters map to the identity") {
  Theory2 c2 = gen({"catalan", 2});
  Letter e{"alpha1", {{kTensor, 2}}, false, true};
  CHECK(theta(c2, {e}, 2) == td_id(2));
  Letter a{"alpha1", {}};
  Letter ai{"alpha1", {}, true};
  CHECK(theta(c2, {a, ai}, 2) == td_id(2));
}

TEST_CASE("catalan diagrams preserve order and sym-catalan transpositions do not") {
  Theory2 sc = gen({"sym-catalan", 2});
  for (int i = 1; i <= 4; ++i) {
    auto w = adjacent_transposition_word(sc, 2, 5, i);
    Operator o = op_word(sc, w);
    REQUIRE_FALSE(o.empty);
    auto p = induced_permutation(o, left_comb_term(2, 5));
    std::vector<int> want{0, 1, 2, 3, 4};
    std::swap(want[i - 1], want[i]);
    CHECK(p == want);
    CHECK_FALSE(is_order_preserving(theta(sc, w, 2)));
  }
  std::mt19937_64 rng(3);
  CHECK(is_order_preserving(random_d(2, rng, true)));
}
