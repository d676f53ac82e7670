#include <doctest.h>

#include <random>

#include "rw2/dsl.hpp"
#include "rw2/term.hpp"

using namespace rw2;

namespace {

Term V(const std::string& x) { return Term::var(x); }
Term F(const std::string& f, std::vector<Term> a = {}) { return Term::app(f, std::move(a)); }

Term random_small(std::mt19937_64& rng, int depth, const std::vector<std::string>& xs) {
  std::uniform_int_distribution<int> d(0, 3);
  int k = depth == 0 ? d(rng) % 2 : d(rng);
  if (k == 0) return V(xs[rng() % xs.size()]);
  if (k == 1) return F("c");
  if (k == 2) return F("g", {random_small(rng, depth - 1, xs)});
  return F("f", {random_small(rng, depth - 1, xs), random_small(rng, depth - 1, xs)});
}

}  // namespace

TEST_CASE("positions and subterms") {
  Term t = F("f", {V("x"), F("g", {F("c")})});
  auto ps = positions(t);
  REQUIRE(ps.size() == 4);
  CHECK(ps[0].empty());
  CHECK(*subterm(t, ps[2]) == F("g", {F("c")}));
  CHECK(replace(t, ps[3], V("y")) == F("f", {V("x"), F("g", {V("y")})}));
  CHECK(function_positions(t).size() == 3);
  CHECK(t.size() == 4);
  CHECK(t.depth() == 2);
}

TEST_CASE("addresses") {
  Address a{{"f", 1}}, b{{"f", 2}}, ab{{"f", 1}, {"g", 1}};
  CHECK(is_prefix(a, ab));
  CHECK_FALSE(is_prefix(b, ab));
  CHECK(orthogonal(a, b));
  CHECK_FALSE(orthogonal(a, ab));
  CHECK(suffix_after(a, ab) == Address{{"g", 1}});
  CHECK(common_prefix(ab, b).empty());
  CHECK(address_less(a, ab));
  CHECK(address_less(ab, b));
}

TEST_CASE("match") {
  Term p = F("f", {V("x"), V("x")});
  CHECK(match(p, F("f", {F("c"), F("c")})).has_value());
  CHECK_FALSE(match(p, F("f", {F("c"), V("y")})).has_value());
  auto s = match(F("g", {V("x")}), F("g", {F("f", {V("y"), F("c")})}));
  REQUIRE(s);
  CHECK(s->at("x") == F("f", {V("y"), F("c")}));
}

TEST_CASE("unify: occur check and clash") {
  CHECK_FALSE(unify(V("x"), F("g", {V("x")})).has_value());
  CHECK_FALSE(unify(F("g", {V("x")}), F("c")).has_value());
  CHECK_FALSE(unify(F("f", {V("x"), V("x")}), F("f", {F("c"), F("g", {F("c")})})).has_value());
  auto s = unify(F("f", {V("x"), F("g", {V("y")})}), F("f", {F("g", {V("z")}), V("x")}));
  REQUIRE(s);
  CHECK(rw2::apply(V("x"), *s) == rw2::apply(F("g", {V("y")}), *s));
}

// Oracle: a unifier equalises both sides, and any other unifier found by
// matching factors through it.
TEST_CASE("unify is most general on random pairs") {
  std::mt19937_64 rng(7);
  const std::vector<std::string> xs{"x", "y", "z"};
  int unified = 0;
  for (int i = 0; i < 2000; ++i) {
    Term a = random_small(rng, 3, xs), b = random_small(rng, 3, xs);
    auto s = unify(a, b);
    if (!s) continue;
    ++unified;
    Term u = rw2::apply(a, *s);
    REQUIRE(u == rw2::apply(b, *s));
    // Ground instance of u is also a common instance; it must be an instance of u.
    Subst g;
    for (const auto& x : vars(u)) g[x] = F("c");
    Term gu = rw2::apply(u, g);
    CHECK(is_instance(gu, u));
    // Idempotence.
    CHECK(rw2::apply(u, *s) == u);
  }
  CHECK(unified > 100);
}

TEST_CASE("compose substitutions") {
  Subst s1{{"x", F("g", {V("y")})}}, s2{{"y", F("c")}};
  Term t = F("f", {V("x"), V("y")});
  CHECK(rw2::apply(t, compose(s1, s2)) == rw2::apply(rw2::apply(t, s1), s2));
}

TEST_CASE("renaming and instances") {
  Term t = F("f", {V("a"), F("g", {V("b")})});
  Term u = F("f", {V("q"), F("g", {V("p")})});
  CHECK(alpha_equiv(t, u));
  CHECK(canonical_rename(t) == canonical_rename(u));
  Term inst = F("f", {F("c"), F("g", {V("b")})});
  CHECK(is_instance(inst, t));
  CHECK(is_proper_instance(inst, t));
  CHECK_FALSE(is_proper_instance(u, t));
  CHECK(variant_key({t}) == variant_key({u}));
  auto [r1, r2] = rename_apart(t, t);
  for (const auto& x : vars(r1)) CHECK(occurrences(r2, x) == 0);
}

TEST_CASE("linearity") {
  CHECK(is_linear(F("f", {V("x"), V("y")})));
  CHECK_FALSE(is_linear(F("f", {V("x"), V("x")})));
  CHECK(is_ground(F("g", {F("c")})));
}

TEST_CASE("term parse errors carry positions") {
  Signature sig;
  sig.symbols = {{"f", 2}, {"c", 0}};
  CHECK_THROWS_AS(parse_term(sig, "f(c)"), ParseError);
  try {
    parse_term(sig, "f(c,", ParseContext{"t", 3, 1, true});
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
}
