#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "rw2/coherence.hpp"
#include "rw2/dsl.hpp"
#include "rw2/presets.hpp"
#include "rw2/theory.hpp"

using namespace rw2;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Left comb: every tensor argument but the first is a leaf.
bool is_left_comb(const Term& t) {
  if (t.is_var()) return true;
  for (std::size_t i = 1; i < t.arity(); ++i)
    if (!t.arg(i).is_var()) return false;
  return is_left_comb(t.arg(0));
}

void leaves(const Term& t, std::vector<std::string>& out) {
  if (t.is_var()) {
    out.push_back(t.name());
    return;
  }
  for (const auto& a : t.args()) leaves(a, out);
}

}  // namespace

TEST_CASE("golden theory files round-trip") {
  for (const char* name : {"monoidal", "laplaza-assoc", "catalan2", "catalan3", "catalan3-nested", "sym-catalan2",
                           "nested-cex", "disjoint-cex", "infiniteqf-cex", "finiteness-cex", "iterated"}) {
    CAPTURE(name);
    std::string path = std::string(RW2_DATA_DIR) + "/" + name + ".rw2";
    std::string text = slurp(path);
    REQUIRE_FALSE(text.empty());
    Theory2 th = parse_theory(text, path);
    CHECK(emit_theory(th) == text);
  }
}

TEST_CASE("presets match their golden files") {
  CHECK(emit_theory(gen({"monoidal"})) == slurp(std::string(RW2_DATA_DIR) + "/monoidal.rw2"));
  CHECK(emit_theory(gen({"catalan", 3})) == slurp(std::string(RW2_DATA_DIR) + "/catalan3.rw2"));
  CHECK(emit_theory(gen({"catalan", 3, true})) == slurp(std::string(RW2_DATA_DIR) + "/catalan3-nested.rw2"));
}

TEST_CASE("parse errors report file, line and column") {
  const std::string text = "theory t\nsig f/1\nvar x\nrule r: f(x) -> g(x)\n";
  try {
    parse_theory(text, "bad.rw2");
    FAIL("accepted unknown symbol");
  } catch (const ParseError& e) {
    CHECK(e.file == "bad.rw2");
    CHECK(e.line == 4);
    CHECK(e.col > 1);
  }
  CHECK_THROWS_AS(parse_theory("theory t\nsig f/1\nrule r f(x)\n"), ParseError);
  CHECK_THROWS_AS(parse_theory("theory t\nsig f/1\nvar x\nrule r: f(x) -> f(x)\nrule r: f(x) -> x\n"), ParseError);
}

TEST_CASE("rank functions") {
  Theory2 m = gen({"monoidal"});
  REQUIRE(m.rank);
  Term a = Term::var("a"), i = Term::app("I");
  Term t = Term::app("tensor", {a, Term::app("tensor", {i, a})});
  // rho(I)=1, rho(var)=1, rho(x (x) y) = rho(x) + 2 rho(y) - 1
  CHECK(m.rank->eval(i) == 1);
  CHECK(m.rank->eval(t) == 1 + 2 * (1 + 2 * 1 - 1) - 1);
  for (int n = 2; n <= 4; ++n) {
    Theory2 c = gen({"catalan", n});
    std::mt19937_64 rng(n);
    for (int k = 0; k < 50; ++k) {
      Term u = random_catalan(n, 1 + (n - 1) * (1 + k % 5), rng);
      CHECK(c.rank->eval(u) == catalan_rank(n, u));
    }
  }
}

TEST_CASE("rank certificate rejects a non-decreasing rank") {
  Theory2 th = parse_theory("theory t\nsig f/1 c/0\nvar x\nrule r: f(x) -> f(f(x))\nrank c = 1\nrank f = $1 + 1 base 1\n");
  auto v = check_rank_certificate(th, *th.rank, default_sampler(th, 3), 50);
  CHECK_FALSE(v.certified);
  REQUIRE(v.counterexample);
  CHECK(v.rank_after >= v.rank_before);
}

TEST_CASE("normalization strategies agree with the left comb") {
  for (int n = 2; n <= 4; ++n) {
    Theory2 pos = positive_subtheory(gen({"catalan", n}), standard_orientation(gen({"catalan", n})));
    std::mt19937_64 rng(100 + n);
    for (int k = 0; k < 40; ++k) {
      Term u = random_catalan(n, 1 + (n - 1) * (1 + k % 6), rng);
      std::vector<std::string> before, after;
      leaves(u, before);
      for (auto s : {Strategy::innermost(), Strategy::outermost(), Strategy::random(k)}) {
        auto r = normalize(pos, u, s);
        CHECK_FALSE(r.fuel_exhausted);
        CHECK(is_left_comb(r.nf));
        after.clear();
        leaves(r.nf, after);
        CHECK(after == before);
        CHECK(replay(pos, u, r.trace) == r.nf);
        CHECK(find_redexes(pos, r.nf).empty());
      }
    }
  }
}

TEST_CASE("fuel exhaustion is reported") {
  Theory2 th = parse_theory("theory t\nsig f/1\nvar x\nrule r: f(x) -> f(f(x))\n");
  auto r = normalize(th, Term::app("f", {Term::var("x")}), Strategy::innermost(), 25);
  CHECK(r.fuel_exhausted);
  CHECK(r.trace.size() == 25);
}

TEST_CASE("invertible rules get formal inverses") {
  Theory2 m = gen({"monoidal"});
  CHECK(m.fully_invertible());
  int formal = 0;
  for (const auto& r : m.rules)
    if (r.is_formal_inverse) {
      ++formal;
      const Rule* f = m.find_rule(r.inverse);
      REQUIRE(f);
      CHECK(f->lhs == r.rhs);
      CHECK(f->rhs == r.lhs);
    }
  CHECK(formal == 3);
}
