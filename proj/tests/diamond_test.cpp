#include <doctest.h>

#include <functional>
#include <map>

#include "rw2/coherence.hpp"
#include "rw2/diamond.hpp"
#include "rw2/dsl.hpp"
#include "rw2/presets.hpp"

using namespace rw2;

namespace {

Term C(const std::string& c) { return Term::app(c); }

struct Small {
  RedGraph g;
  std::map<std::string, std::size_t> v;
  std::size_t edge(const std::string& a, const std::string& b) {
    for (const auto& x : {a, b})
      if (!v.count(x)) v[x] = g.add_vertex(C(x));
    return g.add_edge(v[a], v[b], a + b);
  }
};

// s -> a -> t and s -> b -> t.
Small square() {
  Small s;
  s.edge("s", "a");
  s.edge("a", "t");
  s.edge("s", "b");
  s.edge("b", "t");
  return s;
}

ParallelPair sq_pair(Small& s) { return {s.v["s"], s.v["t"], {0, 1}, {2, 3}}; }

// Number of directed s-t paths of a DAG by dynamic programming.
long dag_paths(const RedGraph& g, std::size_t s, std::size_t t) {
  std::map<std::size_t, long> memo;
  std::function<long(std::size_t)> go = [&](std::size_t u) -> long {
    if (u == t) return 1;
    if (auto it = memo.find(u); it != memo.end()) return it->second;
    long c = 0;
    for (auto e : g.out(u)) c += go(g.edges[e].to);
    return memo[u] = c;
  };
  return go(s);
}

}  // namespace

TEST_CASE("plain square is a diamond") {
  Small s = square();
  CHECK(is_diamond(s.g, sq_pair(s)).diamond);
}

TEST_CASE("a chord through the interval splits the square") {
  Small s = square();
  s.edge("a", "b");
  CHECK_FALSE(is_diamond(s.g, sq_pair(s)).diamond);
}

TEST_CASE("a zig-zag through a third interval vertex splits the square") {
  Small s = square();
  s.edge("a", "c");
  s.edge("b", "c");
  s.edge("c", "t");
  CHECK_FALSE(is_diamond(s.g, sq_pair(s)).diamond);
}

TEST_CASE("a zig-zag leaving the interval does not split the square") {
  Small s = square();
  s.edge("a", "c");
  s.edge("b", "c");
  CHECK(is_diamond(s.g, sq_pair(s)).diamond);
  auto iv = interval(s.g, s.v["s"], s.v["t"]);
  CHECK(iv.size() == 4);
}

TEST_CASE("path enumeration agrees with a DAG path count") {
  Theory2 c2 = gen({"catalan", 2});
  Theory2 pos = positive_subtheory(c2, standard_orientation(c2));
  for (int leaves = 3; leaves <= 6; ++leaves) {
    Term u = Term::var("x" + std::to_string(leaves));
    for (int i = leaves - 1; i >= 1; --i) u = Term::app(kTensor, {Term::var("x" + std::to_string(i)), u});
    RedGraph g = build_graph(pos, {u}, 20);
    std::size_t s = *g.find(u), t = *g.find(lmb(2, u));
    CHECK(paths(g, s, t, 100).size() == static_cast<std::size_t>(dag_paths(g, s, t)));
    auto ps = paths(g, s, t, 100);
    for (const auto& p : ps) {
      CHECK(g.edges[p.front()].from == s);
      CHECK(g.edges[p.back()].to == t);
    }
  }
}

TEST_CASE("nested and disjoint counterexamples have two basic diamonds") {
  for (const char* name : {"nested-cex", "disjoint-cex"}) {
    CAPTURE(name);
    Theory2 th = gen({name});
    RedGraph g = build_graph(th, th.seeds, 3);
    auto ds = basic_diamonds(g, th);
    CHECK(ds.size() == 2);
    for (const auto& d : ds) CHECK(is_diamond(g, d.pair).diamond);
  }
}

TEST_CASE("finiteness family grows with depth") {
  Theory2 th = gen({"finiteness-cex"});
  std::size_t prev = 0;
  for (int d = 3; d <= 4; ++d) {
    RedGraph g = build_graph(th, th.seeds, d);
    auto ds = basic_diamonds(g, th);
    CHECK(ds.size() > prev);
    prev = ds.size();
    for (std::size_t i = 0; i < ds.size(); ++i)
      for (std::size_t j = 0; j < ds.size(); ++j)
        if (i != j) CHECK_FALSE(diamond_instance_of(g, ds[i].pair, ds[j].pair));
  }
}

TEST_CASE("depth bound marks the frontier") {
  Theory2 th = gen({"infiniteqf-cex"});
  RedGraph g = build_graph(th, th.seeds, 2);
  bool any = false;
  for (std::size_t v = 0; v < g.vertices.size(); ++v)
    if (g.frontier[v]) {
      any = true;
      CHECK(g.dist[v] == 2);
    }
  CHECK(any);
}

TEST_CASE("export lists one edge per line") {
  Theory2 th = gen({"nested-cex"});
  RedGraph g = build_graph(th, th.seeds, 3);
  std::string out = export_graph(g, th.sig);
  CHECK(static_cast<std::size_t>(std::count(out.begin(), out.end(), '\n')) == g.edges.size());
  CHECK(out.find('\t') != std::string::npos);
}

TEST_CASE("reverse branching") {
  Theory2 grow = parse_theory("theory t\nsig F/1\nvar x\nrule r: F(x) -> F(F(x))\n");
  auto a = reverse_branching_check(grow, {Term::app("F", {Term::var("x")})});
  CHECK(a.evidence);

  Theory2 empty = parse_theory("theory t\nsig F/1\nvar x\n");
  CHECK(reverse_branching_check(empty, {Term::var("x")}).evidence);

  Theory2 loop = parse_theory("theory t\nsig F/2 G/1 H/1\nvar s t\nequation e: s = F(s,s)\nrule rho: G(t) -> H(t)\n");
  auto b = reverse_branching_check(loop, {Term::app("G", {Term::var("x")})});
  CHECK_FALSE(b.evidence);
  REQUIRE(b.samples.size() == 1);
  const auto& c = b.samples[0].counts;
  REQUIRE(c.size() == 3);
  CHECK(c[0] < c[1]);
  CHECK(c[1] < c[2]);
}
