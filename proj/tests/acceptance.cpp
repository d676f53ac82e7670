#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "rw2/coherence.hpp"
#include "rw2/critical.hpp"
#include "rw2/diamond.hpp"
#include "rw2/dsl.hpp"
#include "rw2/presets.hpp"
#include "rw2/structmon.hpp"
#include "rw2/thompson.hpp"

using namespace rw2;
using Clock = std::chrono::steady_clock;

namespace {

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Line {
  int id;
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> notes;
  void fail(const std::string& why) {
    pass = false;
    notes.push_back(why);
  }
};

std::vector<Line> results;

Line& begin(int id) {
  results.push_back(Line{id});
  return results.back();
}

Theory2 positive(const Theory2& th) { return positive_subtheory(th, standard_orientation(th)); }

// rho(I) = rho(x) = 1, rho(a (x) b) = rho(a) + 2 rho(b) - 1
long rho(const Term& t) {
  if (t.is_var() || t.arity() == 0) return 1;
  return rho(t.arg(0)) + 2 * rho(t.arg(1)) - 1;
}

long leaves_of(const Term& t) {
  if (t.is_var()) return 1;
  long s = 0;
  for (const auto& a : t.args()) s += leaves_of(a);
  return s;
}

// Sum over tensor nodes of sum_i (i-1) L(child_i), minus n(n-1)/2 per node.
long crank(int n, const Term& t) {
  if (t.is_var()) return 0;
  long r = -static_cast<long>(n) * (n - 1) / 2;
  for (int i = 0; i < n; ++i) r += crank(n, t.arg(i)) + i * leaves_of(t.arg(i));
  return r;
}

void leaf_list(const Term& t, std::vector<Term>& out) {
  if (t.is_var()) {
    out.push_back(t);
    return;
  }
  for (const auto& a : t.args()) leaf_list(a, out);
}

// Left comb over the leaves of t, built without the library.
Term comb(int n, const Term& t) {
  std::vector<Term> ls;
  leaf_list(t, ls);
  Term acc = ls[0];
  std::size_t k = 1;
  while (k < ls.size()) {
    std::vector<Term> args{acc};
    for (int j = 0; j < n - 1; ++j) args.push_back(ls[k++]);
    acc = Term::app(kTensor, args);
  }
  return acc;
}

int random_leaves(int n, int max_leaves, std::mt19937_64& rng) {
  int units = (max_leaves - 1) / (n - 1);
  return 1 + (n - 1) * std::uniform_int_distribution<int>(1, units)(rng);
}

void criterion1() {
  Line& L = begin(1);
  auto t0 = Clock::now();
  Theory2 m = gen({"monoidal"});
  auto spans = critical_spans(positive(m));
  double tm = since(t0);
  Signature& sig = m.sig;
  std::vector<std::string> expected{"a ⊗ (b ⊗ (c ⊗ d))", "I ⊗ (b ⊗ c)", "a ⊗ (I ⊗ c)", "a ⊗ (b ⊗ I)", "I ⊗ I"};
  std::vector<bool> found(expected.size(), false);
  for (const auto& s : spans)
    for (std::size_t i = 0; i < expected.size(); ++i)
      if (alpha_equiv(s.source, parse_term(sig, expected[i], ParseContext{"<e>", 1, 1, true}))) found[i] = true;
  if (spans.size() != 5) L.fail("monoidal+ has " + std::to_string(spans.size()) + " spans");
  for (std::size_t i = 0; i < expected.size(); ++i)
    if (!found[i]) L.fail("missing span source " + expected[i]);
  if (tm >= 1.0) L.fail("monoidal census took " + std::to_string(tm) + " s");

  t0 = Clock::now();
  auto c2 = critical_spans(positive(gen({"catalan", 2})));
  double tc = since(t0);
  if (c2.size() != 1) L.fail("C2 has " + std::to_string(c2.size()) + " spans");
  if (tc >= 1.0) L.fail("C2 census took " + std::to_string(tc) + " s");
  L.detail << "monoidal+ " << spans.size() << " spans (" << tm << " s), C2 " << c2.size() << " span (" << tc
           << " s)";
}

void criterion2() {
  Line& L = begin(2);
  auto t0 = Clock::now();
  std::size_t steps = 0;
  for (const char* name : {"monoidal", "laplaza-assoc"}) {
    Theory2 th = gen({name});
    Theory2 pos = positive(th);
    auto v = check_rank_certificate(pos, *th.rank, default_sampler(pos, 7), 1000, 17);
    if (!v.certified) L.fail(std::string(name) + ": library certificate rejected");
    std::mt19937_64 rng(18);
    auto sample = default_sampler(pos, 7);
    for (int k = 0; k < 1000; ++k) {
      Term t = sample(rng);
      if (t.depth() > 7) L.fail(std::string(name) + ": sample deeper than 7");
      for (const auto& rx : find_redexes(pos, t)) {
        auto st = rewrite_step(pos, t, rx);
        ++steps;
        if (rho(st.target) >= rho(st.source)) L.fail(std::string(name) + ": rank does not drop on " + to_string(st));
        if (th.rank->eval(t) != rho(t)) L.fail(std::string(name) + ": declared rank differs from rho");
      }
    }
  }
  for (int n = 2; n <= 4; ++n) {
    Theory2 th = gen({"catalan", n});
    Theory2 pos = positive(th);
    std::mt19937_64 rng(30 + n);
    TermSampler sampler = [n](std::mt19937_64& r) { return random_catalan(n, random_leaves(n, 14, r), r); };
    auto v = check_rank_certificate(pos, *th.rank, sampler, 1000, 19);
    if (!v.certified) L.fail("C" + std::to_string(n) + ": library certificate rejected");
    for (int k = 0; k < 1000; ++k) {
      Term t = sampler(rng);
      if (catalan_rank(n, t) != crank(n, t)) L.fail("catalan_rank disagrees with the oracle");
      for (const auto& rx : find_redexes(pos, t)) {
        auto st = rewrite_step(pos, t, rx);
        ++steps;
        // alpha_i: the inner tensor sits at argument i+1, u_n is its last argument.
        int i = std::stoi(st.rule.substr(5));
        Address at = st.address;
        at.push_back({kTensor, i + 1});
        at.push_back({kTensor, n});
        long un = leaves_of(*subterm(t, at));
        long drop = crank(n, st.source) - crank(n, st.target);
        if (drop != (n - 1) * un)
          L.fail("C" + std::to_string(n) + ": step " + to_string(st) + " drops by " + std::to_string(drop));
      }
    }
  }
  double tm = since(t0);
  if (tm >= 10.0) L.fail("took " + std::to_string(tm) + " s");
  L.detail << steps << " steps checked (" << tm << " s)";
}

void criterion3() {
  Line& L = begin(3);
  auto t0 = Clock::now();
  int terms = 0;
  for (int n = 2; n <= 4; ++n) {
    Theory2 pos = positive(gen({"catalan", n}));
    std::mt19937_64 rng(40 + n);
    for (int k = 0; k < 500; ++k) {
      Term t = random_catalan(n, random_leaves(n, 14, rng), rng);
      Term want = comb(n, t);
      if (lmb(n, t) != want) L.fail("lmb differs from the left comb");
      for (auto s : {Strategy::innermost(), Strategy::outermost(), Strategy::random(1000 + k)}) {
        auto r = normalize(pos, t, s);
        if (r.fuel_exhausted || r.nf != want) L.fail("C" + std::to_string(n) + ": wrong normal form of " + to_string(t));
      }
      ++terms;
    }
  }
  L.detail << terms << " terms x 3 strategies (" << since(t0) << " s)";
}

std::string assoc_span_id() {
  Theory2 la = gen({"laplaza-assoc"});
  for (const auto& s : critical_spans(positive(la)))
    if (s.left.rule == "alpha" && s.right.rule == "alpha") return s.id;
  return "?";
}

void criterion4() {
  Line& L = begin(4);
  auto t0 = Clock::now();
  auto run = [&](const Theory2& th) { return maclane_verdict(th, standard_orientation(th), *th.rank, 200); };
  auto expect = [&](const std::string& what, const Theory2& th, VerdictKind want) {
    auto v = run(th);
    L.detail << what << "=" << to_string(v.kind) << " ";
    if (v.kind != want) {
      std::string why = what + " is " + to_string(v.kind);
      for (const auto& u : v.certificate.unproven()) why += ", unproven " + u;
      L.fail(why);
    }
    return v;
  };
  expect("laplaza-assoc", gen({"laplaza-assoc"}), VerdictKind::CoherentThm4);
  expect("monoidal", gen({"monoidal"}), VerdictKind::CoherentThm4Invertible);
  expect("C2", gen({"catalan", 2}), VerdictKind::CoherentThm4Invertible);
  expect("C3", gen({"catalan", 3}), VerdictKind::CoherentThm4Invertible);
  Theory2 np = gen({"laplaza-assoc"});
  std::erase_if(np.axioms, [](const CoherenceAxiom& a) { return a.label == "pentagon"; });
  auto v = run(np);
  L.detail << "no-pentagon=" << to_string(v.kind);
  std::string id = assoc_span_id();
  bool named = false;
  for (const auto& r : v.reasons)
    if (r.find(id) != std::string::npos) named = true;
  if (v.kind != VerdictKind::Inconclusive) L.fail("without the pentagon the verdict is " + to_string(v.kind));
  if (!named) L.fail("the inconclusive verdict does not name " + id);
  Theory2 c3n = gen({"catalan", 3, true});
  L.notes.push_back("info: C3 with nested squares is " + to_string(run(c3n).kind));
  double tm = since(t0);
  if (tm >= 60.0) L.fail("took " + std::to_string(tm) + " s");
  L.detail << " (" << tm << " s)";
}

void criterion5() {
  Line& L = begin(5);
  auto t0 = Clock::now();
  auto trial = [&](const Theory2& th, int n, const std::string& tag, bool counts) {
    Theory2 pos = positive(th);
    auto cert = certify_complete(pos, *th.rank, 200, &th);
    std::mt19937_64 rng(50 + n);
    int ok = 0, bad = 0;
    std::string first;
    for (int k = 0; k < 200; ++k) {
      Term t = random_catalan(n, random_leaves(n, 10, rng), rng);
      Path a = normalize(pos, t, Strategy::random(2 * k + 1)).trace;
      Path b = normalize(pos, t, Strategy::random(2 * k + 2)).trace;
      try {
        Tiling tl = prove_equal_to_nf(cert, a, b);
        bool good = a.empty() ? b.empty()
                              : check_tiling(cert.ambient, {path_to_reduction(cert.ambient, t, a),
                                                            path_to_reduction(cert.ambient, t, b)},
                                             tl)
                                    .ok;
        good ? ++ok : ++bad;
        if (!good && first.empty()) first = "tiling rejected on " + to_string(t);
      } catch (const std::exception& e) {
        ++bad;
        if (first.empty()) first = e.what();
      }
    }
    L.detail << tag << " " << ok << "/200 ";
    if (bad) {
      std::string why = tag + ": " + std::to_string(bad) + " failures, first: " + first;
      if (counts) L.fail(why);
      else L.notes.push_back("info: " + why);
    }
  };
  trial(gen({"catalan", 2}), 2, "C2", true);
  trial(gen({"catalan", 3}), 3, "C3", true);
  trial(gen({"catalan", 3, true}), 3, "C3+nested", false);
  L.detail << "(" << since(t0) << " s)";
}

void criterion6() {
  Line& L = begin(6);
  auto t0 = Clock::now();
  for (const char* name : {"nested-cex", "disjoint-cex"}) {
    Theory2 th = gen({name});
    auto g = build_graph(th, th.seeds, 3);
    auto ds = basic_diamonds(g, th);
    L.detail << name << "=" << ds.size() << " ";
    if (ds.size() != 2) L.fail(std::string(name) + " has " + std::to_string(ds.size()) + " basic diamonds");
  }
  Theory2 fin = gen({"finiteness-cex"});
  std::size_t prev = 0;
  for (int d = 3; d <= 5; ++d) {
    auto g = build_graph(fin, fin.seeds, d);
    auto ds = basic_diamonds(g, fin);
    L.detail << "d" << d << "=" << ds.size() << " ";
    if (ds.size() <= prev) L.fail("count does not grow at depth " + std::to_string(d));
    prev = ds.size();
    for (std::size_t i = 0; i < ds.size(); ++i)
      for (std::size_t j = 0; j < ds.size(); ++j) {
        if (i == j) continue;
        const auto& a = ds[i].pair;
        const auto& b = ds[j].pair;
        if (is_proper_instance(g.vertices[a.s], g.vertices[b.s]) && diamond_instance_of(g, a, b))
          L.fail("depth " + std::to_string(d) + ": a diamond is an instance of another");
      }
  }
  L.detail << "(" << since(t0) << " s)";
}

using Perm = std::vector<int>;

Perm pmul(const Perm& a, const Perm& b) {
  Perm c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = b[a[i]];
  return c;
}

bool is_id(const Perm& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != static_cast<int>(i)) return false;
  return true;
}

Perm ppow(const Perm& p, int k) {
  Perm r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = static_cast<int>(i);
  for (int j = 0; j < k; ++j) r = pmul(r, p);
  return r;
}

void criterion7() {
  Line& L = begin(7);
  auto t0 = Clock::now();
  int axioms = 0;
  for (int n = 2; n <= 4; ++n) {
    std::mt19937_64 rng(70 + n);
    TreeDiagram e = td_id(n);
    for (int k = 0; k < 500; ++k) {
      auto a = td_reduce(random_diagram(n, 12, false, rng));
      auto b = td_reduce(random_diagram(n, 12, false, rng));
      auto c = td_reduce(random_diagram(n, 12, false, rng));
      if (leaf_count(a.dom) > 12) L.fail("random diagram exceeds 12 leaves");
      if (!(td_mul(td_mul(a, b), c) == td_mul(a, td_mul(b, c)))) L.fail("associativity");
      if (!(td_mul(e, a) == a) || !(td_mul(a, e) == a)) L.fail("identity");
      if (!(td_mul(a, td_inv(a)) == e) || !(td_mul(td_inv(a), a) == e)) L.fail("inverse");
      ++axioms;
    }
  }
  int words = 0;
  for (int n = 2; n <= 3; ++n)
    for (const char* family : {"catalan", "sym-catalan"}) {
      Theory2 th = gen({family, n});
      std::vector<const Rule*> gens;
      for (const auto& r : th.rules)
        if (!r.is_formal_inverse) gens.push_back(&r);
      std::mt19937_64 rng(80 + n);
      int done = 0, tries = 0;
      while (done < 200 && tries < 20000) {
        ++tries;
        auto letter = [&]() {
          Letter l{gens[rng() % gens.size()]->label, {}, rng() % 2 == 1};
          int depth = static_cast<int>(rng() % 3);
          for (int d = 0; d < depth; ++d) l.address.push_back({kTensor, 1 + static_cast<int>(rng() % n)});
          return l;
        };
        OperatorWord u, v;
        for (int i = 0, len = 1 + static_cast<int>(rng() % 3); i < len; ++i) u.push_back(letter());
        for (int i = 0, len = 1 + static_cast<int>(rng() % 3); i < len; ++i) v.push_back(letter());
        OperatorWord uv = u;
        uv.insert(uv.end(), v.begin(), v.end());
        if (op_word(th, uv).empty) continue;
        if (!(theta(th, uv, n) == td_mul(theta(th, u, n), theta(th, v, n))))
          L.fail(std::string(family) + " n=" + std::to_string(n) + ": theta(" + to_string(uv) + ") is not a product");
        ++done;
        ++words;
      }
      if (done < 200) L.fail("too few composable words");
    }
  int relations = 0;
  for (int n = 2; n <= 3; ++n) {
    Theory2 sc = gen({"sym-catalan", n});
    for (int m = n; m <= 7; m += n - 1) {
      Term u = left_comb_term(n, m);
      std::vector<Perm> T(m);
      for (int i = 1; i < m; ++i) {
        Operator o = op_word(sc, adjacent_transposition_word(sc, n, m, i));
        if (o.empty) {
          L.fail("T" + std::to_string(i) + " undefined");
          continue;
        }
        T[i] = induced_permutation(o, u);
        Perm want(m);
        for (int j = 0; j < m; ++j) want[j] = j;
        std::swap(want[i - 1], want[i]);
        if (T[i] != want) L.fail("T" + std::to_string(i) + " is not the transposition");
      }
      for (int i = 1; i < m; ++i) {
        if (T[i].empty()) continue;
        if (!is_id(ppow(T[i], 2))) L.fail("T_i^2");
        ++relations;
        if (i + 1 < m) {
          if (!is_id(ppow(pmul(T[i], T[i + 1]), 3))) L.fail("(T_i T_i+1)^3");
          ++relations;
        }
        for (int k = i + 2; k < m; ++k) {
          if (!is_id(ppow(pmul(T[i], T[k]), 2))) L.fail("(T_i T_k)^2");
          ++relations;
        }
      }
    }
  }
  double tm = since(t0);
  if (tm >= 30.0) L.fail("took " + std::to_string(tm) + " s");
  L.detail << axioms << " axiom triples, " << words << " words, " << relations << " Moore relations (" << tm
           << " s)";
}

void criterion8() {
  Line& L = begin(8);
  Theory2 c2 = gen({"catalan", 2});
  std::mt19937_64 rng(90);
  for (auto k : {RelationKind::Identity, RelationKind::Composition, RelationKind::Empty, RelationKind::Functoriality,
                 RelationKind::Coherence}) {
    int eq = 0;
    for (const auto& r : instantiate_relations(c2, k, 100, rng)) {
      auto v = check_relation(r);
      if (v == RelationVerdict::Unequal) L.fail(to_string(k) + ": " + r.description);
      else ++eq;
    }
    L.detail << to_string(k) << " " << eq << "/100 ";
  }
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  results.reserve(8);
  std::vector<std::function<void()>> all{criterion1, criterion2, criterion3, criterion4,
                                         criterion5, criterion6, criterion7, criterion8};
  for (std::size_t i = 0; i < all.size(); ++i) {
    try {
      all[i]();
    } catch (const std::exception& e) {
      if (results.size() <= i) begin(static_cast<int>(i + 1));
      results.back().fail(std::string("exception: ") + e.what());
    }
    const Line& L = results.back();
    std::cout << (L.pass ? "PASS" : "FAIL") << " criterion " << L.id << ": " << L.detail.str() << "\n";
    for (const auto& n : L.notes) std::cout << "    " << n << "\n";
    std::cout.flush();
  }
  int failed = 0;
  for (const auto& L : results) failed += L.pass ? 0 : 1;
  std::cout << (8 - failed) << "/8 criteria pass\n";
  return strict && failed ? 1 : 0;
}
