#include "rw2/presets.hpp"

#include <functional>

#include "rw2/prooft.hpp"

namespace rw2 {

const char* const kTensor = "tensor";

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "monoidal",   "laplaza-assoc",  "catalan",        "sym-catalan", "nested-cex",
      "disjoint-cex", "infiniteqf-cex", "finiteness-cex", "iterated"};
  return names;
}

bool preset_takes_n(const std::string& name) {
  return name == "catalan" || name == "sym-catalan" || name == "iterated";
}

namespace {

Term v(const std::string& x) { return Term::var(x); }
Term f(const std::string& s, std::vector<Term> args = {}) { return Term::app(s, std::move(args)); }
Term tens(std::vector<Term> args) { return Term::app(kTensor, std::move(args)); }

void add_rule(Theory2& th, const std::string& label, const Term& lhs, const Term& rhs) {
  Rule r;
  r.label = label;
  r.lhs = lhs;
  r.rhs = rhs;
  th.rules.push_back(r);
}

void declare_vars(Theory2& th, const Term& t) {
  for (const auto& x : vars(t)) th.sig.declared_vars.insert(x);
}

struct StepSpec {
  std::string rule;
  Address address;
};

Address arg(int i) { return {{kTensor, i}}; }

// Builds the reduction obtained by applying the listed steps from `source`.
Reduction steps_reduction(const Theory2& th, const Term& source, const std::vector<StepSpec>& steps,
                          const std::string& what) {
  Path p;
  Term cur = source;
  for (const auto& s : steps) {
    auto st = try_step(th, cur, s.rule, s.address);
    if (!st)
      throw PresetError("generator bug in " + what + ": " + s.rule + " does not apply at " +
                        to_string(s.address) + " in " + th.sig.show(cur));
    p.push_back(*st);
    cur = st->target;
  }
  return path_to_reduction(th, source, p);
}

void add_axiom(Theory2& th, const std::string& label, const Term& source, const std::vector<StepSpec>& lhs,
               const std::vector<StepSpec>& rhs) {
  declare_vars(th, source);
  Reduction l = steps_reduction(th, source, lhs, label);
  Reduction r = steps_reduction(th, source, rhs, label);
  if (!(l.target() == r.target()))
    throw PresetError("generator bug in " + label + ": sides end at " + th.sig.show(l.target()) +
                      " and " + th.sig.show(r.target()));
  th.axioms.push_back({label, l, r});
}

std::vector<Term> seq_vars(const std::string& stem, int from, int to) {
  std::vector<Term> out;
  for (int k = from; k <= to; ++k) out.push_back(v(stem + std::to_string(k)));
  return out;
}

std::vector<Term> cat(std::initializer_list<std::vector<Term>> parts) {
  std::vector<Term> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

void monoidal_signature(Theory2& th) {
  th.sig.add({kTensor, 2});
  th.sig.add({"I", 0});
  th.sig.aliases["⊗"] = kTensor;
  th.sig.aliases["*"] = kTensor;
  th.sig.infix.insert(kTensor);
}

void monoidal_rank(Theory2& th, bool with_unit) {
  RankFn rk;
  auto& m = rk.measure("rank");
  m.base = 1;
  m.by_symbol[kTensor] = RankFn::Affine{{{1, "rank", 1}, {2, "rank", 2}}, -1};
  if (with_unit) m.by_symbol["I"] = RankFn::Affine{{}, 1};
  th.rank = rk;
}

Theory2 monoidal(bool units) {
  Theory2 th;
  th.name = units ? "monoidal" : "laplaza-assoc";
  monoidal_signature(th);
  if (!units) th.sig.symbols.pop_back();
  Term a = v("a"), b = v("b"), c = v("c"), d = v("d");
  auto t = [](Term x, Term y) { return tens({x, y}); };
  add_rule(th, "alpha", t(a, t(b, c)), t(t(a, b), c));
  if (units) {
    add_rule(th, "lambda", t(f("I"), a), a);
    add_rule(th, "rho", t(a, f("I")), a);
  }
  Address l1 = arg(1), l2 = arg(2);
  add_axiom(th, "pentagon", t(a, t(b, t(c, d))), {{"alpha", {}}, {"alpha", {}}},
            {{"alpha", l2}, {"alpha", {}}, {"alpha", l1}});
  if (units) {
    add_axiom(th, "triangle", t(a, t(f("I"), c)), {{"alpha", {}}, {"rho", l1}}, {{"lambda", l2}});
    th.make_invertible("alpha");
    th.make_invertible("lambda");
    th.make_invertible("rho");
  }
  monoidal_rank(th, units);
  return th;
}

std::string alpha_name(int i) { return "alpha" + std::to_string(i); }
std::string tau_name(int i) { return "tau" + std::to_string(i); }

void catalan_core(Theory2& th, int n) {
  th.sig.add({kTensor, n});
  th.sig.aliases["⊗"] = kTensor;
  for (int i = 1; i < n; ++i) {
    // alpha_i: ⊗(x_1^i, ⊗(x_{i+1}^{i+n}), x_{i+n+1}^{2n-1}) -> ⊗(x_1^{i-1}, ⊗(x_i^{i+n-1}), x_{i+n}^{2n-1})
    Term lhs = tens(cat({seq_vars("x", 1, i), {tens(seq_vars("x", i + 1, i + n))}, seq_vars("x", i + n + 1, 2 * n - 1)}));
    Term rhs = tens(cat({seq_vars("x", 1, i - 1), {tens(seq_vars("x", i, i + n - 1))}, seq_vars("x", i + n, 2 * n - 1)}));
    add_rule(th, alpha_name(i), lhs, rhs);
  }
  // Pentagon: ⊗(X, y1, ⊗(y_2^n, ⊗(y_{n+1}^{2n})), Z)
  for (int i = 1; i <= n - 1; ++i) {
    Term src = tens(cat({seq_vars("x", 1, i - 1),
                         {v("y1")},
                         {tens(cat({seq_vars("y", 2, n), {tens(seq_vars("y", n + 1, 2 * n))}}))},
                         seq_vars("z", 1, n - i - 1)}));
    std::vector<StepSpec> rhs = {{alpha_name(n - 1), arg(i + 1)}, {alpha_name(i), {}}};
    for (int k = n - 1; k >= 1; --k) rhs.push_back({alpha_name(k), arg(i)});
    add_axiom(th, "pentagon" + std::to_string(i), src, {{alpha_name(i), {}}, {alpha_name(i), {}}}, rhs);
  }
  // Adjacent associativity: ⊗(X, y1, ⊗(y_2^{n+1}), ⊗(y_{n+2}^{2n+1}), Z)
  for (int i = 1; i <= n - 2; ++i) {
    Term src = tens(cat({seq_vars("x", 1, i - 1),
                         {v("y1")},
                         {tens(seq_vars("y", 2, n + 1))},
                         {tens(seq_vars("y", n + 2, 2 * n + 1))},
                         seq_vars("z", 1, n - i - 2)}));
    add_axiom(th, "adjacent" + std::to_string(i), src,
              {{alpha_name(i), {}}, {alpha_name(i + 1), {}}, {alpha_name(i), {}}},
              {{alpha_name(i + 1), {}}, {alpha_name(i), {}}, {alpha_name(1), arg(i)}});
  }
}

void catalan_rank_fn(Theory2& th, int n) {
  RankFn rk;
  auto& r = rk.measure("rank");
  r.base = 0;
  RankFn::Affine ra;
  for (int i = 1; i <= n; ++i) ra.terms.push_back({1, "rank", i});
  for (int i = 2; i <= n; ++i) ra.terms.push_back({i - 1, "L", i});
  ra.constant = -static_cast<long>(n) * (n - 1) / 2;
  r.by_symbol[kTensor] = ra;
  auto& l = rk.measure("L");
  l.base = 1;
  RankFn::Affine la;
  for (int i = 1; i <= n; ++i) la.terms.push_back({1, "L", i});
  l.by_symbol[kTensor] = la;
  th.rank = rk;
}

// alpha_i at the root against alpha_j inside the moved block, j <= n-2:
// alpha_i ; ⊗^i(alpha_{j+1}) = ⊗^{i+1}(alpha_j) ; alpha_i
void nested_squares(Theory2& th, int n) {
  for (int i = 1; i <= n - 1; ++i)
    for (int j = 1; j <= n - 2; ++j) {
      Term inner = tens(seq_vars("v", 1, n));
      Term block = tens(cat({seq_vars("w", 1, j), {inner}, seq_vars("w", j + 2, n)}));
      Term src = tens(cat({seq_vars("x", 1, i), {block}, seq_vars("z", 1, n - i - 1)}));
      add_axiom(th, "nested" + std::to_string(i) + "_" + std::to_string(j), src,
                {{alpha_name(i), {}}, {alpha_name(j + 1), arg(i)}},
                {{alpha_name(j), arg(i + 1)}, {alpha_name(i), {}}});
    }
  // alpha_i and alpha_j at the root with j >= i+2 move disjoint blocks.
  for (int i = 1; i <= n - 1; ++i)
    for (int j = i + 2; j <= n - 1; ++j) {
      std::vector<Term> args;
      int next = 1;
      for (int k = 1; k <= n; ++k) {
        if (k == i + 1) args.push_back(tens(seq_vars("u", 1, n)));
        else if (k == j + 1) args.push_back(tens(seq_vars("v", 1, n)));
        else args.push_back(v("x" + std::to_string(next++)));
      }
      add_axiom(th, "far" + std::to_string(i) + "_" + std::to_string(j), tens(args),
                {{alpha_name(i), {}}, {alpha_name(j), {}}}, {{alpha_name(j), {}}, {alpha_name(i), {}}});
    }
}

Theory2 catalan(int n, bool symmetric, bool with_nested) {
  Theory2 th;
  th.name = (symmetric ? "sym-catalan-" : "catalan-") + std::to_string(n);
  catalan_core(th, n);
  if (with_nested) {
    nested_squares(th, n);
    th.name += "-nested";
  }
  if (symmetric) {
    auto t = seq_vars("t", 1, n);
    for (int i = 1; i < n; ++i) {
      auto s = t;
      std::swap(s[i - 1], s[i]);
      add_rule(th, tau_name(i), tens(t), tens(s));
    }
    for (int i = 1; i < n; ++i)
      add_axiom(th, "involution" + std::to_string(i), tens(t), {{tau_name(i), {}}, {tau_name(i), {}}}, {});
    // The printed padding W = w_1^i does not fit the arity; w_1^{i-2} is the one that does.
    for (int i = 2; i <= n; ++i)
      for (int j = 1; j <= n - 2; ++j) {
        Term src = tens(cat({seq_vars("w", 1, i - 2), {v("x")}, {tens(seq_vars("y", 1, n))}, seq_vars("z", 1, n - i)}));
        add_axiom(th, "compat" + std::to_string(i) + "_" + std::to_string(j), src,
                  {{alpha_name(i - 1), {}}, {tau_name(j + 1), arg(i - 1)}},
                  {{tau_name(j), arg(i)}, {alpha_name(i - 1), {}}});
      }
    if (n >= 3)
      th.warnings.push_back("sym-catalan: compatibility axiom padding read as W = w_1^{i-2}, Z = z_1^{n-i} "
                            "(the printed W = w_1^i gives n+2 arguments)");
    for (int i = 1; i <= n - 2; ++i)
      add_axiom(th, "threecycle" + std::to_string(i), tens(t),
                {{tau_name(i), {}}, {tau_name(i + 1), {}}, {tau_name(i), {}}},
                {{tau_name(i + 1), {}}, {tau_name(i), {}}, {tau_name(i + 1), {}}});
    for (int i = 1; i <= n - 1; ++i) {
      Term src = tens(cat({seq_vars("w", 1, i - 1), {tens(seq_vars("x", 1, n))}, {v("y")}, seq_vars("z", 1, n - i - 1)}));
      th.make_invertible(alpha_name(i));
      std::vector<StepSpec> rhs = {{alpha_name(i) + "^-1", {}}};
      for (int k = n - 1; k >= 1; --k) rhs.push_back({tau_name(k), arg(i + 1)});
      rhs.push_back({alpha_name(i), {}});
      add_axiom(th, "hexagon" + std::to_string(i), src,
                {{tau_name(i), {}}, {alpha_name(i), {}}, {tau_name(1), arg(i)}}, rhs);
    }
  }
  for (int i = 1; i < n; ++i) th.make_invertible(alpha_name(i));
  if (symmetric)
    for (int i = 1; i < n; ++i) th.make_invertible(tau_name(i));
  catalan_rank_fn(th, n);
  return th;
}

Theory2 nested() {
  Theory2 th;
  th.name = "nested-cex";
  for (auto s : {"I", "J", "H"}) th.sig.add({s, 1});
  Term x = v("x");
  add_rule(th, "r1", f("I", {x}), f("J", {x}));
  add_rule(th, "r2", f("I", {f("J", {x})}), f("H", {x}));
  add_rule(th, "r3", f("J", {f("I", {x})}), f("H", {x}));
  th.seeds.push_back(f("I", {f("I", {x})}));
  return th;
}

Theory2 disjoint() {
  Theory2 th;
  th.name = "disjoint-cex";
  for (auto s : {"I", "J", "H"}) th.sig.add({s, 1});
  th.sig.add({kTensor, 2});
  th.sig.aliases["⊗"] = kTensor;
  th.sig.aliases["*"] = kTensor;
  th.sig.infix.insert(kTensor);
  Term x = v("x");
  add_rule(th, "r1", f("I", {x}), f("J", {x}));
  add_rule(th, "r2", tens({f("J", {x}), f("I", {x})}), f("H", {x}));
  add_rule(th, "r3", tens({f("I", {x}), f("J", {x})}), f("H", {x}));
  th.seeds.push_back(tens({f("I", {x}), f("I", {x})}));
  return th;
}

Theory2 infiniteqf() {
  Theory2 th;
  th.name = "infiniteqf-cex";
  for (auto s : {"F", "G", "I", "H"}) th.sig.add({s, 1});
  Term x = v("x");
  add_rule(th, "iG", f("I", {x}), f("G", {f("I", {x})}));
  add_rule(th, "iF", f("I", {x}), f("F", {f("I", {x})}));
  add_rule(th, "fF", f("F", {x}), f("F", {f("F", {x})}));
  add_rule(th, "gG", f("G", {x}), f("G", {f("G", {x})}));
  add_rule(th, "fH", f("F", {x}), f("H", {x}));
  add_rule(th, "gH", f("G", {x}), f("H", {x}));
  th.seeds.push_back(f("I", {x}));
  return th;
}

}  // namespace

Term finiteness_seed(int k) {
  Term t = f("S", {v("x0")});
  for (int i = 1; i <= k; ++i) t = f("F", {t, v("x" + std::to_string(i))});
  return f("F", {t, f("T", {v("y")})});
}

namespace {

Theory2 finiteness() {
  Theory2 th;
  th.name = "finiteness-cex";
  th.sig.add({"W", 0});
  for (auto s : {"S", "S'", "T", "T'"}) th.sig.add({s, 1});
  th.sig.add({"F", 2});
  Term a = v("a"), b = v("b"), c = v("c");
  add_rule(th, "pi", f("F", {f("F", {a, b}), c}), f("F", {a, b}));
  add_rule(th, "alpha", f("F", {f("S", {a}), b}), f("W"));
  add_rule(th, "beta", f("F", {a, f("T", {b})}), f("W"));
  add_rule(th, "sigma", f("S", {a}), f("S'", {a}));
  add_rule(th, "tau", f("T", {a}), f("T'", {a}));
  for (int k = 0; k <= 4; ++k) th.seeds.push_back(finiteness_seed(k));
  return th;
}

Theory2 iterated(int n) {
  Theory2 th;
  th.name = "iterated-" + std::to_string(n);
  th.sig.add({"I", 0});
  auto sym = [](int i) { return "t" + std::to_string(i); };
  for (int i = 1; i <= n; ++i) {
    th.sig.add({sym(i), 2});
    th.sig.aliases["⊗" + std::to_string(i)] = sym(i);
    th.sig.infix.insert(sym(i));
  }
  Term a = v("a"), b = v("b"), c = v("c"), d = v("d"), I = f("I");
  int m = 0;
  for (int i = 1; i <= n; ++i) {
    auto t = [&](Term x, Term y) { return f(sym(i), {x, y}); };
    th.modulo.push_back({"m" + std::to_string(++m), t(a, t(b, c)), t(t(a, b), c)});
    th.modulo.push_back({"m" + std::to_string(++m), t(I, a), a});
    th.modulo.push_back({"m" + std::to_string(++m), t(a, I), a});
    th.term_eqs.push_back({"assoc" + std::to_string(i), t(a, t(b, c)), t(t(a, b), c)});
    th.term_eqs.push_back({"lunit" + std::to_string(i), t(I, a), a});
    th.term_eqs.push_back({"runit" + std::to_string(i), t(a, I), a});
  }
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      auto ti = [&](Term x, Term y) { return f(sym(i), {x, y}); };
      auto tj = [&](Term x, Term y) { return f(sym(j), {x, y}); };
      add_rule(th, "eta" + std::to_string(i) + std::to_string(j), ti(tj(a, b), tj(c, d)),
               tj(ti(a, c), ti(b, d)));
    }
  return th;
}

}  // namespace

Theory2 gen(const PresetId& p) {
  if (preset_takes_n(p.name) && p.n < 2) throw PresetError("bad-parameter: n must be at least 2");
  if (p.n > 12) throw PresetError("bad-parameter: n too large");
  Theory2 th;
  if (p.name == "monoidal") th = monoidal(true);
  else if (p.name == "laplaza-assoc") th = monoidal(false);
  else if (p.name == "catalan") th = catalan(p.n, false, p.nested_squares);
  else if (p.name == "sym-catalan") th = catalan(p.n, true, p.nested_squares);
  else if (p.name == "nested-cex") th = nested();
  else if (p.name == "disjoint-cex") th = disjoint();
  else if (p.name == "infiniteqf-cex") th = infiniteqf();
  else if (p.name == "finiteness-cex") th = finiteness();
  else if (p.name == "iterated") th = iterated(p.n);
  else throw PresetError("bad-parameter: unknown preset '" + p.name + "'");
  for (const auto& r : th.rules)
    for (const auto& x : vars(r.lhs)) th.sig.declared_vars.insert(x);
  for (const auto& r : th.modulo)
    for (const auto& x : vars(r.lhs)) th.sig.declared_vars.insert(x);
  for (const auto& t : th.seeds) declare_vars(th, t);
  return th;
}

std::vector<Term> U(const Term& t) {
  if (t.is_var() || t.name() != kTensor) return {t};
  std::vector<Term> out;
  for (const auto& a : t.args()) {
    auto u = U(a);
    out.insert(out.end(), u.begin(), u.end());
  }
  return out;
}

Term lmb(int n, const Term& t) {
  if (!t.is_var() && t.name() == kTensor && static_cast<int>(t.arity()) != n)
    throw PresetError("arity-mismatch: expected " + std::to_string(n) + "-ary tensor");
  auto u = U(t);
  if (u.size() == 1) return u[0];
  if (u.size() < static_cast<std::size_t>(n) || (u.size() - n) % (n - 1) != 0)
    throw PresetError("arity-mismatch: " + std::to_string(u.size()) + " leaves");
  Term acc = tens({u.begin(), u.begin() + n});
  for (std::size_t k = n; k < u.size(); k += n - 1) {
    std::vector<Term> args = {acc};
    args.insert(args.end(), u.begin() + static_cast<long>(k), u.begin() + static_cast<long>(k + n - 1));
    acc = tens(std::move(args));
  }
  return acc;
}

long catalan_length(const Term& t) {
  if (t.is_var() || t.name() != kTensor) return 1;
  long s = 0;
  for (const auto& a : t.args()) s += catalan_length(a);
  return s;
}

long catalan_rank(int n, const Term& t) {
  if (t.is_var() || t.name() != kTensor) return 0;
  if (static_cast<int>(t.arity()) != n) throw PresetError("arity-mismatch in catalan_rank");
  long r = -static_cast<long>(n) * (n - 1) / 2;
  for (int i = 1; i <= n; ++i) {
    r += catalan_rank(n, t.arg(i - 1));
    r += (i - 1) * catalan_length(t.arg(i - 1));
  }
  return r;
}

Term random_catalan(int n, int leaves, std::mt19937_64& rng, const std::string& stem) {
  int next = 1;
  std::function<Term(int)> build = [&](int k) -> Term {
    if (k == 1) return v(stem + std::to_string(next++));
    // Split k leaves among n children: k - 1 = sum of (k_i - 1), each k_i - 1 divisible by n - 1.
    int units = (k - 1) / (n - 1) - 1;
    std::vector<int> parts(n, 0);
    for (int u = 0; u < units; ++u) parts[std::uniform_int_distribution<int>(0, n - 1)(rng)]++;
    std::vector<Term> args;
    for (int i = 0; i < n; ++i) args.push_back(build(1 + parts[i] * (n - 1)));
    return tens(std::move(args));
  };
  if (leaves < 1 || (leaves - 1) % (n - 1) != 0) throw PresetError("bad leaf count for random_catalan");
  return build(leaves);
}

}  // namespace rw2
