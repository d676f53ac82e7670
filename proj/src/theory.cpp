#include "rw2/theory.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace rw2 {

void Signature::add(const Symbol& s) {
  for (auto& e : symbols)
    if (e.name == s.name) {
      if (e.arity != s.arity) throw TermError("symbol " + s.name + " redeclared with different arity");
      return;
    }
  symbols.push_back(s);
}

bool Signature::has(const std::string& name) const {
  return std::any_of(symbols.begin(), symbols.end(), [&](const Symbol& s) { return s.name == name; });
}

int Signature::arity(const std::string& name) const {
  for (const auto& s : symbols)
    if (s.name == name) return s.arity;
  return -1;
}

std::string Signature::display_name(const std::string& symbol) const {
  // Prefer non-ASCII aliases such as ⊗ for display.
  std::string best;
  for (const auto& [alias, sym] : aliases)
    if (sym == symbol && (best.empty() || static_cast<unsigned char>(alias[0]) >= 0x80)) best = alias;
  return best.empty() ? symbol : best;
}

std::string Signature::show(const Term& t) const {
  if (!t) return "<null>";
  if (t.is_var()) return t.name();
  if (t.arity() == 2 && infix.count(t.name())) {
    auto side = [&](const Term& u) {
      std::string s = show(u);
      return (!u.is_var() && u.arity() == 2 && infix.count(u.name())) ? "(" + s + ")" : s;
    };
    return side(t.arg(0)) + " " + display_name(t.name()) + " " + side(t.arg(1));
  }
  std::string s = display_name(t.name());
  if (t.args().empty()) return s;
  s += "(";
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) s += ",";
    s += show(t.arg(i));
  }
  return s + ")";
}

RankFn::Measure& RankFn::measure(const std::string& name) {
  for (auto& m : measures)
    if (m.name == name) return m;
  measures.push_back({name, 0, {}});
  return measures.back();
}

const RankFn::Measure* RankFn::find(const std::string& name) const {
  for (const auto& m : measures)
    if (m.name == name) return &m;
  return nullptr;
}

std::vector<std::string> RankFn::uncovered(const Signature& sig) const {
  std::vector<std::string> out;
  for (const auto& s : sig.symbols)
    for (const auto& m : measures)
      if (!m.by_symbol.count(s.name)) {
        out.push_back(m.name + ":" + s.name);
      }
  return out;
}

namespace {

std::vector<long> eval_all(const RankFn& rk, const Term& t) {
  std::vector<long> out(rk.measures.size());
  if (t.is_var()) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = rk.measures[i].base;
    return out;
  }
  std::vector<std::vector<long>> kids;
  for (const auto& a : t.args()) kids.push_back(eval_all(rk, a));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& m = rk.measures[i];
    auto it = m.by_symbol.find(t.name());
    if (it == m.by_symbol.end()) throw TermError("rank " + m.name + " undefined on symbol " + t.name());
    long v = it->second.constant;
    for (const auto& c : it->second.terms) {
      if (c.child < 1 || static_cast<std::size_t>(c.child) > kids.size())
        throw TermError("rank clause for " + t.name() + " refers to missing child $" +
                        std::to_string(c.child));
      std::size_t mi = 0;
      while (mi < rk.measures.size() && rk.measures[mi].name != c.measure) ++mi;
      if (mi == rk.measures.size()) throw TermError("unknown measure " + c.measure);
      v += c.coef * kids[static_cast<std::size_t>(c.child - 1)][mi];
    }
    out[i] = v;
  }
  return out;
}

}  // namespace

long RankFn::eval(const Term& t) const {
  if (measures.empty()) throw TermError("empty rank function");
  return eval_all(*this, t)[0];
}

long RankFn::eval(const Term& t, const std::string& name) const {
  auto v = eval_all(*this, t);
  for (std::size_t i = 0; i < measures.size(); ++i)
    if (measures[i].name == name) return v[i];
  throw TermError("unknown measure " + name);
}

std::string RankFn::describe() const {
  std::ostringstream os;
  for (const auto& m : measures) {
    for (const auto& [sym, a] : m.by_symbol) {
      os << m.name << "(" << sym << ") =";
      for (const auto& c : a.terms) os << " " << (c.coef >= 0 ? "+" : "") << c.coef << "*" << c.measure << "$" << c.child;
      os << " " << (a.constant >= 0 ? "+" : "") << a.constant << "; ";
    }
    os << m.name << "(var) = " << m.base << "\n";
  }
  return os.str();
}

const Rule* Theory2::find_rule(const std::string& label) const {
  for (const auto& r : rules)
    if (r.label == label) return &r;
  return nullptr;
}

Rule* Theory2::find_rule(const std::string& label) {
  for (auto& r : rules)
    if (r.label == label) return &r;
  return nullptr;
}

const CoherenceAxiom* Theory2::find_axiom(const std::string& label) const {
  for (const auto& a : axioms)
    if (a.label == label) return &a;
  return nullptr;
}

void Theory2::make_invertible(const std::string& label) {
  Rule* r = find_rule(label);
  if (!r) throw TermError("invertible: unknown rule " + label);
  if (r->invertible) return;
  r->invertible = true;
  Rule inv;
  inv.label = label + "^-1";
  inv.lhs = r->rhs;
  inv.rhs = r->lhs;
  inv.invertible = true;
  inv.orientation = -r->orientation;
  inv.inverse = label;
  inv.is_formal_inverse = true;
  r->inverse = inv.label;
  rules.push_back(inv);
}

void Theory2::set_orientation(const std::string& label, int sign) {
  Rule* r = find_rule(label);
  if (!r) throw TermError("orient: unknown rule " + label);
  r->orientation = sign;
  if (!r->inverse.empty()) find_rule(r->inverse)->orientation = -sign;
}

bool Theory2::term_linear() const {
  for (const auto& e : term_eqs) {
    Rule r{e.label, e.lhs, e.rhs};
    if (!r.linear()) return false;
  }
  for (const auto& r : modulo)
    if (!r.linear()) return false;
  return true;
}

bool Theory2::non_increasing() const {
  return std::all_of(rules.begin(), rules.end(), [](const Rule& r) { return r.non_increasing(); });
}

bool Theory2::fully_invertible() const {
  return !rules.empty() &&
         std::all_of(rules.begin(), rules.end(), [](const Rule& r) { return r.invertible; });
}

bool Theory2::has_negative_rules() const {
  return std::any_of(rules.begin(), rules.end(), [](const Rule& r) { return r.orientation < 0; });
}

std::vector<Redex> find_redexes(const Theory2& th, const Term& t) {
  std::vector<Redex> out;
  for (const auto& a : function_positions(t)) {
    Term u = *subterm(t, a);
    for (std::size_t i = 0; i < th.rules.size(); ++i) {
      if (auto s = match(th.rules[i].lhs, u)) out.push_back({i, a, std::move(*s)});
    }
  }
  return out;
}

SingularStep rewrite_step(const Theory2&, const Term& t, const Rule& r, const Address& a,
                          const Subst& s) {
  auto u = subterm(t, a);
  if (!u || !(rw2::apply(r.lhs, s) == *u))
    throw TermError("not a redex: " + r.label + " at " + to_string(a) + " in " + to_string(t));
  return {r.label, a, s, t, replace(t, a, rw2::apply(r.rhs, s))};
}

SingularStep rewrite_step(const Theory2& th, const Term& t, const Redex& rx) {
  return rewrite_step(th, t, th.rules.at(rx.rule_index), rx.address, rx.subst);
}

std::optional<SingularStep> try_step(const Theory2& th, const Term& t, const std::string& rule,
                                     const Address& a) {
  const Rule* r = th.find_rule(rule);
  if (!r) return std::nullopt;
  auto u = subterm(t, a);
  if (!u) return std::nullopt;
  auto s = match(r->lhs, *u);
  if (!s) return std::nullopt;
  return SingularStep{r->label, a, *s, t, replace(t, a, rw2::apply(r->rhs, *s))};
}

bool valid_step(const Theory2& th, const SingularStep& s) {
  auto st = try_step(th, s.source, s.rule, s.address);
  return st && st->target == s.target;
}

Term replay(const Theory2& th, const Term& start, const std::vector<SingularStep>& trace) {
  Term cur = start;
  for (const auto& s : trace) {
    if (!(s.source == cur)) throw TermError("trace does not replay at " + to_string(s));
    const Rule* r = th.find_rule(s.rule);
    if (!r) throw TermError("unknown rule " + s.rule);
    cur = rewrite_step(th, cur, *r, s.address, s.subst).target;
  }
  return cur;
}

long default_fuel() {
  if (const char* e = std::getenv("RW2_FUEL")) {
    char* end = nullptr;
    long v = std::strtol(e, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDefaultFuel;
}

namespace {

// Post-order: descendants before ancestors, then left to right.
bool postorder_less(const Address& a, const Address& b) {
  if (a == b) return false;
  if (is_prefix(b, a)) return true;
  if (is_prefix(a, b)) return false;
  return address_less(a, b);
}

}  // namespace

NormalizeResult normalize(const Theory2& th, const Term& t, Strategy strategy, long fuel) {
  NormalizeResult res;
  const bool modulo = !th.modulo.empty();
  res.nf = modulo ? e_normalize(th.modulo, t, fuel) : t;
  std::mt19937_64 rng(strategy.seed);
  for (long used = 0;; ++used) {
    auto rs = find_redexes(th, res.nf);
    if (rs.empty()) return res;
    if (used >= fuel) {
      res.fuel_exhausted = true;
      return res;
    }
    std::size_t pick = 0;
    switch (strategy.kind) {
      case Strategy::Kind::LeftmostOutermost:
        pick = 0;
        break;
      case Strategy::Kind::LeftmostInnermost:
        for (std::size_t i = 1; i < rs.size(); ++i)
          if (postorder_less(rs[i].address, rs[pick].address)) pick = i;
        break;
      case Strategy::Kind::Random:
        pick = std::uniform_int_distribution<std::size_t>(0, rs.size() - 1)(rng);
        break;
    }
    auto step = rewrite_step(th, res.nf, rs[pick]);
    if (modulo) step.target = e_normalize(th.modulo, step.target, fuel);
    res.nf = step.target;
    res.trace.push_back(std::move(step));
  }
}

Term random_term(const Signature& sig, const std::vector<std::string>& var_names, int max_depth,
                 std::mt19937_64& rng) {
  std::vector<const Symbol*> leaves, nodes;
  for (const auto& s : sig.symbols) (s.arity == 0 ? leaves : nodes).push_back(&s);
  std::size_t n_leaf = var_names.size() + leaves.size();
  auto leaf = [&]() {
    std::size_t k = std::uniform_int_distribution<std::size_t>(0, n_leaf - 1)(rng);
    if (k < var_names.size()) return Term::var(var_names[k]);
    return Term::app(leaves[k - var_names.size()]->name);
  };
  if (n_leaf == 0) throw TermError("random_term: no leaves available");
  if (max_depth <= 0 || nodes.empty() || std::bernoulli_distribution(0.3)(rng)) return leaf();
  const Symbol* f = nodes[std::uniform_int_distribution<std::size_t>(0, nodes.size() - 1)(rng)];
  std::vector<Term> args;
  for (int i = 0; i < f->arity; ++i) args.push_back(random_term(sig, var_names, max_depth - 1, rng));
  return Term::app(f->name, std::move(args));
}

TermSampler default_sampler(const Theory2& th, int max_depth) {
  Signature sig = th.sig;
  return [sig, max_depth](std::mt19937_64& rng) {
    return random_term(sig, {"a", "b", "c", "d"}, max_depth, rng);
  };
}

RankVerdict check_rank_certificate(const Theory2& th, const RankFn& rk, const TermSampler& sampler,
                                   std::size_t n_samples, std::uint64_t seed) {
  RankVerdict v;
  v.uncovered = rk.uncovered(th.sig);
  if (!v.uncovered.empty()) {
    v.certified = false;
    return v;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n_samples; ++i) {
    Term t = sampler(rng);
    ++v.samples;
    long before = rk.eval(t);
    for (const auto& rx : find_redexes(th, t)) {
      auto st = rewrite_step(th, t, rx);
      long after = rk.eval(st.target);
      ++v.steps_checked;
      if (after >= before) {
        v.certified = false;
        v.counterexample = st;
        v.rank_before = before;
        v.rank_after = after;
        return v;
      }
    }
  }
  return v;
}

Term e_normalize(const std::vector<Rule>& conv, const Term& t, long fuel) {
  if (conv.empty()) return t;
  Theory2 aux;
  aux.rules = conv;
  auto r = normalize(aux, t, Strategy::innermost(), fuel);
  if (r.fuel_exhausted) throw TermError("e_normalize: fuel exhausted on " + to_string(t));
  return r.nf;
}

Term e_normalize(const Theory2& th, const Term& t) { return e_normalize(th.modulo, t, default_fuel()); }

Theory2 modulo_theory(const Theory2& th) {
  Theory2 m;
  m.name = th.name + "/modulo";
  m.sig = th.sig;
  m.rules = th.modulo;
  return m;
}

}  // namespace rw2
