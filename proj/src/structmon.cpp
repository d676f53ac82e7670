#include "rw2/structmon.hpp"

#include <algorithm>

#include "rw2/prooft.hpp"

namespace rw2 {

std::string to_string(const Letter& l) {
  std::string s = l.idempotent ? "e[" + l.rule + (l.inverse ? "^-1" : "") + "]" : l.rule + (l.inverse ? "^-1" : "");
  return s + "@" + to_string(l.address);
}

std::string to_string(const OperatorWord& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " . " : "") + to_string(w[i]);
  return s;
}

Operator Operator::epsilon() {
  Operator o;
  o.empty = true;
  return o;
}

Operator Operator::from_seed(const Term& s, const Term& t, OperatorWord word) {
  auto c = canonical_rename(std::vector<Term>{s, t}, "x");
  Operator o;
  o.s = c[0];
  o.t = c[1];
  o.word = std::move(word);
  return o;
}

void require_seed_scope(const Theory2& th) {
  int fn = 0;
  for (const auto& s : th.sig.symbols) {
    if (s.arity == 0) throw StructmonError("unsupported-theory: constant symbol " + s.name);
    ++fn;
  }
  if (fn != 1) throw StructmonError("unsupported-theory: operators need exactly one function symbol");
  for (const auto& r : th.rules)
    if (!r.linear()) throw StructmonError("unsupported-theory: rule " + r.label + " is not linear");
}

Operator op_gen(const Theory2& th, const Letter& l) {
  require_seed_scope(th);
  const Rule* r = th.find_rule(l.rule);
  if (!r) throw StructmonError("unknown rule " + l.rule);
  Term s = tag_vars(r->lhs, 0), t = tag_vars(r->rhs, 0);
  if (l.inverse) std::swap(s, t);
  if (l.idempotent) t = s;
  int fresh = 0;
  for (auto it = l.address.rbegin(); it != l.address.rend(); ++it) {
    int ar = th.sig.arity(it->symbol);
    if (it->index < 1 || it->index > ar) throw StructmonError("bad address " + to_string(l.address));
    std::vector<Term> a, b;
    for (int i = 1; i <= ar; ++i) {
      if (i == it->index) {
        a.push_back(s);
        b.push_back(t);
      } else {
        Term c = Term::var("c" + std::to_string(++fresh));
        a.push_back(c);
        b.push_back(c);
      }
    }
    s = Term::app(it->symbol, a);
    t = Term::app(it->symbol, b);
  }
  return Operator::from_seed(s, t, {l});
}

Operator op_gen(const Theory2& th, const std::string& rule, const Address& a) {
  return op_gen(th, Letter{rule, a});
}

std::optional<Term> op_apply(const Operator& o, const Term& u) {
  if (o.empty) return std::nullopt;
  auto m = match(o.s, u);
  if (!m) return std::nullopt;
  return rw2::apply(o.t, *m);
}

Operator op_compose(const Operator& a, const Operator& b) {
  if (a.empty || b.empty) return Operator::epsilon();
  Term s1 = tag_vars(a.s, 1), t1 = tag_vars(a.t, 1);
  Term s2 = tag_vars(b.s, 2), t2 = tag_vars(b.t, 2);
  auto u = unify(t1, s2);
  if (!u) return Operator::epsilon();
  OperatorWord w = a.word;
  w.insert(w.end(), b.word.begin(), b.word.end());
  return Operator::from_seed(rw2::apply(s1, *u), rw2::apply(t2, *u), std::move(w));
}

Operator op_inverse(const Operator& o) {
  if (o.empty) return o;
  OperatorWord w;
  for (auto it = o.word.rbegin(); it != o.word.rend(); ++it) {
    Letter l = *it;
    if (!l.idempotent) l.inverse = !l.inverse;
    w.push_back(l);
  }
  return Operator::from_seed(o.t, o.s, std::move(w));
}

Operator op_word(const Theory2& th, const OperatorWord& w) {
  Operator o = Operator::from_seed(Term::var("x"), Term::var("x"));
  for (const auto& l : w) o = op_compose(o, op_gen(th, l));
  return o;
}

bool is_idempotent(const Operator& o) { return !o.empty && o.s == o.t; }

bool same_operator(const Operator& a, const Operator& b) {
  if (a.empty || b.empty) return a.empty && b.empty;
  return alpha_equiv(std::vector<Term>{a.s, a.t}, std::vector<Term>{b.s, b.t});
}

std::string to_string(RelationKind k) {
  switch (k) {
    case RelationKind::Identity: return "identity";
    case RelationKind::Composition: return "composition";
    case RelationKind::Empty: return "empty";
    case RelationKind::Functoriality: return "functoriality";
    case RelationKind::Naturality: return "naturality";
    case RelationKind::Coherence: return "coherence";
  }
  return "?";
}

std::optional<RelationKind> relation_kind_from_string(const std::string& s) {
  for (auto k : {RelationKind::Identity, RelationKind::Composition, RelationKind::Empty,
                 RelationKind::Functoriality, RelationKind::Naturality, RelationKind::Coherence})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::string to_string(RelationVerdict v) {
  switch (v) {
    case RelationVerdict::Equal: return "equal";
    case RelationVerdict::Unequal: return "unequal";
    case RelationVerdict::BothEmpty: return "both-empty";
  }
  return "?";
}

Operator evaluate(const RelationSide& side, bool group_level) {
  if (side.epsilon) return Operator::epsilon();
  Operator o = Operator::from_seed(Term::var("x"), Term::var("x"));
  for (const auto& f : side.factors) {
    if (group_level && is_idempotent(f)) continue;
    o = op_compose(o, f);
  }
  return o;
}

RelationVerdict check_relation(const Relation& r, bool group_level) {
  Operator a = evaluate(r.lhs, group_level), b = evaluate(r.rhs, group_level);
  if (a.empty && b.empty) return RelationVerdict::BothEmpty;
  return same_operator(a, b) ? RelationVerdict::Equal : RelationVerdict::Unequal;
}

namespace {

// Common instance of two linear terms with disjoint variables, by tree union.
std::optional<Term> linear_meet(const Term& t, const Term& u) {
  if (t.is_var()) return u;
  if (u.is_var()) return t;
  if (t.name() != u.name() || t.arity() != u.arity()) return std::nullopt;
  std::vector<Term> args;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    auto m = linear_meet(t.arg(i), u.arg(i));
    if (!m) return std::nullopt;
    args.push_back(*m);
  }
  return Term::app(t.name(), args);
}

struct Gen {
  const Theory2& th;
  std::mt19937_64& rng;
  int max_depth;
  std::vector<const Rule*> declared;

  Gen(const Theory2& t, std::mt19937_64& r, int d) : th(t), rng(r), max_depth(d) {
    for (const auto& rule : th.rules)
      if (!rule.is_formal_inverse) declared.push_back(&rule);
    if (declared.empty()) throw StructmonError("theory has no rules");
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Address address(int min_len = 0) {
    const Symbol& f = th.sig.symbols.front();
    int len = min_len + pick(max_depth - min_len + 1);
    Address a;
    for (int i = 0; i < len; ++i) a.push_back({f.name, 1 + pick(f.arity)});
    return a;
  }

  Letter letter(const Address& a) {
    const Rule* r = declared[pick(static_cast<int>(declared.size()))];
    return Letter{r->label, a, pick(2) == 1, false};
  }
};

Address append(Address a, const Address& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

std::vector<Relation> instantiate_relations(const Theory2& th, RelationKind kind, int trials,
                                            std::mt19937_64& rng, int max_depth) {
  require_seed_scope(th);
  Gen g(th, rng, std::max(max_depth, 1));
  std::vector<Relation> out;
  for (int k = 0; k < trials; ++k) {
    Relation rel;
    rel.kind = kind;
    switch (kind) {
      case RelationKind::Identity: {
        Letter l = g.letter(g.address());
        Operator o = op_gen(th, l);
        if (k % 2 == 0) {
          Letter e = l;
          e.idempotent = true;
          rel.lhs.factors = {op_gen(th, e), o};
        } else {
          Letter e = l;
          e.inverse = !e.inverse;
          e.idempotent = true;
          rel.lhs.factors = {o, op_gen(th, e)};
        }
        rel.rhs.factors = {o};
        rel.description = to_string(rel.lhs.factors.front().word) + " . " + to_string(rel.lhs.factors.back().word);
        break;
      }
      case RelationKind::Composition: {
        Operator a = op_gen(th, g.letter(g.address())), b = op_gen(th, g.letter(g.address()));
        rel.lhs.factors = {a, b};
        rel.description = to_string(a.word) + " . " + to_string(b.word);
        auto m = linear_meet(tag_vars(a.t, 1), tag_vars(b.s, 2));
        if (!m) {
          rel.rhs.epsilon = true;
        } else {
          auto s = op_apply(op_inverse(a), *m);
          auto t = op_apply(b, *m);
          if (!s || !t) throw StructmonError("composition oracle failed");
          rel.rhs.factors = {Operator::from_seed(*s, *t)};
        }
        break;
      }
      case RelationKind::Empty: {
        Operator o = op_gen(th, g.letter(g.address()));
        if (k % 2) rel.lhs.factors = {Operator::epsilon(), o};
        else rel.lhs.factors = {o, Operator::epsilon()};
        rel.rhs.epsilon = true;
        rel.description = (k % 2 ? "eps . " : "") + to_string(o.word) + (k % 2 ? "" : " . eps");
        break;
      }
      case RelationKind::Functoriality: {
        Address a, b;
        do {
          a = g.address(1);
          b = g.address(1);
        } while (!orthogonal(a, b));
        Operator x = op_gen(th, g.letter(a)), y = op_gen(th, g.letter(b));
        rel.lhs.factors = {x, y};
        rel.rhs.factors = {y, x};
        rel.description = to_string(x.word) + " || " + to_string(y.word);
        break;
      }
      case RelationKind::Naturality: {
        Letter outer = g.letter(g.address());
        const Rule* r = th.find_rule(outer.rule);
        Term s = outer.inverse ? r->rhs : r->lhs, t = outer.inverse ? r->lhs : r->rhs;
        auto xs = vars(s);
        std::string x = xs[g.pick(static_cast<int>(xs.size()))];
        Address beta = var_occurrences(s, x).front(), gamma = var_occurrences(t, x).front();
        Address delta = g.address();
        Letter inner = g.letter({});
        Letter in_t = inner, in_s = inner;
        in_t.address = append(append(outer.address, gamma), delta);
        in_s.address = append(append(outer.address, beta), delta);
        rel.lhs.factors = {op_gen(th, outer), op_gen(th, in_t)};
        rel.rhs.factors = {op_gen(th, in_s), op_gen(th, outer)};
        rel.description = to_string(outer) + " over " + x + " with " + to_string(inner);
        break;
      }
      case RelationKind::Coherence: {
        if (th.axioms.empty()) throw StructmonError("theory has no coherence axioms");
        const auto& ax = th.axioms[g.pick(static_cast<int>(th.axioms.size()))];
        Address alpha = g.address();
        auto side = [&](const Reduction& red) {
          std::vector<Operator> fs;
          for (const auto& st : singular_decompose(red))
            fs.push_back(op_gen(th, Letter{st.rule, append(alpha, st.address)}));
          return fs;
        };
        rel.lhs.factors = side(ax.lhs);
        rel.rhs.factors = side(ax.rhs);
        rel.description = ax.label + "@" + to_string(alpha);
        break;
      }
    }
    out.push_back(std::move(rel));
  }
  return out;
}

}  // namespace rw2
