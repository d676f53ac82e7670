#include "rw2/prooft.hpp"

#include <algorithm>
#include <functional>

namespace rw2 {

InferError::InferError(const std::string& msg, std::string sub, int l, int c)
    : std::runtime_error(msg), subexpr(std::move(sub)), line(l), col(c) {}

namespace {

[[noreturn]] void infer_fail(const WordExpr& e, const std::string& msg) {
  throw InferError(msg + " in '" + to_string(e) + "'", to_string(e), e.line, e.col);
}

Term word_to_term(const Theory2& th, const WordExpr& e, bool implicit) {
  switch (e.kind) {
    case WordExpr::Kind::Name: {
      int ar = th.sig.arity(e.name);
      if (ar == 0) return Term::app(e.name);
      if (ar > 0) infer_fail(e, "symbol '" + e.name + "' expects " + std::to_string(ar) + " arguments");
      if (!implicit && !th.sig.declared_vars.count(e.name))
        infer_fail(e, "undeclared identifier '" + e.name + "'");
      return Term::var(e.name);
    }
    case WordExpr::Kind::Call: {
      int ar = th.sig.arity(e.name);
      if (ar < 0) infer_fail(e, "'" + e.name + "' is not a function symbol");
      if (static_cast<int>(e.kids.size()) != ar)
        infer_fail(e, "symbol '" + e.name + "' has arity " + std::to_string(ar));
      std::vector<Term> args;
      for (const auto& k : e.kids) args.push_back(word_to_term(th, k, implicit));
      return Term::app(e.name, std::move(args));
    }
    case WordExpr::Kind::Seq:
      infer_fail(e, "expected a term");
  }
  infer_fail(e, "expected a term");
}

}  // namespace

Reduction infer(const Theory2& th, const WordExpr& e, bool implicit_vars) {
  switch (e.kind) {
    case WordExpr::Kind::Name: {
      if (const Rule* r = th.find_rule(e.name)) {
        if (!r->lhs_vars().empty())
          infer_fail(e, "rule '" + e.name + "' expects " + std::to_string(r->lhs_vars().size()) +
                            " arguments");
        return Reduction::rule(*r, {});
      }
      return Reduction::id(word_to_term(th, e, implicit_vars));
    }
    case WordExpr::Kind::Call: {
      if (e.name == "id") {
        if (e.kids.size() != 1) infer_fail(e, "id takes exactly one term");
        return Reduction::id(word_to_term(th, e.kids[0], implicit_vars));
      }
      std::vector<Reduction> kids;
      for (const auto& k : e.kids) kids.push_back(infer(th, k, implicit_vars));
      if (const Rule* r = th.find_rule(e.name)) {
        std::size_t need = r->lhs_vars().size();
        if (kids.size() != need)
          infer_fail(e, "rule '" + e.name + "' expects " + std::to_string(need) + " arguments, got " +
                            std::to_string(kids.size()));
        return Reduction::rule(*r, std::move(kids));
      }
      int ar = th.sig.arity(e.name);
      if (ar < 0) infer_fail(e, "unknown rule or symbol '" + e.name + "'");
      if (static_cast<int>(kids.size()) != ar)
        infer_fail(e, "symbol '" + e.name + "' has arity " + std::to_string(ar) + ", got " +
                          std::to_string(kids.size()) + " arguments");
      return Reduction::structure(e.name, std::move(kids));
    }
    case WordExpr::Kind::Seq: {
      Reduction acc = infer(th, e.kids[0], implicit_vars);
      for (std::size_t i = 1; i < e.kids.size(); ++i) {
        Reduction next = infer(th, e.kids[i], implicit_vars);
        if (!(acc.target() == next.source()))
          infer_fail(e.kids[i], "ill-typed composition: target " + th.sig.show(acc.target()) +
                                    " does not match source " + th.sig.show(next.source()));
        acc = Reduction::seq(acc, next);
      }
      return acc;
    }
  }
  infer_fail(e, "malformed word");
}

Reduction parse_reduction(const Theory2& th, const std::string& text, const ParseContext& ctx) {
  return infer(th, parse_word(th.sig, text, ctx), ctx.implicit_vars);
}

namespace {

struct AStep {
  std::string label;
  Term lhs, rhs;
  Address address;
};

void decompose_into(const Reduction& r, const Address& at, std::vector<AStep>& out) {
  switch (r.kind()) {
    case Reduction::Kind::Id:
      return;
    case Reduction::Kind::Struct:
      for (std::size_t i = 0; i < r.kids().size(); ++i) {
        Address a = at;
        a.push_back({r.label(), static_cast<int>(i + 1)});
        decompose_into(r.kids()[i], a, out);
      }
      return;
    case Reduction::Kind::Seq:
      decompose_into(r.kids()[0], at, out);
      decompose_into(r.kids()[1], at, out);
      return;
    case Reduction::Kind::RuleApp: {
      auto xs = vars(r.rule_lhs());
      for (std::size_t i = 0; i < xs.size(); ++i)
        for (const auto& occ : var_occurrences(r.rule_lhs(), xs[i]))
          decompose_into(r.kids()[i], concat(at, occ), out);
      out.push_back({r.label(), r.rule_lhs(), r.rule_rhs(), at});
      return;
    }
  }
}

SingularStep step_with(const Term& t, const std::string& label, const Term& lhs, const Term& rhs,
                       const Address& a) {
  auto u = subterm(t, a);
  if (!u) throw TermError("invalid address " + to_string(a) + " in " + to_string(t));
  auto s = match(lhs, *u);
  if (!s) throw TermError("not a redex: " + label + " at " + to_string(a) + " in " + to_string(t));
  Term tgt = replace(t, a, rw2::apply(rhs, *s));
  return SingularStep{label, a, *s, t, tgt};
}

std::optional<SingularStep> step_at(const Theory2& th, const Term& t, const std::string& rule,
                                    const Address& a) {
  return try_step(th, t, rule, a);
}

}  // namespace

Path singular_decompose(const Reduction& r) {
  std::vector<AStep> abs;
  decompose_into(r, {}, abs);
  Path p;
  Term cur = r.source();
  for (const auto& s : abs) {
    p.push_back(step_with(cur, s.label, s.lhs, s.rhs, s.address));
    cur = p.back().target;
  }
  return p;
}

Term path_target(const Term& source, const Path& p) { return p.empty() ? source : p.back().target; }

Reduction path_to_reduction(const Theory2& th, const Term& source, const Path& p) {
  if (p.empty()) return Reduction::id(source);
  std::vector<Reduction> parts;
  for (const auto& s : p) {
    const Rule* r = th.find_rule(s.rule);
    if (!r) throw TermError("unknown rule " + s.rule);
    std::vector<Reduction> args;
    for (const auto& x : r->lhs_vars()) args.push_back(Reduction::id(s.subst.at(x)));
    parts.push_back(whisker(s.source, s.address, Reduction::rule(*r, std::move(args))));
  }
  return Reduction::seq(parts);
}

std::optional<Path> funct_swap(const Theory2& th, const SingularStep& a, const SingularStep& b) {
  if (!orthogonal(a.address, b.address)) return std::nullopt;
  auto b2 = step_at(th, a.source, b.rule, b.address);
  if (!b2) return std::nullopt;
  auto a2 = step_at(th, b2->target, a.rule, a.address);
  if (!a2 || !(a2->target == b.target)) return std::nullopt;
  return Path{*b2, *a2};
}

namespace {

// A step relative to an occurrence: rule, address below the occurrence, substitution.
struct RelStep {
  std::string rule;
  Address rel;
  Subst subst;
  bool operator==(const RelStep& o) const { return rule == o.rule && rel == o.rel && subst == o.subst; }
};

// Splits `steps` into `k` equal runs, each the same relative sequence placed under a distinct
// address from `bases`. Returns the shared sequence.
std::optional<std::vector<RelStep>> split_runs(const Path& steps, std::size_t from, std::size_t to,
                                               const std::vector<Address>& bases) {
  std::size_t n = to - from;
  std::size_t k = bases.size();
  if (k == 0 || n % k != 0 || n == 0) return std::nullopt;
  std::size_t len = n / k;
  std::vector<bool> used(k, false);
  std::optional<std::vector<RelStep>> delta;
  for (std::size_t run = 0; run < k; ++run) {
    std::size_t s0 = from + run * len;
    std::optional<std::size_t> which;
    for (std::size_t b = 0; b < k && !which; ++b)
      if (!used[b] && is_prefix(bases[b], steps[s0].address) && steps[s0].address != bases[b]) which = b;
    if (!which) {
      for (std::size_t b = 0; b < k && !which; ++b)
        if (!used[b] && is_prefix(bases[b], steps[s0].address)) which = b;
    }
    if (!which) return std::nullopt;
    used[*which] = true;
    std::vector<RelStep> seq;
    for (std::size_t j = s0; j < s0 + len; ++j) {
      if (!is_prefix(bases[*which], steps[j].address)) return std::nullopt;
      seq.push_back({steps[j].rule, suffix_after(bases[*which], steps[j].address), steps[j].subst});
    }
    if (!delta) delta = seq;
    else if (!(*delta == seq)) return std::nullopt;
  }
  return delta;
}

std::vector<Address> occurrence_bases(const Term& pattern, const std::string& x, const Address& at) {
  std::vector<Address> out;
  for (const auto& o : var_occurrences(pattern, x)) out.push_back(concat(at, o));
  return out;
}

// Variable of `pattern` whose occurrence lies above the relative address, if any.
std::optional<std::string> var_above(const Term& pattern, const Address& rel) {
  Term cur = pattern;
  for (const auto& st : rel) {
    if (cur.is_var()) return cur.name();
    if (cur.name() != st.symbol || st.index < 1 || static_cast<std::size_t>(st.index) > cur.arity())
      return std::nullopt;
    cur = cur.arg(st.index - 1);
  }
  if (cur.is_var()) return cur.name();
  return std::nullopt;
}

// Replays a relative sequence at each base, starting from t.
std::optional<Path> place_runs(const Theory2& th, Term t, const std::vector<RelStep>& delta,
                               const std::vector<Address>& bases) {
  Path out;
  for (const auto& b : bases)
    for (const auto& d : delta) {
      auto s = step_at(th, t, d.rule, concat(b, d.rel));
      if (!s) return std::nullopt;
      out.push_back(*s);
      t = s->target;
    }
  return out;
}

}  // namespace

std::optional<NatMove> nat_inward(const Theory2& th, const Path& p, std::size_t i) {
  if (i + 1 >= p.size()) return std::nullopt;
  const SingularStep& r = p[i];
  const Rule* rule = th.find_rule(r.rule);
  if (!rule) return std::nullopt;
  const Address& a = r.address;
  if (!is_prefix(a, p[i + 1].address)) return std::nullopt;
  auto x = var_above(rule->rhs, suffix_after(a, p[i + 1].address));
  if (!x) return std::nullopt;
  auto rhs_bases = occurrence_bases(rule->rhs, *x, a);
  auto lhs_bases = occurrence_bases(rule->lhs, *x, a);
  std::size_t k = rhs_bases.size();
  // Longest run of steps strictly below the rhs occurrences.
  std::size_t end = i + 1;
  while (end < p.size()) {
    bool below = false;
    for (const auto& b : rhs_bases) below = below || is_prefix(b, p[end].address);
    if (!below) break;
    ++end;
  }
  for (std::size_t len = 1; i + 1 + len * k <= end; ++len) {
    auto delta = split_runs(p, i + 1, i + 1 + len * k, rhs_bases);
    if (!delta) continue;
    auto copies = place_runs(th, r.source, *delta, lhs_bases);
    if (!copies) continue;
    Term mid = path_target(r.source, *copies);
    auto r2 = step_at(th, mid, r.rule, a);
    if (!r2) continue;
    if (!(r2->target == p[i + len * k].target)) continue;
    NatMove m;
    m.position = i;
    m.length = 1 + len * k;
    m.replacement = std::move(*copies);
    m.replacement.push_back(*r2);
    return m;
  }
  return std::nullopt;
}

std::optional<NatMove> nat_outward(const Theory2& th, const Path& p, std::size_t i) {
  for (std::size_t k = i + 1; k < p.size(); ++k) {
    const SingularStep& r = p[k];
    if (!is_prefix(r.address, p[i].address)) continue;
    const Rule* rule = th.find_rule(r.rule);
    if (!rule) continue;
    auto x = var_above(rule->lhs, suffix_after(r.address, p[i].address));
    if (!x) continue;
    auto lhs_bases = occurrence_bases(rule->lhs, *x, r.address);
    auto rhs_bases = occurrence_bases(rule->rhs, *x, r.address);
    auto delta = split_runs(p, i, k, lhs_bases);
    if (!delta) continue;
    Term s0 = p[i].source;
    auto rr = step_at(th, s0, r.rule, r.address);
    if (!rr) continue;
    auto copies = place_runs(th, rr->target, *delta, rhs_bases);
    if (!copies) continue;
    if (!(path_target(rr->target, *copies) == r.target)) continue;
    NatMove m;
    m.position = i;
    m.length = k - i + 1;
    m.replacement.push_back(*rr);
    for (auto& c : *copies) m.replacement.push_back(c);
    return m;
  }
  return std::nullopt;
}

Path canonical_trace(const Theory2& th, const Path& input) {
  Path p = input;
  for (int guard = 0; guard < 100000; ++guard) {
    bool changed = false;
    for (std::size_t i = 0; i + 1 < p.size() && !changed; ++i) {
      if (orthogonal(p[i].address, p[i + 1].address) && address_less(p[i + 1].address, p[i].address)) {
        if (auto sw = funct_swap(th, p[i], p[i + 1])) {
          p[i] = (*sw)[0];
          p[i + 1] = (*sw)[1];
          changed = true;
        }
      }
    }
    for (std::size_t i = 0; i + 1 < p.size() && !changed; ++i) {
      if (auto m = nat_inward(th, p, i)) {
        Path q(p.begin(), p.begin() + static_cast<long>(m->position));
        q.insert(q.end(), m->replacement.begin(), m->replacement.end());
        q.insert(q.end(), p.begin() + static_cast<long>(m->position + m->length), p.end());
        p = std::move(q);
        changed = true;
      }
    }
    if (!changed) break;
  }
  return p;
}

Path canonical_trace(const Theory2& th, const Reduction& r) {
  return canonical_trace(th, singular_decompose(r));
}

namespace {

void shape_into(const Reduction& r, std::string& out) {
  std::function<void(const Term&)> term = [&](const Term& t) {
    if (t.is_var()) {
      out += "∘";
      return;
    }
    out += t.name();
    if (t.arity() == 0) return;
    out += "(";
    for (std::size_t i = 0; i < t.arity(); ++i) {
      if (i) out += ",";
      term(t.arg(i));
    }
    out += ")";
  };
  switch (r.kind()) {
    case Reduction::Kind::Id:
      term(r.term());
      return;
    case Reduction::Kind::RuleApp:
    case Reduction::Kind::Struct:
      out += r.label() + "(";
      for (std::size_t i = 0; i < r.kids().size(); ++i) {
        if (i) out += ",";
        shape_into(r.kids()[i], out);
      }
      out += ")";
      return;
    case Reduction::Kind::Seq:
      shape_into(r.kids()[0], out);
      out += " ; ";
      shape_into(r.kids()[1], out);
      return;
  }
}

}  // namespace

std::string shape(const Reduction& r) {
  std::string s;
  shape_into(r, s);
  return s;
}

std::set<std::string> shape_vars(const Reduction& r) {
  auto v = vars(r.source());
  return {v.begin(), v.end()};
}

int shape_slots(const Reduction& r) {
  int n = 0;
  for (const auto& x : vars(r.source())) n += occurrences(r.source(), x);
  return n;
}

bool in_general_position(const Reduction& r) {
  return static_cast<int>(shape_vars(r).size()) == shape_slots(r);
}

std::string to_string(FaceKind k) {
  switch (k) {
    case FaceKind::Funct:
      return "funct";
    case FaceKind::Nat:
      return "nat";
    case FaceKind::Axiom:
      return "axiom";
    case FaceKind::Inverse:
      return "inverse";
    case FaceKind::Composite:
      return "composite";
  }
  return "?";
}

namespace {

bool connected(const Path& p, std::string* why) {
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    if (!(p[i].target == p[i + 1].source)) {
      if (why) *why = "steps do not compose at " + to_string(p[i + 1]);
      return false;
    }
  return true;
}

bool all_valid(const Theory2& th, const Path& p, std::string* why) {
  for (const auto& s : p)
    if (!valid_step(th, s)) {
      if (why) *why = "invalid step " + to_string(s);
      return false;
    }
  return connected(p, why);
}

bool check_funct(const Theory2& th, const Face& f, std::string* why) {
  const Path &l = f.lhs, &r = f.rhs;
  if (l.size() != 2 || r.size() != 2) {
    if (why) *why = "interchange faces have two steps per side";
    return false;
  }
  if (!orthogonal(l[0].address, l[1].address)) {
    if (why) *why = "interchange requires orthogonal addresses";
    return false;
  }
  auto sw = funct_swap(th, l[0], l[1]);
  if (!sw || !same_path(*sw, r)) {
    if (why) *why = "sides are not an interchange of each other";
    return false;
  }
  return true;
}

// `a` = [rule ; copies at rhs occurrences], `b` = [copies at lhs occurrences ; rule].
bool nat_oriented(const Theory2& th, const Path& a, const Path& b) {
  if (a.empty() || b.empty()) return false;
  const SingularStep& ra = a.front();
  const SingularStep& rb = b.back();
  if (ra.rule != rb.rule || ra.address != rb.address) return false;
  const Rule* rule = th.find_rule(ra.rule);
  if (!rule) return false;
  std::set<std::string> xs;
  for (const auto& x : vars(rule->lhs)) xs.insert(x);
  for (const auto& x : vars(rule->rhs)) xs.insert(x);
  for (const auto& x : xs) {
    auto lb = occurrence_bases(rule->lhs, x, ra.address);
    auto rbs = occurrence_bases(rule->rhs, x, ra.address);
    std::size_t na = a.size() - 1, nb = b.size() - 1;
    if (lb.empty() && rbs.empty()) continue;
    std::optional<std::vector<RelStep>> da, db;
    if (!rbs.empty()) {
      da = split_runs(a, 1, a.size(), rbs);
      if (!da) continue;
    } else if (na != 0) {
      continue;
    }
    if (!lb.empty()) {
      db = split_runs(b, 0, b.size() - 1, lb);
      if (!db) continue;
    } else if (nb != 0) {
      continue;
    }
    if (da && db && !(*da == *db)) continue;
    if (!da && !db) continue;
    return true;
  }
  return false;
}

bool check_nat(const Theory2& th, const Face& f, std::string* why) {
  if (nat_oriented(th, f.lhs, f.rhs) || nat_oriented(th, f.rhs, f.lhs)) return true;
  if (why) *why = "sides do not form a naturality square";
  return false;
}

bool check_axiom(const Theory2& th, const Face& f, std::string* why) {
  const CoherenceAxiom* ax = th.find_axiom(f.label);
  if (!ax) {
    if (why) *why = "unknown axiom " + f.label;
    return false;
  }
  const Path& l = f.lhs;
  const Path& r = f.rhs;
  const Term& s = !l.empty() ? l.front().source : r.front().source;
  Address common;
  bool first = true;
  for (const Path* side : {&l, &r})
    for (const auto& st : *side) {
      common = first ? st.address : common_prefix(common, st.address);
      first = false;
    }
  for (int swap = 0; swap < 2; ++swap) {
    const Reduction& wl = swap ? ax->rhs : ax->lhs;
    const Reduction& wr = swap ? ax->lhs : ax->rhs;
    for (std::size_t k = 0; k <= common.size(); ++k) {
      Address c(common.begin(), common.begin() + static_cast<long>(k));
      auto sub = subterm(s, c);
      if (!sub) continue;
      auto sigma = match(wl.source(), *sub);
      if (!sigma) continue;
      try {
        Path pl = singular_decompose(whisker(s, c, instantiate(wl, *sigma)));
        if (!same_path(pl, l)) continue;
        Path pr = singular_decompose(whisker(s, c, instantiate(wr, *sigma)));
        if (same_path(pr, r)) return true;
      } catch (const std::exception&) {
        continue;
      }
    }
  }
  if (why) *why = "sides are not an instance of axiom " + f.label;
  return false;
}

bool check_inverse(const Theory2& th, const Face& f, std::string* why) {
  const Path& loop = f.lhs.empty() ? f.rhs : f.lhs;
  if (!(f.lhs.empty() || f.rhs.empty()) || loop.size() != 2) {
    if (why) *why = "inverse faces relate an empty path to a two-step loop";
    return false;
  }
  const Rule* r = th.find_rule(loop[0].rule);
  if (!r || r->inverse.empty() || loop[1].rule != r->inverse || loop[0].address != loop[1].address ||
      !(loop[1].target == loop[0].source)) {
    if (why) *why = "loop is not a step followed by its inverse";
    return false;
  }
  return true;
}

}  // namespace

bool check_face(const Theory2& th, const Face& f, std::string* why) {
  if (!all_valid(th, f.lhs, why) || !all_valid(th, f.rhs, why)) return false;
  if (!f.lhs.empty() && !f.rhs.empty()) {
    if (!(f.lhs.front().source == f.rhs.front().source) || !(f.lhs.back().target == f.rhs.back().target)) {
      if (why) *why = "sides have different endpoints";
      return false;
    }
  }
  switch (f.kind) {
    case FaceKind::Funct:
      return check_funct(th, f, why);
    case FaceKind::Nat:
      return check_nat(th, f, why);
    case FaceKind::Axiom:
      return check_axiom(th, f, why);
    case FaceKind::Inverse:
      return check_inverse(th, f, why);
    case FaceKind::Composite: {
      if (f.lhs.empty() && f.rhs.empty()) return true;
      const Term& s = !f.lhs.empty() ? f.lhs.front().source : f.rhs.front().source;
      auto res = check_tiling_paths(th, s, f.lhs, f.rhs, Tiling{f.inner});
      if (!res.ok && why) *why = "lemma " + f.label + ": " + res.reason;
      return res.ok;
    }
  }
  return false;
}

Path apply_faces(const Path& start, const std::vector<Face>& faces) {
  Path cur = start;
  for (const auto& f : faces) {
    Path q(cur.begin(), cur.begin() + static_cast<long>(std::min(f.position, cur.size())));
    q.insert(q.end(), f.rhs.begin(), f.rhs.end());
    std::size_t tail = std::min(cur.size(), f.position + f.lhs.size());
    q.insert(q.end(), cur.begin() + static_cast<long>(tail), cur.end());
    cur = std::move(q);
  }
  return cur;
}

TilingCheck check_tiling_paths(const Theory2& th, const Term& source, const Path& from, const Path& to,
                               const Tiling& proof) {
  TilingCheck res;
  std::string why;
  if (!all_valid(th, from, &why) || !all_valid(th, to, &why)) {
    res.ok = false;
    res.bad_face = 0;
    res.reason = "claim: " + why;
    return res;
  }
  Path cur = from;
  for (std::size_t k = 0; k < proof.faces.size(); ++k) {
    const Face& f = proof.faces[k];
    auto bad = [&](const std::string& msg) {
      res.ok = false;
      res.bad_face = k;
      res.reason = msg;
      return res;
    };
    if (f.position > cur.size()) return bad("face position out of range");
    if (f.position + f.lhs.size() > cur.size()) return bad("face extends past the end of the path");
    Path seg(cur.begin() + static_cast<long>(f.position),
             cur.begin() + static_cast<long>(f.position + f.lhs.size()));
    if (!same_path(seg, f.lhs)) return bad("face does not match the current path");
    Term here = f.position == 0 ? source : cur[f.position - 1].target;
    if (f.lhs.empty() && f.rhs.empty()) continue;
    const Term& fs = !f.lhs.empty() ? f.lhs.front().source : f.rhs.front().source;
    if (!(fs == here)) return bad("face is attached at the wrong term");
    if (!check_face(th, f, &why)) return bad(why);
    Path q(cur.begin(), cur.begin() + static_cast<long>(f.position));
    q.insert(q.end(), f.rhs.begin(), f.rhs.end());
    q.insert(q.end(), cur.begin() + static_cast<long>(f.position + f.lhs.size()), cur.end());
    cur = std::move(q);
  }
  if (!same_path(cur, to)) {
    res.ok = false;
    res.bad_face = proof.faces.size();
    res.reason = "faces do not reach the claimed right-hand side";
  }
  return res;
}

TilingCheck check_tiling(const Theory2& th, const std::pair<Reduction, Reduction>& claim,
                         const Tiling& proof) {
  const auto& [a, b] = claim;
  if (!(a.source() == b.source()) || !(a.target() == b.target())) {
    TilingCheck r;
    r.ok = false;
    r.reason = "claim sides are not parallel";
    return r;
  }
  return check_tiling_paths(th, a.source(), singular_decompose(a), singular_decompose(b), proof);
}

std::size_t face_count(const Tiling& t) {
  std::size_t n = 0;
  for (const auto& f : t.faces) n += 1 + face_count(Tiling{f.inner});
  return n;
}

}  // namespace rw2
