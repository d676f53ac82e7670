#include "rw2/reduction.hpp"

#include <functional>

namespace rw2 {

bool Rule::non_increasing() const {
  for (const auto& x : vars(rhs))
    if (occurrences(lhs, x) == 0) return false;
  return true;
}

bool Rule::linear() const {
  auto l = vars(lhs), r = vars(rhs);
  if (l.size() != r.size()) return false;
  for (const auto& x : l)
    if (occurrences(lhs, x) != 1 || occurrences(rhs, x) != 1) return false;
  return true;
}

bool same_step(const SingularStep& a, const SingularStep& b) {
  return a.rule == b.rule && a.address == b.address && a.source == b.source && a.target == b.target;
}

bool same_path(const std::vector<SingularStep>& a, const std::vector<SingularStep>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_step(a[i], b[i])) return false;
  return true;
}

std::string to_string(const SingularStep& s) { return s.rule + "@" + to_string(s.address); }

std::size_t path_hash(const std::vector<SingularStep>& p) {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (const auto& s : p) {
    h ^= std::hash<std::string>{}(s.rule) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= s.source.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    for (const auto& st : s.address) h = h * 31 + static_cast<std::size_t>(st.index);
    h = h * 131 + s.address.size();
  }
  return h ^ p.size();
}

Reduction Reduction::id(const Term& t) {
  auto n = std::make_shared<RNode>();
  n->kind = Kind::Id;
  n->term = n->source = n->target = t;
  return Reduction(std::move(n));
}

Reduction Reduction::rule(const Rule& r, std::vector<Reduction> args) {
  auto xs = vars(r.lhs);
  if (xs.size() != args.size())
    throw ReductionTypeError("rule " + r.label + " expects " + std::to_string(xs.size()) +
                             " arguments, got " + std::to_string(args.size()));
  Subst s, t;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s.emplace(xs[i], args[i].source());
    t.emplace(xs[i], args[i].target());
  }
  auto n = std::make_shared<RNode>();
  n->kind = Kind::RuleApp;
  n->label = r.label;
  n->lhs = r.lhs;
  n->rhs = r.rhs;
  n->source = rw2::apply(r.lhs, s);
  n->target = rw2::apply(r.rhs, t);
  n->kids = std::move(args);
  n->identity = false;
  return Reduction(std::move(n));
}

Reduction Reduction::structure(const std::string& symbol, std::vector<Reduction> kids) {
  auto n = std::make_shared<RNode>();
  n->kind = Kind::Struct;
  n->label = symbol;
  std::vector<Term> s, t;
  for (const auto& k : kids) {
    s.push_back(k.source());
    t.push_back(k.target());
    n->identity = n->identity && k.is_identity();
  }
  n->source = Term::app(symbol, std::move(s));
  n->target = Term::app(symbol, std::move(t));
  n->kids = std::move(kids);
  return Reduction(std::move(n));
}

Reduction Reduction::seq(const Reduction& a, const Reduction& b) {
  if (!(a.target() == b.source()))
    throw ReductionTypeError("cannot compose: target " + to_string(a.target()) +
                             " differs from source " + to_string(b.source()));
  auto n = std::make_shared<RNode>();
  n->kind = Kind::Seq;
  n->kids = {a, b};
  n->source = a.source();
  n->target = b.target();
  n->identity = a.is_identity() && b.is_identity();
  return Reduction(std::move(n));
}

Reduction Reduction::seq(const std::vector<Reduction>& parts) {
  if (parts.empty()) throw ReductionTypeError("empty composite");
  Reduction r = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) r = seq(r, parts[i]);
  return r;
}

Reduction::Kind Reduction::kind() const { return node_->kind; }
const std::string& Reduction::label() const { return node_->label; }
const std::vector<Reduction>& Reduction::kids() const { return node_->kids; }
const Term& Reduction::source() const { return node_->source; }
const Term& Reduction::target() const { return node_->target; }
const Term& Reduction::term() const { return node_->term; }
const Term& Reduction::rule_lhs() const { return node_->lhs; }
const Term& Reduction::rule_rhs() const { return node_->rhs; }
bool Reduction::is_identity() const { return node_->identity; }

Reduction instantiate(const Reduction& r, const Subst& s) {
  switch (r.kind()) {
    case Reduction::Kind::Id:
      return Reduction::id(rw2::apply(r.term(), s));
    case Reduction::Kind::RuleApp: {
      Rule rr{r.label(), r.rule_lhs(), r.rule_rhs()};
      std::vector<Reduction> args;
      for (const auto& k : r.kids()) args.push_back(instantiate(k, s));
      return Reduction::rule(rr, std::move(args));
    }
    case Reduction::Kind::Struct: {
      std::vector<Reduction> kids;
      for (const auto& k : r.kids()) kids.push_back(instantiate(k, s));
      return Reduction::structure(r.label(), std::move(kids));
    }
    case Reduction::Kind::Seq:
      return Reduction::seq(instantiate(r.kids()[0], s), instantiate(r.kids()[1], s));
  }
  return r;
}

Reduction whisker(const Term& context, const Address& a, const Reduction& r) {
  std::function<Reduction(const Term&, std::size_t)> go = [&](const Term& t, std::size_t k) {
    if (k == a.size()) return r;
    const auto& st = a[k];
    if (t.is_var() || t.name() != st.symbol || static_cast<std::size_t>(st.index) > t.arity())
      throw ReductionTypeError("whisker: invalid address " + to_string(a));
    std::vector<Reduction> kids;
    for (std::size_t i = 0; i < t.arity(); ++i)
      kids.push_back(static_cast<int>(i + 1) == st.index ? go(t.arg(i), k + 1) : Reduction::id(t.arg(i)));
    return Reduction::structure(t.name(), std::move(kids));
  };
  return go(context, 0);
}

}  // namespace rw2
