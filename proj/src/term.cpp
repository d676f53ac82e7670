#include "rw2/term.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace rw2 {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

Term Term::var(std::string name) {
  auto n = std::make_shared<TermNode>();
  n->is_var = true;
  n->name = std::move(name);
  n->hash = mix(0x51ed27, std::hash<std::string>{}(n->name));
  return Term(std::move(n));
}

Term Term::app(std::string symbol, std::vector<Term> args) {
  auto n = std::make_shared<TermNode>();
  n->name = std::move(symbol);
  n->hash = mix(0xa11ce, std::hash<std::string>{}(n->name));
  for (const auto& a : args) {
    if (!a) throw TermError("null argument to " + n->name);
    n->hash = mix(n->hash, a.hash());
    n->size += a.size();
    n->depth = std::max(n->depth, a.depth() + 1);
  }
  n->args = std::move(args);
  return Term(std::move(n));
}

bool Term::is_var() const { return node_->is_var; }
const std::string& Term::name() const { return node_->name; }
const std::vector<Term>& Term::args() const { return node_->args; }
std::size_t Term::hash() const { return node_ ? node_->hash : 0; }
std::size_t Term::size() const { return node_->size; }
int Term::depth() const { return node_->depth; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->hash != b.node_->hash || a.node_->size != b.node_->size) return false;
  if (a.node_->is_var != b.node_->is_var || a.node_->name != b.node_->name) return false;
  return a.node_->args == b.node_->args;
}

bool operator<(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return false;
  if (a.is_var() != b.is_var()) return a.is_var();
  if (a.name() != b.name()) return a.name() < b.name();
  return std::lexicographical_compare(a.args().begin(), a.args().end(), b.args().begin(),
                                      b.args().end());
}

std::string to_string(const Term& t) {
  if (!t) return "<null>";
  if (t.is_var() || t.args().empty()) return t.name();
  std::string s = t.name() + "(";
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) s += ",";
    s += to_string(t.arg(i));
  }
  return s + ")";
}

std::string to_string(const Address& a) {
  if (a.empty()) return "λ";
  std::string s;
  for (const auto& st : a) s += "(" + st.symbol + "," + std::to_string(st.index) + ")";
  return s;
}

std::string to_string(const Subst& s) {
  std::string r = "{";
  bool first = true;
  for (const auto& [k, v] : s) {
    if (!first) r += ", ";
    first = false;
    r += k + "↦" + to_string(v);
  }
  return r + "}";
}

bool is_prefix(const Address& prefix, const Address& a) {
  return prefix.size() <= a.size() && std::equal(prefix.begin(), prefix.end(), a.begin());
}

bool orthogonal(const Address& a, const Address& b) { return !is_prefix(a, b) && !is_prefix(b, a); }

Address concat(const Address& a, const Address& b) {
  Address r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

Address suffix_after(const Address& prefix, const Address& a) {
  return Address(a.begin() + static_cast<long>(prefix.size()), a.end());
}

Address common_prefix(const Address& a, const Address& b) {
  Address r;
  for (std::size_t i = 0; i < a.size() && i < b.size() && a[i] == b[i]; ++i) r.push_back(a[i]);
  return r;
}

bool address_less(const Address& a, const Address& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i].index != b[i].index) return a[i].index < b[i].index;
    if (a[i].symbol != b[i].symbol) return a[i].symbol < b[i].symbol;
  }
  return a.size() < b.size();
}

std::optional<Term> subterm(const Term& t, const Address& a) {
  Term cur = t;
  for (const auto& st : a) {
    if (cur.is_var() || cur.name() != st.symbol) return std::nullopt;
    if (st.index < 1 || static_cast<std::size_t>(st.index) > cur.arity()) return std::nullopt;
    cur = cur.arg(static_cast<std::size_t>(st.index - 1));
  }
  return cur;
}

namespace {

Term replace_at(const Term& t, const Address& a, std::size_t k, const Term& u) {
  if (k == a.size()) return u;
  const auto& st = a[k];
  if (t.is_var() || t.name() != st.symbol || st.index < 1 ||
      static_cast<std::size_t>(st.index) > t.arity())
    throw TermError("invalid address " + to_string(a) + " in " + to_string(t));
  std::vector<Term> args = t.args();
  auto i = static_cast<std::size_t>(st.index - 1);
  args[i] = replace_at(args[i], a, k + 1, u);
  return Term::app(t.name(), std::move(args));
}

void collect_positions(const Term& t, Address& cur, std::vector<Address>& out, bool fun_only) {
  if (!fun_only || !t.is_var()) out.push_back(cur);
  if (t.is_var()) return;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    cur.push_back({t.name(), static_cast<int>(i + 1)});
    collect_positions(t.arg(i), cur, out, fun_only);
    cur.pop_back();
  }
}

void collect_vars(const Term& t, std::vector<std::string>& out, std::set<std::string>& seen) {
  if (t.is_var()) {
    if (seen.insert(t.name()).second) out.push_back(t.name());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out, seen);
}

}  // namespace

Term replace(const Term& t, const Address& a, const Term& u) { return replace_at(t, a, 0, u); }

std::vector<Address> positions(const Term& t) {
  std::vector<Address> out;
  Address cur;
  collect_positions(t, cur, out, false);
  return out;
}

std::vector<Address> function_positions(const Term& t) {
  std::vector<Address> out;
  Address cur;
  collect_positions(t, cur, out, true);
  return out;
}

std::vector<std::string> vars(const Term& t) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  collect_vars(t, out, seen);
  return out;
}

std::vector<Address> var_occurrences(const Term& t, const std::string& x) {
  std::vector<Address> out;
  for (auto& a : positions(t)) {
    auto s = subterm(t, a);
    if (s->is_var() && s->name() == x) out.push_back(a);
  }
  return out;
}

int occurrences(const Term& t, const std::string& x) {
  if (t.is_var()) return t.name() == x ? 1 : 0;
  int n = 0;
  for (const auto& a : t.args()) n += occurrences(a, x);
  return n;
}

bool is_ground(const Term& t) {
  if (t.is_var()) return false;
  return std::all_of(t.args().begin(), t.args().end(), is_ground);
}

bool is_linear(const Term& t) {
  for (const auto& x : vars(t))
    if (occurrences(t, x) != 1) return false;
  return true;
}

Term apply(const Term& t, const Subst& s) {
  if (s.empty()) return t;
  if (t.is_var()) {
    auto it = s.find(t.name());
    return it == s.end() ? t : it->second;
  }
  if (t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(rw2::apply(a, s));
    changed = changed || !(args.back() == a);
  }
  return changed ? Term::app(t.name(), std::move(args)) : t;
}

Subst compose(const Subst& s1, const Subst& s2) {
  Subst r;
  for (const auto& [k, v] : s1) r[k] = rw2::apply(v, s2);
  for (const auto& [k, v] : s2)
    if (!r.count(k)) r[k] = v;
  for (auto it = r.begin(); it != r.end();) {
    if (it->second.is_var() && it->second.name() == it->first)
      it = r.erase(it);
    else
      ++it;
  }
  return r;
}

std::optional<Subst> match_into(const Term& pattern, const Term& subject, Subst s) {
  std::vector<std::pair<Term, Term>> work{{pattern, subject}};
  while (!work.empty()) {
    auto [p, u] = work.back();
    work.pop_back();
    if (p.is_var()) {
      auto it = s.find(p.name());
      if (it == s.end())
        s.emplace(p.name(), u);
      else if (!(it->second == u))
        return std::nullopt;
      continue;
    }
    if (u.is_var() || p.name() != u.name() || p.arity() != u.arity()) return std::nullopt;
    for (std::size_t i = 0; i < p.arity(); ++i) work.emplace_back(p.arg(i), u.arg(i));
  }
  return s;
}

std::optional<Subst> match(const Term& pattern, const Term& subject) {
  return match_into(pattern, subject, {});
}

namespace {

bool occurs(const std::string& x, const Term& t) {
  if (t.is_var()) return t.name() == x;
  return std::any_of(t.args().begin(), t.args().end(), [&](const Term& a) { return occurs(x, a); });
}

}  // namespace

std::optional<Subst> unify_all(const std::vector<std::pair<Term, Term>>& eqs) {
  Subst theta;
  std::vector<std::pair<Term, Term>> work(eqs.rbegin(), eqs.rend());
  while (!work.empty()) {
    auto [a, b] = work.back();
    work.pop_back();
    a = rw2::apply(a, theta);
    b = rw2::apply(b, theta);
    if (a == b) continue;
    if (!a.is_var() && b.is_var()) std::swap(a, b);
    if (a.is_var()) {
      if (occurs(a.name(), b)) return std::nullopt;
      Subst bind{{a.name(), b}};
      for (auto& [k, v] : theta) v = rw2::apply(v, bind);
      theta.emplace(a.name(), b);
      continue;
    }
    if (a.name() != b.name() || a.arity() != b.arity()) return std::nullopt;
    for (std::size_t i = a.arity(); i-- > 0;) work.emplace_back(a.arg(i), b.arg(i));
  }
  return theta;
}

std::optional<Subst> unify(const Term& t, const Term& u) { return unify_all({{t, u}}); }

Term tag_vars(const Term& t, int k) {
  Subst s = tag_subst(vars(t), k);
  return rw2::apply(t, s);
}

Subst tag_subst(const std::vector<std::string>& names, int k) {
  Subst s;
  for (const auto& x : names) s.emplace(x, Term::var(x + "#" + std::to_string(k)));
  return s;
}

std::pair<Term, Term> rename_apart(const Term& t, const Term& u) {
  return {tag_vars(t, 0), tag_vars(u, 1)};
}

std::optional<Term> mgci(const Term& t, const Term& u) {
  auto [a, b] = rename_apart(t, u);
  auto s = unify(a, b);
  if (!s) return std::nullopt;
  return tidy_vars({rw2::apply(a, *s)})[0];
}

std::vector<Term> canonical_rename(const std::vector<Term>& ts, const std::string& stem) {
  Subst s;
  int next = 1;
  for (const auto& t : ts)
    for (const auto& x : vars(t))
      if (!s.count(x)) s.emplace(x, Term::var(stem + std::to_string(next++)));
  std::vector<Term> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(rw2::apply(t, s));
  return out;
}

Term canonical_rename(const Term& t, const std::string& stem) {
  return canonical_rename(std::vector<Term>{t}, stem)[0];
}

bool alpha_equiv(const std::vector<Term>& ts, const std::vector<Term>& us) {
  return ts.size() == us.size() && canonical_rename(ts) == canonical_rename(us);
}

bool alpha_equiv(const Term& t, const Term& u) { return alpha_equiv(std::vector{t}, std::vector{u}); }

std::string variant_key(const std::vector<Term>& ts) {
  std::string k;
  for (const auto& t : canonical_rename(ts)) k += to_string(t) + "|";
  return k;
}

std::vector<Term> tidy_vars(const std::vector<Term>& ts) {
  std::set<std::string> used;
  Subst s;
  for (const auto& t : ts)
    for (const auto& x : vars(t)) {
      if (s.count(x)) continue;
      std::string base = x.substr(0, x.find('#'));
      std::string name = base;
      for (int k = 1; used.count(name); ++k) name = base + std::to_string(k);
      used.insert(name);
      s.emplace(x, Term::var(name));
    }
  std::vector<Term> out;
  for (const auto& t : ts) out.push_back(rw2::apply(t, s));
  return out;
}

bool is_instance(const Term& u, const Term& t) {
  auto [a, b] = rename_apart(t, u);
  return match(a, b).has_value();
}

bool is_proper_instance(const Term& u, const Term& t) {
  return is_instance(u, t) && !alpha_equiv(u, t);
}

}  // namespace rw2
