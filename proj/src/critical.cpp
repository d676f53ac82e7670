#include "rw2/critical.hpp"

#include <cstdio>
#include <set>

namespace rw2 {

std::vector<Overlap> overlaps(const Rule& r1, const Rule& r2, bool include_trivial) {
  std::vector<Overlap> out;
  if (r1.lhs.is_var() || r2.lhs.is_var()) return out;
  auto [l1, l2] = rename_apart(r1.lhs, r2.lhs);
  for (const auto& p : function_positions(l1)) {
    auto sigma = unify(*subterm(l1, p), l2);
    if (!sigma) continue;
    Overlap o;
    o.rule1 = r1.label;
    o.rule2 = r2.label;
    o.address = p;
    o.unifier = *sigma;
    o.trivial = p.empty() && r1.label == r2.label;
    o.superposition = rw2::apply(l1, *sigma);
    if (o.trivial && !include_trivial) continue;
    out.push_back(std::move(o));
  }
  return out;
}

Term letter_rename(const Term& t) {
  Subst s;
  int k = 0;
  for (const auto& x : vars(t)) {
    std::string name = k < 26 ? std::string(1, static_cast<char>('a' + k)) : "v" + std::to_string(k - 25);
    s.emplace(x, Term::var(name));
    ++k;
  }
  return rw2::apply(t, s);
}

std::string span_id(const Term& source, const SingularStep& left, const SingularStep& right) {
  std::string key = to_string(canonical_rename(source)) + "|" + to_string(left) + "|" + to_string(right);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%08llx", static_cast<unsigned long long>(h & 0xffffffffULL));
  return std::string("cs-") + buf;
}

std::vector<CriticalSpan> critical_spans(const Theory2& th, SpanRules which) {
  std::vector<const Rule*> rules;
  for (const auto& r : th.rules)
    if (which == SpanRules::All || r.orientation > 0) rules.push_back(&r);
  std::vector<CriticalSpan> out;
  std::set<std::string> seen;
  for (const Rule* r1 : rules)
    for (const Rule* r2 : rules)
      for (const auto& o : overlaps(*r1, *r2)) {
        Term src = letter_rename(o.superposition);
        auto left = try_step(th, src, r1->label, {});
        auto right = try_step(th, src, r2->label, o.address);
        if (!left || !right) continue;
        if (right->address.empty() && right->rule < left->rule) std::swap(left, right);
        std::string key = variant_key({src}) + "|" + to_string(*left) + "|" + to_string(*right);
        if (!seen.insert(key).second) continue;
        out.push_back({span_id(src, *left, *right), src, *left, *right});
      }
  return out;
}

}  // namespace rw2
