#include <doctest.h>

#include <functional>

#include "rw2/coherence.hpp"
#include "rw2/critical.hpp"
#include "rw2/presets.hpp"

using namespace rw2;

namespace {

// All terms over the signature with at most `size` nodes, leaves from `xs` and constants.
std::vector<Term> small_terms(const Signature& sig, const std::vector<std::string>& xs, int size) {
  std::vector<std::vector<Term>> by_size(size + 1);
  for (const auto& x : xs) by_size[1].push_back(Term::var(x));
  for (const auto& s : sig.symbols)
    if (s.arity == 0) by_size[1].push_back(Term::app(s.name));
  for (int k = 2; k <= size; ++k)
    for (const auto& s : sig.symbols) {
      if (s.arity == 0) continue;
      std::vector<Term> args;
      std::function<void(int, int)> fill = [&](int i, int left) {
        if (i == s.arity) {
          if (left == 0) by_size[k].push_back(Term::app(s.name, args));
          return;
        }
        for (int m = 1; m <= left - (s.arity - i - 1); ++m)
          for (const auto& t : by_size[m]) {
            args.push_back(t);
            fill(i + 1, left - m);
            args.pop_back();
          }
      };
      fill(0, k - 1);
    }
  std::vector<Term> out;
  for (const auto& v : by_size) out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace

TEST_CASE("monoidal positive rules have five critical spans") {
  Theory2 m = gen({"monoidal"});
  auto spans = critical_spans(positive_subtheory(m, standard_orientation(m)));
  CHECK(spans.size() == 5);
  for (const auto& s : spans) {
    CHECK(valid_step(m, s.left));
    CHECK(valid_step(m, s.right));
    CHECK(s.left.source == s.source);
    CHECK(s.right.source == s.source);
    CHECK((is_prefix(s.left.address, s.right.address) || is_prefix(s.right.address, s.left.address)));
  }
}

TEST_CASE("critical spans are complete on small terms") {
  for (const char* which : {"monoidal", "catalan"}) {
    CAPTURE(which);
    Theory2 th = gen({which, 2});
    Theory2 pos = positive_subtheory(th, standard_orientation(th));
    auto spans = critical_spans(pos);
    int overlaps_seen = 0;
    for (const auto& t : small_terms(pos.sig, {"x", "y"}, 9)) {
      auto rs = find_redexes(pos, t);
      for (const auto& a : rs)
        for (const auto& b : rs) {
          if (!is_prefix(a.address, b.address) || &a == &b) continue;
          const Rule& ra = pos.rules[a.rule_index];
          Address w = suffix_after(a.address, b.address);
          auto sub = subterm(ra.lhs, w);
          if (!sub || sub->is_var()) continue;
          if (w.empty() && a.rule_index == b.rule_index) continue;
          ++overlaps_seen;
          Term local = *subterm(t, a.address);
          bool covered = false;
          for (const auto& s : spans) {
            bool labels = (s.left.rule == ra.label && s.right.rule == pos.rules[b.rule_index].label &&
                           s.right.address == w && s.left.address.empty()) ||
                          (s.right.rule == ra.label && s.left.rule == pos.rules[b.rule_index].label &&
                           s.left.address == w && s.right.address.empty());
            if (labels && is_instance(local, s.source)) covered = true;
          }
          CHECK(covered);
        }
    }
    CHECK(overlaps_seen > 0);
  }
}

TEST_CASE("catalan 2 has one span and C3 has five") {
  CHECK(critical_spans(gen({"catalan", 2})).size() == 1);
  CHECK(critical_spans(gen({"catalan", 3})).size() == 5);
  // Formal inverses add spans when requested.
  CHECK(critical_spans(gen({"catalan", 2}), SpanRules::All).size() > 1);
}

TEST_CASE("span ids are stable under renaming") {
  Theory2 c = gen({"catalan", 2});
  auto a = critical_spans(c);
  auto b = critical_spans(c);
  REQUIRE(a.size() == 1);
  CHECK(a[0].id == b[0].id);
  CHECK(a[0].id.rfind("cs-", 0) == 0);
}

TEST_CASE("overlaps of a rule with itself") {
  Theory2 c = gen({"catalan", 2});
  const Rule& r = c.rules.front();
  auto ov = overlaps(r, r);
  CHECK(ov.size() == 1);
  CHECK_FALSE(overlaps(r, r, true).empty());
}
