#pragma once

#include <string>
#include <vector>

#include "rw2/rule.hpp"
#include "rw2/theory.hpp"

namespace rw2 {

struct Overlap {
  std::string rule1;
  std::string rule2;
  // Position inside rule1.lhs of the non-variable subterm unified with rule2.lhs.
  Address address;
  Subst unifier;
  bool trivial = false;
  // rule1.lhs (renamed apart) under the unifier.
  Term superposition;
};

std::vector<Overlap> overlaps(const Rule& r1, const Rule& r2, bool include_trivial = false);

struct CriticalSpan {
  std::string id;
  Term source;
  SingularStep left;
  SingularStep right;
};

enum class SpanRules { All, PositiveOnly };

std::vector<CriticalSpan> critical_spans(const Theory2& th, SpanRules which = SpanRules::PositiveOnly);

// Renames variables to a, b, c, ... in first-occurrence order.
Term letter_rename(const Term& t);
std::string span_id(const Term& source, const SingularStep& left, const SingularStep& right);

}  // namespace rw2
