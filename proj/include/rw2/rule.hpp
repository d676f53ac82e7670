#pragma once

#include <string>
#include <vector>

#include "rw2/term.hpp"

namespace rw2 {

struct Rule {
  std::string label;
  Term lhs;
  Term rhs;
  bool invertible = false;
  int orientation = +1;
  // Label of the formal inverse when invertible.
  std::string inverse;
  // Set on the generated formal inverse of a declared rule.
  bool is_formal_inverse = false;

  std::vector<std::string> lhs_vars() const { return vars(lhs); }
  bool non_increasing() const;
  bool linear() const;
};

struct SingularStep {
  std::string rule;
  Address address;
  Subst subst;
  Term source;
  Term target;
};

// Steps are identified by rule, address and endpoints; the substitution is derived data.
bool same_step(const SingularStep& a, const SingularStep& b);
bool same_path(const std::vector<SingularStep>& a, const std::vector<SingularStep>& b);
std::string to_string(const SingularStep& s);
std::size_t path_hash(const std::vector<SingularStep>& p);

}  // namespace rw2
