#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "rw2/rule.hpp"
#include "rw2/term.hpp"

namespace rw2 {

struct ReductionTypeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RNode;

// Proof term built from Identity, Structure, Replacement and Transitivity.
class Reduction {
 public:
  enum class Kind { Id, RuleApp, Struct, Seq };

  Reduction() = default;

  static Reduction id(const Term& t);
  // One argument per lhs variable in first-occurrence order.
  static Reduction rule(const Rule& r, std::vector<Reduction> args);
  static Reduction structure(const std::string& symbol, std::vector<Reduction> kids);
  static Reduction seq(const Reduction& a, const Reduction& b);
  static Reduction seq(const std::vector<Reduction>& parts);

  Kind kind() const;
  // Rule label for RuleApp, symbol for Struct.
  const std::string& label() const;
  const std::vector<Reduction>& kids() const;
  const Term& source() const;
  const Term& target() const;
  const Term& term() const;  // Id only
  const Term& rule_lhs() const;
  const Term& rule_rhs() const;
  // True when the expression contains no rule application.
  bool is_identity() const;

  explicit operator bool() const { return node_ != nullptr; }

 private:
  explicit Reduction(std::shared_ptr<const RNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const RNode> node_;
};

struct RNode {
  Reduction::Kind kind = Reduction::Kind::Id;
  std::string label;
  Term term;
  Term lhs, rhs;
  std::vector<Reduction> kids;
  Term source, target;
  bool identity = true;
};

// Applies a substitution to every term inside the expression.
Reduction instantiate(const Reduction& r, const Subst& s);
// Places r inside `context` at address a (identities elsewhere).
Reduction whisker(const Term& context, const Address& a, const Reduction& r);

}  // namespace rw2
