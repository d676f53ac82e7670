#pragma once

#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rw2/theory.hpp"

namespace rw2 {

struct StructmonError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One generator: a rule (or its inverse) translated to an address. An idempotent letter is
// the identity operator on the domain of that translated rule.
struct Letter {
  std::string rule;
  Address address;
  bool inverse = false;
  bool idempotent = false;
  bool operator==(const Letter&) const = default;
};

using OperatorWord = std::vector<Letter>;
std::string to_string(const Letter& l);
std::string to_string(const OperatorWord& w);

// Partial endomorphism with graph {(s^phi, t^phi)}, or the empty operator.
struct Operator {
  bool empty = false;
  Term s;
  Term t;
  OperatorWord word;

  static Operator epsilon();
  static Operator from_seed(const Term& s, const Term& t, OperatorWord word = {});
};

// Throws StructmonError unless the theory has one function symbol and linear rules.
void require_seed_scope(const Theory2& th);

Operator op_gen(const Theory2& th, const Letter& l);
Operator op_gen(const Theory2& th, const std::string& rule, const Address& a);
std::optional<Term> op_apply(const Operator& o, const Term& u);
Operator op_compose(const Operator& a, const Operator& b);
Operator op_inverse(const Operator& o);
// Left-to-right composite of the letters; the identity letter list gives no operator.
Operator op_word(const Theory2& th, const OperatorWord& w);
// Acts as the identity on its domain.
bool is_idempotent(const Operator& o);
// Equal seeds up to renaming, or both empty.
bool same_operator(const Operator& a, const Operator& b);

enum class RelationKind { Identity, Composition, Empty, Functoriality, Naturality, Coherence };
std::string to_string(RelationKind k);
std::optional<RelationKind> relation_kind_from_string(const std::string& s);

// Two operator products. A side with `epsilon` set also multiplies in the empty operator.
struct RelationSide {
  std::vector<Operator> factors;
  bool epsilon = false;
};

struct Relation {
  RelationKind kind = RelationKind::Identity;
  std::string description;
  RelationSide lhs;
  RelationSide rhs;
};

enum class RelationVerdict { Equal, Unequal, BothEmpty };
std::string to_string(RelationVerdict v);

Operator evaluate(const RelationSide& side, bool group_level = false);
RelationVerdict check_relation(const Relation& r, bool group_level = false);

// Random instances of a relation family over the generators of `th`.
std::vector<Relation> instantiate_relations(const Theory2& th, RelationKind kind, int trials,
                                            std::mt19937_64& rng, int max_depth = 3);

}  // namespace rw2
