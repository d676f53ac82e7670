#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rw2/reduction.hpp"
#include "rw2/rule.hpp"
#include "rw2/term.hpp"

namespace rw2 {

struct Signature {
  std::vector<Symbol> symbols;
  // alias token -> symbol name
  std::map<std::string, std::string> aliases;
  // symbols printed infix with their first alias
  std::set<std::string> infix;
  std::set<std::string> declared_vars;

  void add(const Symbol& s);
  bool has(const std::string& name) const;
  int arity(const std::string& name) const;
  std::string display_name(const std::string& symbol) const;
  std::string show(const Term& t) const;
};

// Family of mutually recursive integer measures; each symbol's value is an
// affine combination of its children's measure values. The first measure is
// the rank proper, the others are auxiliary.
struct RankFn {
  struct Coef {
    long coef = 0;
    std::string measure;
    int child = 1;  // 1-based
  };
  struct Affine {
    std::vector<Coef> terms;
    long constant = 0;
  };
  struct Measure {
    std::string name;
    long base = 0;
    std::map<std::string, Affine> by_symbol;
  };
  std::vector<Measure> measures;

  Measure& measure(const std::string& name);
  const Measure* find(const std::string& name) const;
  // Symbols missing a clause in some measure.
  std::vector<std::string> uncovered(const Signature& sig) const;
  long eval(const Term& t) const;
  long eval(const Term& t, const std::string& measure) const;
  std::string describe() const;
};

struct CoherenceAxiom {
  std::string label;
  Reduction lhs;
  Reduction rhs;
};

struct TermEquation {
  std::string label;
  Term lhs;
  Term rhs;
};

struct Theory2 {
  std::string name;
  Signature sig;
  std::vector<Rule> rules;
  std::vector<TermEquation> term_eqs;
  // Convergent orientation of the term equations, used by e_normalize.
  std::vector<Rule> modulo;
  std::vector<CoherenceAxiom> axioms;
  std::optional<RankFn> rank;
  // Designated exploration seeds for reduction graphs.
  std::vector<Term> seeds;
  std::vector<std::string> warnings;

  const Rule* find_rule(const std::string& label) const;
  Rule* find_rule(const std::string& label);
  const CoherenceAxiom* find_axiom(const std::string& label) const;
  // Declares a rule invertible, adding its formal inverse.
  void make_invertible(const std::string& label);
  void set_orientation(const std::string& label, int sign);
  bool term_linear() const;
  bool non_increasing() const;
  bool fully_invertible() const;
  bool has_negative_rules() const;
};

struct Redex {
  std::size_t rule_index = 0;
  Address address;
  Subst subst;
};

std::vector<Redex> find_redexes(const Theory2& th, const Term& t);
SingularStep rewrite_step(const Theory2& th, const Term& t, const Rule& r, const Address& a,
                          const Subst& s);
SingularStep rewrite_step(const Theory2& th, const Term& t, const Redex& rx);
// Applies the named rule at an address if the subterm there is a redex.
std::optional<SingularStep> try_step(const Theory2& th, const Term& t, const std::string& rule,
                                     const Address& a);
// Checks that the step is a genuine rule instance with the recorded endpoints.
bool valid_step(const Theory2& th, const SingularStep& s);
Term replay(const Theory2& th, const Term& start, const std::vector<SingularStep>& trace);

struct Strategy {
  enum class Kind { LeftmostInnermost, LeftmostOutermost, Random } kind = Kind::LeftmostInnermost;
  std::uint64_t seed = 0;
  static Strategy innermost() { return {Kind::LeftmostInnermost, 0}; }
  static Strategy outermost() { return {Kind::LeftmostOutermost, 0}; }
  static Strategy random(std::uint64_t s) { return {Kind::Random, s}; }
};

constexpr long kDefaultFuel = 10000;
// Reads RW2_FUEL, falling back to kDefaultFuel.
long default_fuel();

struct NormalizeResult {
  Term nf;
  std::vector<SingularStep> trace;
  bool fuel_exhausted = false;
};

NormalizeResult normalize(const Theory2& th, const Term& t, Strategy strategy = {},
                          long fuel = kDefaultFuel);

struct RankVerdict {
  bool certified = true;
  std::optional<SingularStep> counterexample;
  long rank_before = 0;
  long rank_after = 0;
  std::size_t samples = 0;
  std::size_t steps_checked = 0;
  std::vector<std::string> uncovered;
};

using TermSampler = std::function<Term(std::mt19937_64&)>;

RankVerdict check_rank_certificate(const Theory2& th, const RankFn& rk, const TermSampler& sampler,
                                   std::size_t n_samples, std::uint64_t seed = 1);

// Uniform-ish random term over the signature with the given variables.
Term random_term(const Signature& sig, const std::vector<std::string>& var_names, int max_depth,
                 std::mt19937_64& rng);
TermSampler default_sampler(const Theory2& th, int max_depth = 5);

// Canonical representative under the convergent `modulo` rules.
Term e_normalize(const std::vector<Rule>& conv, const Term& t, long fuel = kDefaultFuel);
Term e_normalize(const Theory2& th, const Term& t);

// Theory whose rules are the `modulo` block, for analysis of the orientation.
Theory2 modulo_theory(const Theory2& th);

}  // namespace rw2
