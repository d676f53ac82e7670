#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rw2 {

struct Symbol {
  std::string name;
  int arity = 0;
  bool operator==(const Symbol&) const = default;
};

struct TermNode;

// Immutable first-order term. Copies share structure.
class Term {
 public:
  Term() = default;

  static Term var(std::string name);
  static Term app(std::string symbol, std::vector<Term> args = {});

  bool is_var() const;
  const std::string& name() const;
  const std::vector<Term>& args() const;
  std::size_t arity() const { return args().size(); }
  const Term& arg(std::size_t i) const { return args()[i]; }

  std::size_t hash() const;
  std::size_t size() const;
  int depth() const;

  explicit operator bool() const { return node_ != nullptr; }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  friend bool operator<(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const TermNode> node_;
};

struct TermNode {
  bool is_var = false;
  std::string name;
  std::vector<Term> args;
  std::size_t hash = 0;
  std::size_t size = 1;
  int depth = 0;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

// One step of an address: the symbol expected at the node and a 1-based argument index.
struct AddrStep {
  std::string symbol;
  int index = 1;
  bool operator==(const AddrStep&) const = default;
  auto operator<=>(const AddrStep&) const = default;
};

using Address = std::vector<AddrStep>;
using Subst = std::map<std::string, Term>;

struct TermError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string to_string(const Term& t);
std::string to_string(const Address& a);
std::string to_string(const Subst& s);

bool is_prefix(const Address& prefix, const Address& a);
bool orthogonal(const Address& a, const Address& b);
Address concat(const Address& a, const Address& b);
// Strips `prefix` from `a`; requires is_prefix(prefix, a).
Address suffix_after(const Address& prefix, const Address& a);
Address common_prefix(const Address& a, const Address& b);
// Lexicographic on argument indices, shorter-first for prefixes (preorder).
bool address_less(const Address& a, const Address& b);

std::optional<Term> subterm(const Term& t, const Address& a);
Term replace(const Term& t, const Address& a, const Term& u);

// All addresses of t in preorder (root first, children left to right).
std::vector<Address> positions(const Term& t);
// Addresses of non-variable nodes, preorder.
std::vector<Address> function_positions(const Term& t);

// Variables in left-to-right first-occurrence order.
std::vector<std::string> vars(const Term& t);
std::vector<Address> var_occurrences(const Term& t, const std::string& x);
int occurrences(const Term& t, const std::string& x);
bool is_ground(const Term& t);
bool is_linear(const Term& t);

Term apply(const Term& t, const Subst& s);
// (s1 then s2): apply(t, compose(s1, s2)) == apply(apply(t, s1), s2).
Subst compose(const Subst& s1, const Subst& s2);

std::optional<Subst> match(const Term& pattern, const Term& subject);
std::optional<Subst> match_into(const Term& pattern, const Term& subject, Subst s);
std::optional<Subst> unify(const Term& t, const Term& u);
std::optional<Subst> unify_all(const std::vector<std::pair<Term, Term>>& eqs);
std::pair<Term, Term> rename_apart(const Term& t, const Term& u);
std::optional<Term> mgci(const Term& t, const Term& u);

// Appends "#k" to every variable name.
Term tag_vars(const Term& t, int k);
Subst tag_subst(const std::vector<std::string>& names, int k);

// Renames variables to v1, v2, ... in first-occurrence order over the list.
std::vector<Term> canonical_rename(const std::vector<Term>& ts, const std::string& stem = "v");
Term canonical_rename(const Term& t, const std::string& stem = "v");
bool alpha_equiv(const Term& t, const Term& u);
bool alpha_equiv(const std::vector<Term>& ts, const std::vector<Term>& us);
// Key identifying the alpha-class of a term tuple.
std::string variant_key(const std::vector<Term>& ts);

// Drops "#k" tags, keeping the result collision-free; purely cosmetic.
std::vector<Term> tidy_vars(const std::vector<Term>& ts);
// True when u is an instance of t.
bool is_instance(const Term& u, const Term& t);
// Proper instance: instance but not a variant.
bool is_proper_instance(const Term& u, const Term& t);

}  // namespace rw2
