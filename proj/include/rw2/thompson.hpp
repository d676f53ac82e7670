#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rw2/structmon.hpp"
#include "rw2/term.hpp"

namespace rw2 {

struct ThompsonError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A leaf has no children; a node has exactly n.
struct NTree {
  std::vector<NTree> kids;
  bool is_leaf() const { return kids.empty(); }
  bool operator==(const NTree&) const = default;
};

// 0-based child indices from the root.
using TreeAddr = std::vector<int>;

NTree leaf();
NTree caret(int n);
int leaf_count(const NTree& t);
int caret_count(const NTree& t);
// Leaves in lexicographic order.
std::vector<TreeAddr> leaf_addresses(const NTree& t);
// Throws ThompsonError("arity-mismatch") when some node has another arity.
void check_arity(const NTree& t, int n);

NTree expand(const NTree& t, const TreeAddr& leaf_at, int n);
NTree mce(const NTree& a, const NTree& b);
// True when b is obtained from a by expansions.
bool is_expansion_of(const NTree& b, const NTree& a);

// Parenthesis notation: leaf ".", node "(t1 ... tn)".
std::string to_string(const NTree& t);
NTree parse_tree(const std::string& text);

// Shape of a one-symbol term; variables and other leaves become leaves.
NTree tree_of(const Term& t);

struct TreeDiagram {
  int n = 2;
  NTree dom;
  NTree cod;
  // perm[i] = cod leaf receiving dom leaf i.
  std::vector<int> perm;
  bool operator==(const TreeDiagram&) const = default;
};

std::string to_string(const TreeDiagram& d);
void validate(const TreeDiagram& d);

TreeDiagram td_id(int n);
// Expands dom leaf i (and the matching cod leaf).
TreeDiagram td_expand(const TreeDiagram& d, int dom_leaf);
TreeDiagram td_expand_dom_to(const TreeDiagram& d, const NTree& target);
TreeDiagram td_expand_cod_to(const TreeDiagram& d, const NTree& target);
TreeDiagram td_reduce(const TreeDiagram& d);
TreeDiagram td_mul(const TreeDiagram& a, const TreeDiagram& b);
TreeDiagram td_inv(const TreeDiagram& d);
bool is_order_preserving(const TreeDiagram& d);

// Diagram (T(s), T(t), pi) of a non-empty operator, unreduced.
TreeDiagram seed_diagram(const Operator& o, int n);
TreeDiagram theta(const Theory2& th, const OperatorWord& w, int n);

NTree random_tree(int n, int carets, std::mt19937_64& rng);
TreeDiagram random_diagram(int n, int max_leaves, bool order_preserving, std::mt19937_64& rng);

// Left comb with `leaves` leaves (leaves = 1 mod n-1).
NTree left_comb(int n, int leaves);
Term left_comb_term(int n, int leaves, const std::string& stem = "x");
// Word of sym-catalan generators exchanging leaves i and i+1 (1-based) of the left comb.
OperatorWord adjacent_transposition_word(const Theory2& sym_catalan, int n, int leaves, int i);
// Permutation an operator induces on the leaves of u (index of each source leaf in the image).
std::vector<int> induced_permutation(const Operator& o, const Term& u);

}  // namespace rw2
