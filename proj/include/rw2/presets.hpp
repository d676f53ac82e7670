#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rw2/theory.hpp"

namespace rw2 {

struct PresetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PresetId {
  std::string name;
  int n = 2;
  // catalan / sym-catalan: also declare the nested-square axioms.
  bool nested_squares = false;
};

// monoidal, laplaza-assoc, catalan, sym-catalan, nested-cex, disjoint-cex,
// infiniteqf-cex, finiteness-cex, iterated
const std::vector<std::string>& preset_names();
bool preset_takes_n(const std::string& name);
Theory2 gen(const PresetId& p);

// Single-symbol Catalan terms over the symbol "tensor".
extern const char* const kTensor;
std::vector<Term> U(const Term& t);
Term lmb(int n, const Term& t);
long catalan_length(const Term& t);
long catalan_rank(int n, const Term& t);

// Random Catalan term with exactly `leaves` distinct variable leaves (leaves = 1 mod n-1).
Term random_catalan(int n, int leaves, std::mt19937_64& rng, const std::string& stem = "x");

// Seed of the finiteness family: F(...F(F(S(x0),x1),x2)...,xk) applied to T(y).
Term finiteness_seed(int k);

}  // namespace rw2
