#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rw2/theory.hpp"

namespace rw2 {

struct RedEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  std::string rule;
  Address address;
  std::string label() const { return rule + "@" + to_string(address); }
};

struct RedGraph {
  std::vector<Term> vertices;
  std::vector<RedEdge> edges;
  std::vector<std::size_t> sources;
  // BFS distance from the nearest source.
  std::vector<int> dist;
  // Vertices at the depth bound that still have unexplored steps.
  std::vector<bool> frontier;
  int depth = 0;

  std::size_t add_vertex(const Term& t, int d = 0);
  std::size_t add_edge(std::size_t from, std::size_t to, const std::string& rule, const Address& a = {});
  std::optional<std::size_t> find(const Term& t) const;
  std::vector<std::size_t> out(std::size_t v) const;
  std::vector<std::size_t> in(std::size_t v) const;

 private:
  std::unordered_map<Term, std::size_t, TermHash> index_;
};

RedGraph build_graph(const Theory2& th, const std::vector<Term>& seeds, int depth);

using EdgePath = std::vector<std::size_t>;

struct ParallelPair {
  std::size_t s = 0;
  std::size_t t = 0;
  EdgePath alpha;
  EdgePath beta;
};

// Simple directed paths of length at most max_len, in lexicographic order of edge indices.
std::vector<EdgePath> paths(const RedGraph& g, std::size_t s, std::size_t t, int max_len);

struct DiamondVerdict {
  bool diamond = false;
  // The depth bound cut the interval, so the verdict may change with more depth.
  bool interval_truncated = false;
};

// Vertices v with s ->* v and v ->* t.
std::vector<std::size_t> interval(const RedGraph& g, std::size_t s, std::size_t t);
DiamondVerdict is_diamond(const RedGraph& g, const ParallelPair& p);

struct BasicDiamond {
  ParallelPair pair;
  bool interval_truncated = false;
};

std::vector<BasicDiamond> basic_diamonds(const RedGraph& g, const Theory2& th);
// Paths of at most max_len edges; defaults to the depth of the graph.
std::vector<BasicDiamond> basic_diamonds(const RedGraph& g, const Theory2& th, int max_len);

// Diamond a substitution instance of diamond b (same labels, source an instance).
bool diamond_instance_of(const RedGraph& g, const ParallelPair& a, const ParallelPair& b);

struct BranchingReport {
  bool evidence = false;
  // Reversed theory is term-linear and non-increasing.
  bool syntactic = false;
  // Forward rank certificate held on the sample, so the theory is terminating on it.
  bool quasicycle_free_evidence = false;
  std::vector<std::string> reasons;
  struct Sample {
    Term term;
    // Distinct one-step targets found with 1, 2, ... equational unfoldings.
    std::vector<std::size_t> counts;
  };
  std::vector<Sample> samples;
};

BranchingReport reverse_branching_check(const Theory2& th, const std::vector<Term>& samples);

// One edge per line: source TAB rule@address TAB target.
std::string export_graph(const RedGraph& g, const Signature& sig);

}  // namespace rw2
