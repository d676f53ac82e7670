#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rw2/dsl.hpp"
#include "rw2/reduction.hpp"
#include "rw2/theory.hpp"

namespace rw2 {

using Path = std::vector<SingularStep>;

struct InferError : std::runtime_error {
  InferError(const std::string& msg, std::string subexpr, int line, int col);
  std::string subexpr;
  int line;
  int col;
};

Reduction infer(const Theory2& th, const WordExpr& e, bool implicit_vars = false);
Reduction parse_reduction(const Theory2& th, const std::string& text, const ParseContext& ctx = {});

// Singular steps in the oriented order: arguments before the rule, children left to right.
Path singular_decompose(const Reduction& r);
Path canonical_trace(const Theory2& th, const Reduction& r);
Path canonical_trace(const Theory2& th, const Path& p);

// Interchange of two adjacent steps at orthogonal addresses.
std::optional<Path> funct_swap(const Theory2& th, const SingularStep& a, const SingularStep& b);

// A rewrite of a path segment by a naturality square.
struct NatMove {
  std::size_t position = 0;
  std::size_t length = 0;
  Path replacement;
};
// [r ; copies of psi below the rhs occurrences of x]  =>  [copies of psi at lhs occurrences ; r]
std::optional<NatMove> nat_inward(const Theory2& th, const Path& p, std::size_t i);
// [copies of psi at lhs occurrences of x ; r]  =>  [r ; copies at rhs occurrences]
std::optional<NatMove> nat_outward(const Theory2& th, const Path& p, std::size_t i);

std::string shape(const Reduction& r);
std::set<std::string> shape_vars(const Reduction& r);
int shape_slots(const Reduction& r);
bool in_general_position(const Reduction& r);

enum class FaceKind { Funct, Nat, Axiom, Inverse, Composite };
std::string to_string(FaceKind k);

struct Face {
  FaceKind kind = FaceKind::Funct;
  std::string label;
  // Index in the current path where `lhs` starts.
  std::size_t position = 0;
  Path lhs;
  Path rhs;
  // Composite faces only: faces rewriting lhs into rhs, positions relative to lhs.
  std::vector<Face> inner;
};

struct Tiling {
  std::vector<Face> faces;
};

struct TilingCheck {
  bool ok = true;
  std::size_t bad_face = 0;
  std::string reason;
};

// Validates a single face in isolation.
bool check_face(const Theory2& th, const Face& f, std::string* why = nullptr);
TilingCheck check_tiling(const Theory2& th, const std::pair<Reduction, Reduction>& claim,
                         const Tiling& proof);
TilingCheck check_tiling_paths(const Theory2& th, const Term& source, const Path& from,
                               const Path& to, const Tiling& proof);
// Applies the faces to `start`, without validating them.
Path apply_faces(const Path& start, const std::vector<Face>& faces);

// Identity-free reduction composed of the steps (whiskered rule applications).
Reduction path_to_reduction(const Theory2& th, const Term& source, const Path& p);
Term path_target(const Term& source, const Path& p);

std::size_t face_count(const Tiling& t);

}  // namespace rw2
