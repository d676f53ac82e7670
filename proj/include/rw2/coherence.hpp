#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rw2/critical.hpp"
#include "rw2/prooft.hpp"
#include "rw2/theory.hpp"

namespace rw2 {

struct Orientation {
  std::map<std::string, int> sign;
};

struct OrientationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Signs recorded on the rules themselves.
Orientation standard_orientation(const Theory2& th);
void validate_orientation(const Theory2& th, const Orientation& o);
Theory2 positive_subtheory(const Theory2& th, const Orientation& o);

// Rule labels occurring in a reduction expression.
std::vector<std::string> rules_used(const Reduction& r);

enum class UnjoinedReason { NotJoinableWithinFuel, NoCommutingProof };
std::string to_string(UnjoinedReason r);

struct Joining {
  std::string span_id;
  Term source;
  // [left] + left completion, [right] + right completion.
  Path left_path;
  Path right_path;
  Reduction left_completion;
  Reduction right_completion;
  // Axiom label for a direct match, otherwise "derived".
  std::string commutes_by;
  // Faces rewriting left_path into right_path.
  Tiling tiling;
};

struct Unjoined {
  std::string span_id;
  UnjoinedReason reason = UnjoinedReason::NoCommutingProof;
  std::string detail;
};

struct JoinOutcome {
  std::optional<Joining> joining;
  Unjoined unjoined;
  bool ok() const { return joining.has_value(); }
};

// A proven equation between two paths out of a general source.
struct Lemma {
  std::string label;
  Term source;
  Path lhs;
  Path rhs;
  std::vector<Face> proof;
};

struct JoinOptions {
  std::vector<Lemma> lemmas;
  int max_extensions = 3;
  int search_depth = 3;
  std::size_t node_cap = 4000;
};

// `th` may contain negative rules: normal forms use the positive rules only, and formal
// inverses are available to the tiling search.
JoinOutcome join_span(const Theory2& th, const CriticalSpan& s, long fuel, const JoinOptions& opt = {});

struct SpanRecord {
  CriticalSpan span;
  JoinOutcome outcome;
};

struct CompletenessCertificate {
  std::string theory;
  Theory2 positive;
  // Theory the tilings are checked against (the positive theory, or the invertible ambient one).
  Theory2 ambient;
  RankVerdict rank;
  std::string rank_description;
  std::vector<SpanRecord> spans;
  long fuel = 0;
  bool valid() const;
  std::vector<std::string> unproven() const;
};

CompletenessCertificate certify_complete(const Theory2& positive, const RankFn& rk, long fuel,
                                         const Theory2* ambient = nullptr);

struct CertificateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Path nf_trace(const CompletenessCertificate& cert, const Term& t);
Reduction nf_reduction(const CompletenessCertificate& cert, const Term& t);

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Tiling prove_equal_to_nf(const CompletenessCertificate& cert, const Path& phi, const Path& psi);

// Faces undoing `faces`, in reverse order.
std::vector<Face> reverse_faces(const std::vector<Face>& faces);

struct MonicityReport {
  bool ok = true;
  std::vector<std::string> violations;
};
MonicityReport syntactic_monicity(const Theory2& th);

enum class VerdictKind { CoherentThm4, CoherentThm4Invertible, Inconclusive };
std::string to_string(VerdictKind k);

struct MacLaneVerdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  std::vector<std::string> reasons;
  CompletenessCertificate certificate;
};

MacLaneVerdict maclane_verdict(const Theory2& th, const Orientation& o, const RankFn& rk, long fuel);

}  // namespace rw2
