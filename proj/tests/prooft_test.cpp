#include <doctest.h>

#include "rw2/coherence.hpp"
#include "rw2/presets.hpp"
#include "rw2/prooft.hpp"

using namespace rw2;

namespace {

const Theory2& monoidal() {
  static const Theory2 m = gen({"monoidal"});
  return m;
}

Path word(const std::string& w) { return singular_decompose(parse_reduction(monoidal(), w)); }

}  // namespace

TEST_CASE("reduction words infer their endpoints") {
  const auto& m = monoidal();
  Reduction r = parse_reduction(m, "alpha(a,b,c) ; alpha^-1(a,b,c)");
  CHECK(r.source() == r.target());
  Reduction s = parse_reduction(m, "lambda(a) ⊗ b");
  CHECK(m.sig.show(s.source()) == "(I ⊗ a) ⊗ b");
  CHECK(m.sig.show(s.target()) == "a ⊗ b");
}

TEST_CASE("ill-typed words are rejected with a position") {
  const auto& m = monoidal();
  CHECK_THROWS_AS(parse_reduction(m, "alpha(a,b,c) ; alpha(a,b,c)"), InferError);
  CHECK_THROWS_AS(parse_reduction(m, "alpha(a,b)"), InferError);
  CHECK_THROWS_AS(parse_reduction(m, "nosuch(a)"), std::exception);
}

TEST_CASE("singular decomposition replays") {
  const auto& m = monoidal();
  Reduction r = parse_reduction(m, "alpha(lambda(a),rho(b),c)");
  Path p = singular_decompose(r);
  CHECK(p.size() == 3);
  CHECK(replay(m, r.source(), p) == r.target());
  for (const auto& s : p) CHECK(valid_step(m, s));
  // Arguments come before the rule.
  CHECK(p.back().rule == "alpha");
}

TEST_CASE("functoriality swaps orthogonal steps") {
  const auto& m = monoidal();
  Path p = word("lambda(a) ⊗ rho(b)");
  REQUIRE(p.size() == 2);
  auto q = funct_swap(m, p[0], p[1]);
  REQUIRE(q);
  CHECK((*q)[0].address == p[1].address);
  CHECK((*q)[1].target == p[1].target);
  Path nested = word("alpha(I ⊗ a,b,c) ; (lambda(a) ⊗ b) ⊗ c");
  CHECK_FALSE(funct_swap(m, nested[0], nested[1]).has_value());
}

TEST_CASE("naturality moves a step across a rule") {
  const auto& m = monoidal();
  Path p = word("alpha(I ⊗ a,b,c) ; (lambda(a) ⊗ b) ⊗ c");
  auto mv = nat_inward(m, p, 0);
  REQUIRE(mv);
  Path q = p;
  q.erase(q.begin() + static_cast<long>(mv->position), q.begin() + static_cast<long>(mv->position + mv->length));
  q.insert(q.begin() + static_cast<long>(mv->position), mv->replacement.begin(), mv->replacement.end());
  CHECK(q.front().rule == "lambda");
  CHECK(q.back().rule == "alpha");
  CHECK(q.back().target == p.back().target);
}

TEST_CASE("tiling checker accepts axioms and rejects bogus faces") {
  const auto& m = monoidal();
  const CoherenceAxiom* pent = m.find_axiom("pentagon");
  REQUIRE(pent);
  Path l = singular_decompose(pent->lhs), r = singular_decompose(pent->rhs);
  Face f{FaceKind::Axiom, "pentagon", 0, l, r, {}};
  CHECK(check_face(m, f));
  Tiling t{{f}};
  CHECK(check_tiling(m, {pent->lhs, pent->rhs}, t).ok);

  Face bogus{FaceKind::Axiom, "pentagon", 0, l, {l.front()}, {}};
  CHECK_FALSE(check_face(m, bogus));
  Tiling empty;
  CHECK_FALSE(check_tiling(m, {pent->lhs, pent->rhs}, empty).ok);
}

TEST_CASE("general position") {
  const auto& m = monoidal();
  CHECK(in_general_position(parse_reduction(m, "alpha(a,b,c)")));
  CHECK_FALSE(in_general_position(parse_reduction(m, "alpha(a,a,c)")));
  CHECK(shape_slots(parse_reduction(m, "alpha(a,b,c) ⊗ d")) >= 1);
}

TEST_CASE("path to reduction and back") {
  const auto& m = monoidal();
  Path p = word("alpha(a,b,c ⊗ d) ; alpha(a ⊗ b,c,d)");
  Reduction r = path_to_reduction(m, p.front().source, p);
  CHECK(same_path(singular_decompose(r), p));
  CHECK(path_target(p.front().source, p) == p.back().target);
}
