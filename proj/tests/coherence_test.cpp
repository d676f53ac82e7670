#include <doctest.h>

#include <random>

#include "rw2/coherence.hpp"
#include "rw2/presets.hpp"

using namespace rw2;

namespace {

Theory2 without_axiom(Theory2 th, const std::string& label) {
  std::erase_if(th.axioms, [&](const CoherenceAxiom& a) { return a.label == label; });
  return th;
}

}  // namespace

TEST_CASE("orientation and positive subtheory") {
  Theory2 m = gen({"monoidal"});
  auto o = standard_orientation(m);
  Theory2 pos = positive_subtheory(m, o);
  CHECK(pos.rules.size() == 3);
  for (const auto& r : pos.rules) CHECK_FALSE(r.is_formal_inverse);
  Orientation bad = o;
  bad.sign.erase("alpha");
  CHECK_THROWS_AS(validate_orientation(m, bad), OrientationError);
}

TEST_CASE("catalan 2 span joins by the pentagon") {
  Theory2 c = gen({"catalan", 2});
  auto spans = critical_spans(c);
  REQUIRE(spans.size() == 1);
  auto out = join_span(c, spans[0], 200);
  REQUIRE(out.ok());
  CHECK(out.joining->commutes_by == "pentagon1");
  CHECK(check_tiling_paths(c, spans[0].source, out.joining->left_path, out.joining->right_path,
                           out.joining->tiling)
            .ok);
}

TEST_CASE("verdicts") {
  Theory2 la = gen({"laplaza-assoc"});
  CHECK(maclane_verdict(la, standard_orientation(la), *la.rank, 200).kind == VerdictKind::CoherentThm4);
  Theory2 c2 = gen({"catalan", 2});
  CHECK(maclane_verdict(c2, standard_orientation(c2), *c2.rank, 200).kind == VerdictKind::CoherentThm4Invertible);
  Theory2 np = without_axiom(la, "pentagon");
  auto v = maclane_verdict(np, standard_orientation(np), *np.rank, 200);
  CHECK(v.kind == VerdictKind::Inconclusive);
  CHECK_FALSE(v.certificate.unproven().empty());
}

TEST_CASE("a monoidal theory without the triangle is inconclusive") {
  Theory2 m = without_axiom(gen({"monoidal"}), "triangle");
  CHECK(maclane_verdict(m, standard_orientation(m), *m.rank, 200).kind == VerdictKind::Inconclusive);
}

TEST_CASE("nested squares make C3 coherent") {
  Theory2 c3 = gen({"catalan", 3, true});
  CHECK(maclane_verdict(c3, standard_orientation(c3), *c3.rank, 200).kind == VerdictKind::CoherentThm4Invertible);
}

TEST_CASE("syntactic monicity") {
  CHECK(syntactic_monicity(gen({"monoidal"})).ok);
  Theory2 th = gen({"nested-cex"});
  auto r = syntactic_monicity(th);
  CHECK(r.ok == r.violations.empty());
}

TEST_CASE("parallel traces to the normal form are provably equal in C2") {
  Theory2 c2 = gen({"catalan", 2});
  auto o = standard_orientation(c2);
  Theory2 pos = positive_subtheory(c2, o);
  auto cert = certify_complete(pos, *c2.rank, 200, &c2);
  REQUIRE(cert.valid());
  std::mt19937_64 rng(3);
  for (int k = 0; k < 30; ++k) {
    Term u = random_catalan(2, 3 + k % 6, rng);
    Path a = normalize(pos, u, Strategy::random(2 * k + 1)).trace;
    Path b = normalize(pos, u, Strategy::random(2 * k + 2)).trace;
    if (a.empty()) continue;
    Tiling t = prove_equal_to_nf(cert, a, b);
    CHECK(check_tiling_paths(cert.ambient, u, a, b, t).ok);
  }
}

TEST_CASE("an invalid certificate refuses to prove") {
  Theory2 c3 = gen({"catalan", 3});
  Theory2 pos = positive_subtheory(c3, standard_orientation(c3));
  auto cert = certify_complete(pos, *c3.rank, 200, &c3);
  CHECK_FALSE(cert.valid());
  CHECK(cert.unproven().size() == 2);
  std::mt19937_64 rng(5);
  Term u = random_catalan(3, 7, rng);
  Path a = normalize(pos, u, Strategy::innermost()).trace;
  CHECK_THROWS_AS(prove_equal_to_nf(cert, a, a), CertificateError);
}
