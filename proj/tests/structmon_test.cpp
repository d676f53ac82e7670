#include <doctest.h>

#include <random>

#include "rw2/presets.hpp"
#include "rw2/structmon.hpp"

using namespace rw2;

namespace {

OperatorWord random_word(const Theory2& th, int n, std::mt19937_64& rng, int len) {
  OperatorWord w;
  for (int i = 0; i < len; ++i) {
    Letter l{"alpha" + std::to_string(1 + static_cast<int>(rng() % (n - 1))), {}, rng() % 2 == 1};
    int depth = static_cast<int>(rng() % 3);
    for (int d = 0; d < depth; ++d) l.address.push_back({kTensor, 1 + static_cast<int>(rng() % n)});
    w.push_back(l);
  }
  (void)th;
  return w;
}

}  // namespace

TEST_CASE("generators act like rewrite steps") {
  for (int n = 2; n <= 3; ++n) {
    Theory2 th = gen({"catalan", n});
    std::mt19937_64 rng(40 + n);
    int defined = 0;
    for (int k = 0; k < 300; ++k) {
      Term u = random_catalan(n, 1 + (n - 1) * (2 + k % 5), rng);
      Letter l = random_word(th, n, rng, 1).front();
      std::string rule = l.inverse ? l.rule + "^-1" : l.rule;
      auto step = try_step(th, u, rule, l.address);
      auto img = op_apply(op_gen(th, l), u);
      CHECK(step.has_value() == img.has_value());
      if (step && img) {
        ++defined;
        CHECK(step->target == *img);
      }
    }
    CHECK(defined > 0);
  }
}

TEST_CASE("inverse monoid laws") {
  for (int n = 2; n <= 3; ++n) {
    Theory2 th = gen({"catalan", n});
    std::mt19937_64 rng(50 + n);
    for (int k = 0; k < 200; ++k) {
      Operator o = op_word(th, random_word(th, n, rng, 1 + k % 4));
      Operator oi = op_inverse(o);
      CHECK(same_operator(op_compose(op_compose(o, oi), o), o));
      CHECK(same_operator(op_compose(op_compose(oi, o), oi), oi));
      if (o.empty) continue;
      CHECK(is_idempotent(op_compose(o, oi)));
      Operator p = op_word(th, random_word(th, n, rng, 2));
      if (p.empty) continue;
      Operator e = op_compose(o, oi), f = op_compose(p, op_inverse(p));
      CHECK(same_operator(op_compose(e, f), op_compose(f, e)));
    }
  }
}

TEST_CASE("composition with a failing overlap is empty") {
  Term x = Term::var("x"), y = Term::var("y");
  Operator a = Operator::from_seed(Term::app("f", {x}), Term::app("g", {x}));
  Operator b = Operator::from_seed(Term::app("h", {y}), y);
  CHECK(op_compose(a, b).empty);
  Operator c = Operator::from_seed(Term::app("g", {Term::app("k", {y})}), y);
  Operator ac = op_compose(a, c);
  REQUIRE_FALSE(ac.empty);
  CHECK(same_operator(ac, Operator::from_seed(Term::app("f", {Term::app("k", {y})}), y)));
  CHECK(op_compose(Operator::epsilon(), a).empty);
  CHECK(same_operator(Operator::epsilon(), op_compose(a, Operator::epsilon())));
}

TEST_CASE("seed scope") {
  CHECK_THROWS_AS(op_gen(gen({"monoidal"}), "alpha", {}), StructmonError);
  CHECK_NOTHROW(op_gen(gen({"catalan", 2}), "alpha1", {}));
}

TEST_CASE("relation families hold in C2 and C3") {
  for (int n = 2; n <= 3; ++n) {
    Theory2 th = gen({"catalan", n});
    std::mt19937_64 rng(60 + n);
    for (auto k : {RelationKind::Identity, RelationKind::Composition, RelationKind::Empty,
                   RelationKind::Functoriality, RelationKind::Naturality}) {
      CAPTURE(to_string(k));
      for (const auto& r : instantiate_relations(th, k, 40, rng))
        CHECK(check_relation(r) != RelationVerdict::Unequal);
    }
  }
}

TEST_CASE("idempotent factors vanish at group level") {
  Theory2 th = gen({"catalan", 2});
  Operator a = op_gen(th, "alpha1", {});
  Operator e = op_gen(th, Letter{"alpha1", {{kTensor, 2}}, false, true});
  Relation r{RelationKind::Identity, "", {{e, a}}, {{a}}};
  CHECK(check_relation(r, true) == RelationVerdict::Equal);
  CHECK(relation_kind_from_string("coherence") == RelationKind::Coherence);
  CHECK_FALSE(relation_kind_from_string("bogus").has_value());
}
