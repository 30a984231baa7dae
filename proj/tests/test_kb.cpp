#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ontoflux/error.hpp"
#include "ontoflux/kb.hpp"
#include "support.hpp"

using namespace ontoflux;
using testing::Gen;

namespace {

EntityName o1(const std::string& local) { return EntityName::make("O1", local); }
Term ind(const std::string& local) { return individual("O1", local); }
ABoxAssertion fact(const std::string& cls, const std::string& who, Time at = 0.0) {
  return ABoxAssertion{class_atom(o1(cls), ind(who)), at};
}

}  // namespace

TEST_CASE("entity names") {
  CHECK(EntityName::make("O1", "Event") == EntityName::make("O1", "Event"));
  CHECK(EntityName::make("O1", "Event") != EntityName::make("O2", "Event"));
  CHECK(EntityName::make("O1", "Event") != EntityName::make("O1", "Action"));
  CHECK_THROWS_AS(EntityName::make("O1", "1bad"), MalformedItem);
  CHECK_THROWS_AS(EntityName::make("O1", ""), MalformedItem);
  CHECK_THROWS_AS(EntityName::make("O-1", "x"), MalformedItem);
  CHECK(EntityName::make("O1", "_a9").str() == "O1:_a9");
}

TEST_CASE("atoms are ground iff no argument is a variable") {
  CHECK(class_atom(o1("Event"), ind("Trip")).ground());
  CHECK_FALSE(class_atom(o1("Event"), variable("x")).ground());
  CHECK_FALSE(property_atom(o1("keyword"), ind("Trip"), variable("y")).ground());
  CHECK(property_atom(o1("keyword"), variable("x"), variable("y")).variables() == std::vector<std::string>{"x", "y"});
}

TEST_CASE("assert") {
  const KnowledgeBase empty("O1");

  SUBCASE("a T-Box axiom") {
    const auto kb = assert_item(empty, SubClassOf{o1("Action"), o1("Event")});
    CHECK(kb.tbox().size() == 1);
    CHECK(empty.tbox().empty());  // value semantics
  }
  SUBCASE("idempotent for duplicates") {
    const auto once = assert_item(empty, fact("Event", "Trip"));
    const auto twice = assert_item(once, fact("Event", "Trip"));
    CHECK(twice.abox().size() == 1);
    CHECK(twice == once);
  }
  SUBCASE("re-assertion keeps the earliest time") {
    auto kb = assert_item(empty, fact("Event", "Trip", 3.0));
    kb = assert_item(kb, fact("Event", "Trip", 1.0));
    kb = assert_item(kb, fact("Event", "Trip", 2.0));
    CHECK(kb.abox().at(class_atom(o1("Event"), ind("Trip"))) == 1.0);
  }
  SUBCASE("non-ground A-Box atom") {
    CHECK_THROWS_AS(assert_item(empty, ABoxAssertion{class_atom(o1("Event"), variable("x")), 0.0}), MalformedItem);
  }
  SUBCASE("negative time") { CHECK_THROWS_AS(assert_item(empty, fact("Event", "Trip", -1.0)), MalformedItem); }
  SUBCASE("union needs two distinct parts") {
    CHECK_THROWS_AS(assert_item(empty, UnionEquivalence{o1("T"), {o1("I")}}), MalformedItem);
    CHECK_THROWS_AS(assert_item(empty, UnionEquivalence{o1("T"), {o1("I"), o1("I")}}), MalformedItem);
  }
  SUBCASE("disjointness of distinct classes only") {
    CHECK_THROWS_AS(assert_item(empty, DisjointClasses{o1("Event"), o1("Event")}), MalformedItem);
  }
  SUBCASE("unsafe rule") {
    HornRule rule{"r", {class_atom(o1("A"), variable("x"))}, class_atom(o1("B"), variable("y"))};
    CHECK_THROWS_AS(assert_item(empty, rule), MalformedItem);
  }
  SUBCASE("empty rule body") {
    HornRule rule{"r", {}, class_atom(o1("B"), ind("Trip"))};
    CHECK_THROWS_AS(assert_item(empty, rule), MalformedItem);
  }
}

TEST_CASE("entailed_members") {
  SUBCASE("subclass propagation") {
    auto kb = assert_item(KnowledgeBase("O1"), SubClassOf{o1("Action"), o1("Event")});
    kb = assert_item(kb, fact("Action", "Trip"));
    CHECK(entailed_members(kb, o1("Event")) == std::set<EntityName>{o1("Trip")});
  }
  SUBCASE("empty KB") { CHECK(entailed_members(KnowledgeBase("O1"), o1("Event")).empty()); }
  SUBCASE("union part to whole") {
    auto kb = assert_item(KnowledgeBase("O1"), UnionEquivalence{o1("TemporalEntity"), {o1("Instant"), o1("Interval")}});
    kb = assert_item(kb, fact("Instant", "i"));
    CHECK(entailed_members(kb, o1("TemporalEntity")).contains(o1("i")));
  }
  SUBCASE("domain, range and rules") {
    auto kb = assert_item(KnowledgeBase("O1"), PropertyDomain{o1("keyword"), o1("Event")});
    kb = assert_item(kb, PropertyRange{o1("keyword"), o1("Subject")});
    kb = assert_item(kb, ABoxAssertion{property_atom(o1("keyword"), ind("Trip"), ind("Sea")), 0.0});
    kb = assert_item(kb, HornRule{"tag", {class_atom(o1("Subject"), variable("s"))}, class_atom(o1("Tag"), variable("s"))});
    CHECK(entailed_members(kb, o1("Event")) == std::set<EntityName>{o1("Trip")});
    CHECK(entailed_members(kb, o1("Subject")) == std::set<EntityName>{o1("Sea")});
    CHECK(entailed_members(kb, o1("Tag")) == std::set<EntityName>{o1("Sea")});
  }
  SUBCASE("unknown concept") {
    const auto kb = assert_item(KnowledgeBase("O1"), fact("Event", "Trip"));
    CHECK(entailed_members(kb, o1("Nothing")).empty());
  }
}

TEST_CASE("check_disjointness") {
  const DisjointClasses axiom{o1("Event"), o1("Agent")};
  SUBCASE("asserted clash") {
    auto kb = assert_item(KnowledgeBase("O1"), axiom);
    kb = assert_item(kb, fact("Event", "x"));
    kb = assert_item(kb, fact("Agent", "x"));
    const auto v = check_disjointness(kb);
    REQUIRE(v.size() == 1);
    CHECK(v[0].individual == o1("x"));
    CHECK(v[0].axiom == to_string(TBoxAxiom{axiom}));
  }
  SUBCASE("no shared members") {
    auto kb = assert_item(KnowledgeBase("O1"), axiom);
    kb = assert_item(kb, fact("Event", "x"));
    kb = assert_item(kb, fact("Agent", "y"));
    CHECK(check_disjointness(kb).empty());
  }
  SUBCASE("clash through inference") {
    auto kb = assert_item(KnowledgeBase("O1"), axiom);
    kb = assert_item(kb, SubClassOf{o1("Action"), o1("Event")});
    kb = assert_item(kb, fact("Action", "x"));
    kb = assert_item(kb, fact("Agent", "x"));
    CHECK(check_disjointness(kb).size() == 1);
  }
}

TEST_CASE("check_all_values_from flags only definite violations") {
  auto kb = assert_item(KnowledgeBase("O1"), AllValuesFrom{o1("Event"), o1("keyword"), o1("Subject")});
  kb = assert_item(kb, fact("Event", "Trip"));
  kb = assert_item(kb, fact("Subject", "Sea"));
  kb = assert_item(kb, ABoxAssertion{property_atom(o1("keyword"), ind("Trip"), ind("Sea")), 0.0});
  kb = assert_item(kb, ABoxAssertion{property_atom(o1("keyword"), ind("Trip"), ind("Rock")), 0.0});
  CHECK(check_all_values_from(kb).empty());  // open world: Rock may still be a Subject
  kb = close_class(kb, o1("Subject"), 1.0);
  const auto v = check_all_values_from(kb);
  REQUIRE(v.size() == 1);
  CHECK(v[0].individual == o1("Rock"));
}

TEST_CASE("close_class") {
  auto kb = assert_item(KnowledgeBase("O1"), fact("Event", "a"));
  kb = assert_item(kb, fact("Event", "b"));

  SUBCASE("records the provable members") {
    const auto closed = close_class(kb, o1("Event"), 1.0);
    const auto& rec = closed.closures().at(o1("Event"));
    CHECK(rec.members == std::set<EntityName>{o1("a"), o1("b")});
    CHECK(rec.closed_at == 1.0);
  }
  SUBCASE("a later closure supersedes") {
    auto closed = close_class(kb, o1("Event"), 1.0);
    closed = assert_item(closed, fact("Event", "c", 1.5));
    closed = close_class(closed, o1("Event"), 2.0);
    CHECK(closed.closures().at(o1("Event")).members.size() == 3);
    CHECK(closed.closures().at(o1("Event")).closed_at == 2.0);
    CHECK(closed.closures().size() == 1);
  }
  SUBCASE("cannot go back in time") {
    const auto closed = close_class(kb, o1("Event"), 2.0);
    CHECK_THROWS_AS(close_class(closed, o1("Event"), 1.0), PreconditionFailed);
  }
  SUBCASE("unmentioned concept") { CHECK_THROWS_AS(close_class(kb, o1("Nothing"), 1.0), MalformedItem); }
}

TEST_CASE("is_member is three-valued") {
  auto kb = assert_item(KnowledgeBase("O1"), fact("Event", "a"));
  kb = assert_item(kb, fact("Agent", "bot"));
  CHECK(is_member(kb, o1("a"), o1("Event")) == Truth::True);
  CHECK(is_member(kb, o1("bot"), o1("Event")) == Truth::Unknown);
  const auto closed = close_class(kb, o1("Event"), 0.0);
  CHECK(is_member(closed, o1("bot"), o1("Event")) == Truth::False);
  CHECK(is_member(closed, o1("a"), o1("Event")) == Truth::True);
}

// ---------------------------------------------------------------------------
// Properties over generated KBs.

TEST_CASE("forward chaining matches a brute-force fixpoint") {
  Gen g(11);
  const auto v = testing::vocabulary();
  for (int trial = 0; trial < 400; ++trial) {
    const auto kb = testing::random_kb(g, v, {6, 8, 3});
    const Entailment e(kb);
    REQUIRE(e.facts() == testing::naive_fixpoint(kb));
  }
}

TEST_CASE("monotonicity under added assertions") {
  Gen g(12);
  const auto v = testing::vocabulary();
  for (int trial = 0; trial < 300; ++trial) {
    const auto kb = testing::random_kb(g, v);
    const auto bigger = assert_item(kb, ABoxAssertion{testing::random_ground_atom(g, v), 0.0});
    for (const auto& c : v.classes) {
      const auto before = entailed_members(kb, c);
      const auto after = entailed_members(bigger, c);
      REQUIRE(std::includes(after.begin(), after.end(), before.begin(), before.end()));
    }
  }
}

TEST_CASE("fixpoint idempotence") {
  Gen g(13);
  const auto v = testing::vocabulary();
  for (int trial = 0; trial < 300; ++trial) {
    const auto kb = testing::random_kb(g, v);
    const Entailment first(kb);
    KnowledgeBase saturated = kb;
    for (const auto& atom : first.facts()) saturated = assert_item(saturated, ABoxAssertion{atom, 0.0});
    REQUIRE(Entailment(saturated).facts() == first.facts());
  }
}

TEST_CASE("closure soundness and three-valued consistency") {
  Gen g(14);
  const auto v = testing::vocabulary();
  for (int trial = 0; trial < 200; ++trial) {
    auto kb = testing::random_kb(g, v);
    Time now = 0.0;
    for (int step = 0; step < 4; ++step) {
      kb = assert_item(kb, ABoxAssertion{testing::random_ground_atom(g, v), now});
      const auto c = g.pick(v.classes);
      if (kb.mentions_class(c)) {
        kb = close_class(kb, c, now);
        REQUIRE(kb.closures().at(c).members == entailed_members(kb, c));
      }
      const Entailment e(kb);
      for (const auto& cls : v.classes) {
        for (const auto& who : e.members(cls)) REQUIRE(is_member(kb, e, who, cls) == Truth::True);
      }
      now += 1.0;
    }
  }
}

TEST_CASE("insertions stay within n*c + n*n*p") {
  Gen g(15);
  const auto v = testing::vocabulary();
  for (int trial = 0; trial < 300; ++trial) {
    const auto kb = testing::random_kb(g, v, {6, 10, 3});
    const Entailment e(kb);
    std::set<EntityName> individuals, classes, properties;
    for (const auto& atom : e.facts()) {
      (atom.kind == AtomKind::Class ? classes : properties).insert(atom.predicate);
      for (const auto& t : atom.args) individuals.insert(std::get<Individual>(t).name);
    }
    const std::size_t n = individuals.size();
    REQUIRE(e.insertions() <= n * classes.size() + n * n * properties.size());
  }
}
