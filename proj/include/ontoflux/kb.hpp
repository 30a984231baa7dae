#pragma once

// Closed-world knowledge base: T-Box axioms, A-Box assertions, R-Box Horn rules,
// a restricted forward chainer and per-concept closure records.

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ontoflux {

/// Simulation / monitoring time, in time units.
using Time = double;

/// `[A-Za-z_][A-Za-z0-9_]*`
bool is_identifier(std::string_view token) noexcept;

struct EntityName {
  std::string ns;
  std::string local;

  /// Validating constructor; throws MalformedItem on a bad token.
  static EntityName make(std::string ns, std::string local);

  std::string str() const { return ns.empty() ? local : ns + ":" + local; }

  auto operator<=>(const EntityName&) const = default;
  bool operator==(const EntityName&) const = default;
};

struct Individual {
  EntityName name;
  auto operator<=>(const Individual&) const = default;
  bool operator==(const Individual&) const = default;
};

struct Variable {
  std::string token;
  auto operator<=>(const Variable&) const = default;
  bool operator==(const Variable&) const = default;
};

using Term = std::variant<Individual, Variable>;

inline bool is_variable(const Term& t) noexcept { return std::holds_alternative<Variable>(t); }

enum class AtomKind { Class, Property };

/// A class atom `C(s)` or a property atom `p(s, o)`.
struct Atom {
  AtomKind kind = AtomKind::Class;
  EntityName predicate;
  std::vector<Term> args;

  bool ground() const noexcept;
  const Term& subject() const { return args.at(0); }
  const Term& object() const { return args.at(1); }
  /// Variable tokens in order of first occurrence.
  std::vector<std::string> variables() const;

  auto operator<=>(const Atom&) const = default;
  bool operator==(const Atom&) const = default;
};

Atom class_atom(EntityName concept_name, Term subject);
Atom property_atom(EntityName property, Term subject, Term object);
Term individual(std::string ns, std::string local);
Term variable(std::string token);

std::string to_string(const Term& term);
std::string to_string(const Atom& atom);

/// Variable token -> individual.
using Binding = std::map<std::string, EntityName>;

/// Extends `binding` so that `pattern` matches the ground atom `fact`.
bool unify(const Atom& pattern, const Atom& fact, Binding& binding);
/// Replaces bound variables; unbound ones are left in place.
Atom instantiate(const Atom& pattern, const Binding& binding);

// ---------------------------------------------------------------------------
// T-Box

struct ClassDeclaration {
  EntityName name;
  auto operator<=>(const ClassDeclaration&) const = default;
  bool operator==(const ClassDeclaration&) const = default;
};
struct PropertyDeclaration {
  EntityName name;
  auto operator<=>(const PropertyDeclaration&) const = default;
  bool operator==(const PropertyDeclaration&) const = default;
};
struct SubClassOf {
  EntityName sub;
  EntityName super;
  auto operator<=>(const SubClassOf&) const = default;
  bool operator==(const SubClassOf&) const = default;
};
struct DisjointClasses {
  EntityName a;
  EntityName b;
  auto operator<=>(const DisjointClasses&) const = default;
  bool operator==(const DisjointClasses&) const = default;
};
/// whole ≡ parts[0] ⊔ parts[1] ⊔ ...
struct UnionEquivalence {
  EntityName whole;
  std::vector<EntityName> parts;
  auto operator<=>(const UnionEquivalence&) const = default;
  bool operator==(const UnionEquivalence&) const = default;
};
struct PropertyDomain {
  EntityName property;
  EntityName cls;
  auto operator<=>(const PropertyDomain&) const = default;
  bool operator==(const PropertyDomain&) const = default;
};
struct PropertyRange {
  EntityName property;
  EntityName cls;
  auto operator<=>(const PropertyRange&) const = default;
  bool operator==(const PropertyRange&) const = default;
};
/// cls ⊑ ∀property.filler. Checked, never used for inference.
struct AllValuesFrom {
  EntityName cls;
  EntityName property;
  EntityName filler;
  auto operator<=>(const AllValuesFrom&) const = default;
  bool operator==(const AllValuesFrom&) const = default;
};

using TBoxAxiom = std::variant<ClassDeclaration, PropertyDeclaration, SubClassOf, DisjointClasses,
                               UnionEquivalence, PropertyDomain, PropertyRange, AllValuesFrom>;

std::string to_string(const TBoxAxiom& axiom);

// ---------------------------------------------------------------------------
// A-Box / R-Box

struct ABoxAssertion {
  Atom atom;
  Time asserted_at = 0.0;
  bool operator==(const ABoxAssertion&) const = default;
};

struct HornRule {
  std::string rule_id;
  std::vector<Atom> body;
  Atom head;
  auto operator<=>(const HornRule&) const = default;
  bool operator==(const HornRule&) const = default;
};

struct ClosureRecord {
  EntityName concept_name;
  std::set<EntityName> members;
  Time closed_at = 0.0;
  bool operator==(const ClosureRecord&) const = default;
};

class KnowledgeBase;
KnowledgeBase assert_item(const KnowledgeBase& kb, const TBoxAxiom& axiom);
KnowledgeBase assert_item(const KnowledgeBase& kb, const ABoxAssertion& assertion);
KnowledgeBase assert_item(const KnowledgeBase& kb, const HornRule& rule);
KnowledgeBase close_class(const KnowledgeBase& kb, const EntityName& concept_name, Time now);

/// Immutable KB snapshot. All mutation goes through the free functions above,
/// which return a modified copy.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  explicit KnowledgeBase(std::string ns) : ns_(std::move(ns)) {}

  /// Home namespace of the ontology this KB was loaded from (may be empty).
  const std::string& ns() const noexcept { return ns_; }
  const std::set<TBoxAxiom>& tbox() const noexcept { return tbox_; }
  /// Ground atom -> earliest assertion time.
  const std::map<Atom, Time>& abox() const noexcept { return abox_; }
  const std::set<HornRule>& rbox() const noexcept { return rbox_; }
  const std::map<EntityName, ClosureRecord>& closures() const noexcept { return closures_; }

  std::vector<ABoxAssertion> assertions() const;
  /// True when the name occurs as a class in the T-Box, A-Box or R-Box.
  bool mentions_class(const EntityName& name) const;
  bool is_closed(const EntityName& concept_name) const { return closures_.contains(concept_name); }

  /// Equality of T-Box, A-Box and R-Box (closures ignored).
  bool same_content(const KnowledgeBase& other) const;

  bool operator==(const KnowledgeBase&) const = default;

 private:
  friend KnowledgeBase assert_item(const KnowledgeBase&, const TBoxAxiom&);
  friend KnowledgeBase assert_item(const KnowledgeBase&, const ABoxAssertion&);
  friend KnowledgeBase assert_item(const KnowledgeBase&, const HornRule&);
  friend KnowledgeBase close_class(const KnowledgeBase&, const EntityName&, Time);

  std::string ns_;
  std::set<TBoxAxiom> tbox_;
  std::map<Atom, Time> abox_;
  std::set<HornRule> rbox_;
  std::map<EntityName, ClosureRecord> closures_;
};

// ---------------------------------------------------------------------------
// Forward chaining

/// Ground facts indexed by predicate.
class FactIndex {
 public:
  /// Returns false if the atom was already present.
  bool insert(const Atom& atom);
  bool contains(const Atom& atom) const { return all_.contains(atom); }
  const std::vector<Atom>& with_predicate(AtomKind kind, const EntityName& predicate) const;
  const std::set<Atom>& all() const noexcept { return all_; }
  std::size_t size() const noexcept { return all_.size(); }

 private:
  std::set<Atom> all_;
  std::map<std::pair<AtomKind, EntityName>, std::vector<Atom>> by_predicate_;
};

/// One-step derivation rules compiled from a KB's T-Box and R-Box.
class RuleEngine {
 public:
  using Sink = std::function<void(const Atom& head, std::span<const Atom> premises)>;

  explicit RuleEngine(const KnowledgeBase& kb);

  /// Emits every one-step consequence that uses `trigger` as a premise and
  /// finds its other premises in `facts`. `trigger` must already be in `facts`.
  void derive(const Atom& trigger, const FactIndex& facts, const Sink& sink) const;

 private:
  std::multimap<EntityName, EntityName> class_to_super_;  // SubClassOf and union part -> whole
  std::multimap<EntityName, EntityName> domain_;
  std::multimap<EntityName, EntityName> range_;
  std::vector<HornRule> rules_;
};

/// Least fixpoint of the KB's asserted atoms under its RuleEngine.
class Entailment {
 public:
  explicit Entailment(const KnowledgeBase& kb);

  const std::set<Atom>& facts() const noexcept { return index_.all(); }
  bool holds(const Atom& atom) const { return index_.contains(atom); }
  std::set<EntityName> members(const EntityName& concept_name) const;
  /// Number of ground atoms inserted while saturating (asserted ones included).
  std::size_t insertions() const noexcept { return insertions_; }

 private:
  FactIndex index_;
  std::size_t insertions_ = 0;
};

std::set<EntityName> entailed_members(const KnowledgeBase& kb, const EntityName& concept_name);

struct Violation {
  EntityName individual;
  std::string axiom;
  auto operator<=>(const Violation&) const = default;
  bool operator==(const Violation&) const = default;
};

/// Individuals entailed into both sides of some DisjointClasses axiom.
std::vector<Violation> check_disjointness(const KnowledgeBase& kb);

/// p(x, y) with x:cls where y is definitely (closed filler) not a filler member.
std::vector<Violation> check_all_values_from(const KnowledgeBase& kb);

enum class Truth { True, False, Unknown };

Truth is_member(const KnowledgeBase& kb, const EntityName& individual_name,
                const EntityName& concept_name);
Truth is_member(const KnowledgeBase& kb, const Entailment& entailment,
                const EntityName& individual_name, const EntityName& concept_name);

}  // namespace ontoflux
