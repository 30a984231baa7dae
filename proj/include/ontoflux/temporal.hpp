#pragma once

// Temporal entities, the Event/Action/Agent upper ontology, and obligations
// (TEPos) / prohibitions (TENeg) over merge actions.

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ontoflux/kb.hpp"

namespace ontoflux {

struct Instant {
  Time at = 0.0;
  bool operator==(const Instant&) const = default;
};

/// Closed interval [start, end].
struct Interval {
  Time start = 0.0;
  Time end = 0.0;

  /// Throws MalformedItem if start > end.
  static Interval make(Time start, Time end);
  bool contains(Time t) const noexcept { return start <= t && t <= end; }
  bool operator==(const Interval&) const = default;
};

using TemporalEntity = std::variant<Instant, Interval>;

enum class TemporalKind { Instant, Interval };

TemporalKind classify(const TemporalEntity& entity) noexcept;

/// Names of the upper-ontology classes inside one namespace.
struct UpperOntology {
  EntityName event;
  EntityName action;
  EntityName agent;
  EntityName temporal_entity;
  EntityName instant;
  EntityName interval;
  EntityName merge_action;
  EntityName has_actor;

  static UpperOntology in(const std::string& ns);
  bool operator==(const UpperOntology&) const = default;
};

/// Axioms Action ⊆ Event, Event ⊥ Agent, TemporalEntity ≡ Instant ⊔ Interval,
/// plus MergeAction ⊆ Action.
std::vector<TBoxAxiom> upper_ontology_axioms(const UpperOntology& names);

struct ActionRecord {
  std::string action_id;
  EntityName actor;
  EntityName action_kind;
  Time occurred_at = 0.0;
  std::optional<std::pair<std::string, std::string>> target;

  bool operator==(const ActionRecord&) const = default;
};

/// A-Box facts describing an action: kind(action) and hasActor(action, actor).
std::vector<ABoxAssertion> action_assertions(const ActionRecord& record, const UpperOntology& names);

/// False when the KB does not entail the record's actor to be an Agent.
bool actor_is_agent(const Entailment& entailment, const ActionRecord& record, const UpperOntology& names);

/// Matches an ActionRecord: `atom` is kind(actor-term); a Variable actor
/// matches any actor, an Individual only that one.
struct ActionPattern {
  Atom atom;
  std::optional<std::pair<std::string, std::string>> target;

  bool matches(const ActionRecord& record) const;
  bool operator==(const ActionPattern&) const = default;
};

enum class Polarity { TEPos, TENeg };
enum class PropositionState { Pending, Fulfilled, Violated };

const char* to_string(Polarity polarity) noexcept;
const char* to_string(PropositionState state) noexcept;

struct TemporalProposition {
  std::string prop_id;
  Polarity polarity = Polarity::TEPos;
  Interval interval;
  ActionPattern pattern;
  PropositionState state = PropositionState::Pending;
  std::optional<Time> evaluated_at;

  bool operator==(const TemporalProposition&) const = default;
};

/// Advances the proposition's lifecycle given the action log up to `now`.
/// Throws UnsortedLog if the log is not ordered by occurred_at, and
/// PreconditionFailed if `now` precedes the previous evaluation time.
TemporalProposition step_proposition(const TemporalProposition& prop,
                                     const std::vector<ActionRecord>& log, Time now);

/// Throws MissingAxiom if any of the three structural axioms is absent;
/// otherwise returns the KB's disjointness violations.
std::vector<Violation> validate_upper_ontology(const KnowledgeBase& kb, const UpperOntology& names);

}  // namespace ontoflux
