#include "ontoflux/temporal.hpp"

#include <algorithm>

#include "ontoflux/error.hpp"

namespace ontoflux {

Interval Interval::make(Time start, Time end) {
  if (!(start <= end)) throw MalformedItem("interval start after end");
  return Interval{start, end};
}

TemporalKind classify(const TemporalEntity& entity) noexcept {
  return std::holds_alternative<Instant>(entity) ? TemporalKind::Instant : TemporalKind::Interval;
}

UpperOntology UpperOntology::in(const std::string& ns) {
  auto name = [&](const char* local) { return EntityName::make(ns, local); };
  return UpperOntology{name("Event"),        name("Action"),   name("Agent"),
                       name("TemporalEntity"), name("Instant"), name("Interval"),
                       name("MergeAction"),  name("hasActor")};
}

std::vector<TBoxAxiom> upper_ontology_axioms(const UpperOntology& n) {
  return {
      SubClassOf{n.action, n.event},
      DisjointClasses{n.event, n.agent},
      UnionEquivalence{n.temporal_entity, {n.instant, n.interval}},
      SubClassOf{n.merge_action, n.action},
      PropertyDeclaration{n.has_actor},
  };
}

std::vector<ABoxAssertion> action_assertions(const ActionRecord& record, const UpperOntology& names) {
  const Term self = Individual{EntityName::make(names.event.ns, record.action_id)};
  return {
      ABoxAssertion{class_atom(record.action_kind, self), record.occurred_at},
      ABoxAssertion{property_atom(names.has_actor, self, Individual{record.actor}), record.occurred_at},
  };
}

bool actor_is_agent(const Entailment& entailment, const ActionRecord& record, const UpperOntology& names) {
  return entailment.holds(class_atom(names.agent, Individual{record.actor}));
}

bool ActionPattern::matches(const ActionRecord& record) const {
  if (atom.predicate != record.action_kind) return false;
  if (const auto* who = std::get_if<Individual>(&atom.subject()); who && who->name != record.actor)
    return false;
  return !target || target == record.target;
}

const char* to_string(Polarity polarity) noexcept {
  return polarity == Polarity::TEPos ? "TEPos" : "TENeg";
}

const char* to_string(PropositionState state) noexcept {
  switch (state) {
    case PropositionState::Pending: return "Pending";
    case PropositionState::Fulfilled: return "Fulfilled";
    case PropositionState::Violated: return "Violated";
  }
  return "?";
}

TemporalProposition step_proposition(const TemporalProposition& prop,
                                     const std::vector<ActionRecord>& log, Time now) {
  const bool sorted = std::is_sorted(log.begin(), log.end(), [](const auto& a, const auto& b) {
    return a.occurred_at < b.occurred_at;
  });
  if (!sorted) throw UnsortedLog("action log is not ordered by occurrence time");
  if (prop.evaluated_at && now < *prop.evaluated_at)
    throw PreconditionFailed("proposition " + prop.prop_id + " evaluated backwards in time");

  TemporalProposition next = prop;
  next.evaluated_at = now;
  if (prop.state != PropositionState::Pending) return next;

  const Time horizon = std::min(now, prop.interval.end);
  const bool hit = std::any_of(log.begin(), log.end(), [&](const ActionRecord& r) {
    return prop.interval.start <= r.occurred_at && r.occurred_at <= horizon && prop.pattern.matches(r);
  });
  const bool positive = prop.polarity == Polarity::TEPos;
  if (hit) {
    next.state = positive ? PropositionState::Fulfilled : PropositionState::Violated;
  } else if (now > prop.interval.end) {
    next.state = positive ? PropositionState::Violated : PropositionState::Fulfilled;
  }
  return next;
}

std::vector<Violation> validate_upper_ontology(const KnowledgeBase& kb, const UpperOntology& n) {
  const auto& tbox = kb.tbox();
  std::vector<std::string> missing;
  if (!tbox.contains(TBoxAxiom{SubClassOf{n.action, n.event}}))
    missing.push_back(n.action.str() + "⊆" + n.event.str());
  if (!tbox.contains(TBoxAxiom{DisjointClasses{n.event, n.agent}}) &&
      !tbox.contains(TBoxAxiom{DisjointClasses{n.agent, n.event}}))
    missing.push_back(n.event.str() + "⊥" + n.agent.str());
  const bool has_union = std::any_of(tbox.begin(), tbox.end(), [&](const TBoxAxiom& axiom) {
    const auto* u = std::get_if<UnionEquivalence>(&axiom);
    if (!u || u->whole != n.temporal_entity) return false;
    std::set<EntityName> parts(u->parts.begin(), u->parts.end());
    return parts == std::set<EntityName>{n.instant, n.interval};
  });
  if (!has_union)
    missing.push_back(n.temporal_entity.str() + "≡" + n.instant.str() + "⊔" + n.interval.str());
  if (!missing.empty()) throw MissingAxiom(std::move(missing));
  return check_disjointness(kb);
}

}  // namespace ontoflux
