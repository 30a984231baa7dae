#pragma once

// Shared test helpers: fixture paths, a small random generator and
// independent reference implementations used as oracles.

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ontoflux/io.hpp"
#include "ontoflux/kb.hpp"
#include "ontoflux/prob_merge.hpp"
#include "ontoflux/temporal.hpp"

namespace testing {

using namespace ontoflux;

inline std::string fixture(const std::string& name) { return std::string(ONTOFLUX_FIXTURE_DIR) + "/" + name; }

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int range(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(range(0, static_cast<int>(xs.size()) - 1))];
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

struct Vocabulary {
  std::string ns = "G";
  std::vector<EntityName> classes;
  std::vector<EntityName> properties;
  std::vector<EntityName> individuals;
};

inline Vocabulary vocabulary(int n_classes = 5, int n_properties = 2, int n_individuals = 4) {
  Vocabulary v;
  for (int i = 0; i < n_classes; ++i) v.classes.push_back({v.ns, "C" + std::to_string(i)});
  for (int i = 0; i < n_properties; ++i) v.properties.push_back({v.ns, "p" + std::to_string(i)});
  // Mixed case so serialization has to keep lowercase individuals apart from variables.
  for (int i = 0; i < n_individuals; ++i)
    v.individuals.push_back({v.ns, (i % 2 ? "Ind" : "ind") + std::to_string(i)});
  v.individuals.push_back({"H", "Foreign"});
  return v;
}

inline Atom random_ground_atom(Gen& g, const Vocabulary& v) {
  if (g.coin(0.6)) return class_atom(g.pick(v.classes), Individual{g.pick(v.individuals)});
  return property_atom(g.pick(v.properties), Individual{g.pick(v.individuals)}, Individual{g.pick(v.individuals)});
}

inline HornRule random_rule(Gen& g, const Vocabulary& v, int id) {
  const std::vector<std::string> vars = {"x", "y"};
  auto term = [&]() -> Term {
    if (g.coin(0.85)) return Variable{g.pick(vars)};
    return Individual{g.pick(v.individuals)};
  };
  auto atom = [&]() {
    if (g.coin(0.5)) return class_atom(g.pick(v.classes), term());
    return property_atom(g.pick(v.properties), term(), term());
  };
  HornRule rule;
  rule.rule_id = "r" + std::to_string(id);
  const int n = g.range(1, 2);
  for (int i = 0; i < n; ++i) rule.body.push_back(atom());
  std::set<std::string> bound;
  for (const auto& a : rule.body)
    for (const auto& var : a.variables()) bound.insert(var);
  // Head variables drawn from the body keep the rule safe.
  auto head_term = [&]() -> Term {
    if (!bound.empty() && g.coin(0.85)) {
      std::vector<std::string> b(bound.begin(), bound.end());
      return Variable{g.pick(b)};
    }
    return Individual{g.pick(v.individuals)};
  };
  rule.head = g.coin(0.5) ? class_atom(g.pick(v.classes), head_term())
                          : property_atom(g.pick(v.properties), head_term(), head_term());
  return rule;
}

inline TBoxAxiom random_axiom(Gen& g, const Vocabulary& v) {
  auto two = [&] {
    EntityName a = g.pick(v.classes), b = g.pick(v.classes);
    while (b == a) b = g.pick(v.classes);
    return std::make_pair(a, b);
  };
  switch (g.range(0, 5)) {
    case 0:
    case 1: {
      auto [a, b] = two();
      return SubClassOf{a, b};
    }
    case 2: {
      auto [a, b] = two();
      return DisjointClasses{a, b};
    }
    case 3: {
      auto [a, b] = two();
      EntityName whole = g.pick(v.classes);
      return UnionEquivalence{whole, {a, b}};
    }
    case 4:
      return g.coin() ? TBoxAxiom{PropertyDomain{g.pick(v.properties), g.pick(v.classes)}}
                      : TBoxAxiom{PropertyRange{g.pick(v.properties), g.pick(v.classes)}};
    default:
      return AllValuesFrom{g.pick(v.classes), g.pick(v.properties), g.pick(v.classes)};
  }
}

/// Adds declarations for names used in the A-Box or R-Box but absent from the
/// T-Box, so the KB is expressible as a self-contained document.
inline KnowledgeBase declare_used_names(KnowledgeBase kb) {
  std::set<EntityName> mentioned;
  for (const auto& axiom : kb.tbox()) {
    std::visit(
        [&](const auto& a) {
          using A = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<A, ClassDeclaration> || std::is_same_v<A, PropertyDeclaration>)
            mentioned.insert(a.name);
          if constexpr (std::is_same_v<A, SubClassOf>) mentioned.insert({a.sub, a.super});
          if constexpr (std::is_same_v<A, DisjointClasses>) mentioned.insert({a.a, a.b});
          if constexpr (std::is_same_v<A, UnionEquivalence>) {
            mentioned.insert(a.whole);
            mentioned.insert(a.parts.begin(), a.parts.end());
          }
          if constexpr (std::is_same_v<A, PropertyDomain> || std::is_same_v<A, PropertyRange>)
            mentioned.insert({a.property, a.cls});
          if constexpr (std::is_same_v<A, AllValuesFrom>) mentioned.insert({a.cls, a.property, a.filler});
        },
        axiom);
  }
  std::vector<Atom> atoms;
  for (const auto& [atom, at] : kb.abox()) atoms.push_back(atom);
  for (const auto& rule : kb.rbox()) {
    atoms.insert(atoms.end(), rule.body.begin(), rule.body.end());
    atoms.push_back(rule.head);
  }
  for (const auto& atom : atoms) {
    if (mentioned.contains(atom.predicate)) continue;
    mentioned.insert(atom.predicate);
    if (atom.kind == AtomKind::Class) kb = assert_item(kb, ClassDeclaration{atom.predicate});
    else kb = assert_item(kb, PropertyDeclaration{atom.predicate});
  }
  return kb;
}

struct KbShape {
  int axioms = 4;
  int assertions = 6;
  int rules = 2;
};

inline KnowledgeBase random_kb(Gen& g, const Vocabulary& v, KbShape shape = {}) {
  KnowledgeBase kb(v.ns);
  const int n_axioms = g.range(0, shape.axioms);
  for (int i = 0; i < n_axioms; ++i) kb = assert_item(kb, random_axiom(g, v));
  const int n_facts = g.range(0, shape.assertions);
  for (int i = 0; i < n_facts; ++i) {
    // Times on a quarter grid plus the occasional awkward binary fraction.
    const double at = g.coin(0.8) ? g.range(0, 40) / 4.0 : g.unit() * 10.0;
    kb = assert_item(kb, ABoxAssertion{random_ground_atom(g, v), at});
  }
  const int n_rules = g.range(0, shape.rules);
  for (int i = 0; i < n_rules; ++i) kb = assert_item(kb, random_rule(g, v, i));
  return kb;
}

// ---------------------------------------------------------------------------
// Brute-force fixpoint: applies every axiom form and grounds every rule over
// the full individual domain until nothing changes.

inline std::set<Atom> naive_fixpoint(const KnowledgeBase& kb) {
  std::set<Atom> facts;
  for (const auto& [atom, at] : kb.abox()) facts.insert(atom);

  auto individuals = [&facts, &kb] {
    std::set<EntityName> out;
    for (const auto& f : facts)
      for (const auto& t : f.args) out.insert(std::get<Individual>(t).name);
    for (const auto& rule : kb.rbox()) {
      for (const auto& a : rule.body)
        for (const auto& t : a.args)
          if (!is_variable(t)) out.insert(std::get<Individual>(t).name);
    }
    return std::vector<EntityName>(out.begin(), out.end());
  };

  for (bool changed = true; changed;) {
    changed = false;
    std::set<Atom> next = facts;
    for (const auto& f : facts) {
      for (const auto& axiom : kb.tbox()) {
        if (const auto* s = std::get_if<SubClassOf>(&axiom); s && f.kind == AtomKind::Class && f.predicate == s->sub)
          next.insert(class_atom(s->super, f.subject()));
        if (const auto* u = std::get_if<UnionEquivalence>(&axiom); u && f.kind == AtomKind::Class) {
          if (std::find(u->parts.begin(), u->parts.end(), f.predicate) != u->parts.end())
            next.insert(class_atom(u->whole, f.subject()));
        }
        if (const auto* d = std::get_if<PropertyDomain>(&axiom);
            d && f.kind == AtomKind::Property && f.predicate == d->property)
          next.insert(class_atom(d->cls, f.subject()));
        if (const auto* r = std::get_if<PropertyRange>(&axiom);
            r && f.kind == AtomKind::Property && f.predicate == r->property)
          next.insert(class_atom(r->cls, f.object()));
      }
    }
    const auto domain = individuals();
    for (const auto& rule : kb.rbox()) {
      std::set<std::string> vars;
      for (const auto& a : rule.body)
        for (const auto& x : a.variables()) vars.insert(x);
      std::vector<std::string> order(vars.begin(), vars.end());
      std::vector<std::size_t> idx(order.size(), 0);
      if (domain.empty() && !order.empty()) continue;
      for (;;) {
        Binding b;
        for (std::size_t i = 0; i < order.size(); ++i) b[order[i]] = domain[idx[i]];
        bool all = true;
        for (const auto& a : rule.body) all = all && facts.contains(instantiate(a, b));
        if (all) next.insert(instantiate(rule.head, b));
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == domain.size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
    if (next.size() != facts.size()) {
      facts = std::move(next);
      changed = true;
    }
  }
  return facts;
}

}  // namespace testing

// ---------------------------------------------------------------------------
// Temporal propositions: generated logs and a direct reading of the
// transition rules.

namespace testing {

struct TemporalWorld {
  UpperOntology names = UpperOntology::in("O1");
  EntityName other_kind = EntityName{"O1", "ReviewAction"};
  std::vector<EntityName> actors = {EntityName{"O1", "Bot"}, EntityName{"O1", "Curator"}};
  std::vector<std::pair<std::string, std::string>> targets = {{"O2", "O1"}, {"O1", "O2"}};
};

/// Times on a quarter grid in [0, 10]: exact in binary floating point.
inline Time grid_time(Gen& g) { return g.range(0, 40) / 4.0; }

inline std::vector<ActionRecord> random_log(Gen& g, const TemporalWorld& w, int max_len = 6) {
  std::vector<ActionRecord> log;
  const int n = g.range(0, max_len);
  for (int i = 0; i < n; ++i) {
    ActionRecord r;
    r.action_id = "a" + std::to_string(i);
    r.actor = g.pick(w.actors);
    r.action_kind = g.coin(0.75) ? w.names.merge_action : w.other_kind;
    r.occurred_at = grid_time(g);
    if (g.coin(0.5)) r.target = g.pick(w.targets);
    log.push_back(r);
  }
  std::stable_sort(log.begin(), log.end(),
                   [](const ActionRecord& a, const ActionRecord& b) { return a.occurred_at < b.occurred_at; });
  return log;
}

inline TemporalProposition random_proposition(Gen& g, const TemporalWorld& w, Polarity polarity) {
  TemporalProposition p;
  p.prop_id = "p";
  p.polarity = polarity;
  Time a = grid_time(g), b = grid_time(g);
  if (a > b) std::swap(a, b);
  p.interval = Interval::make(a, b);
  const Term actor = g.coin(0.5) ? Term{Variable{"a"}} : Term{Individual{g.pick(w.actors)}};
  p.pattern.atom = class_atom(g.coin(0.85) ? w.names.merge_action : w.other_kind, actor);
  if (g.coin(0.3)) p.pattern.target = g.pick(w.targets);
  return p;
}

/// State after a single evaluation at `now`, read straight off the rules.
inline PropositionState expected_state(const TemporalProposition& p, const std::vector<ActionRecord>& log, Time now) {
  bool hit = false;
  for (const auto& r : log) {
    const bool kind = r.action_kind == p.pattern.atom.predicate;
    const auto* who = std::get_if<Individual>(&p.pattern.atom.args[0]);
    const bool actor = !who || who->name == r.actor;
    const bool target = !p.pattern.target || p.pattern.target == r.target;
    const bool inside = p.interval.start <= r.occurred_at && r.occurred_at <= p.interval.end && r.occurred_at <= now;
    hit = hit || (kind && actor && target && inside);
  }
  const bool pos = p.polarity == Polarity::TEPos;
  if (hit) return pos ? PropositionState::Fulfilled : PropositionState::Violated;
  if (now > p.interval.end) return pos ? PropositionState::Violated : PropositionState::Fulfilled;
  return PropositionState::Pending;
}

// ---------------------------------------------------------------------------

/// Possible-worlds oracle. Each mapping holds independently; in a world the
/// local KB is extended with every target instantiated from the external
/// A-Box by a holding mapping and then saturated. Returns every binding that
/// holds when all mappings hold, with its total world weight.
inline std::map<Binding, double> world_oracle(const KnowledgeBase& local, const KnowledgeBase& external,
                                              const std::vector<Mapping>& mappings,
                                              const std::vector<Atom>& conjuncts) {
  const std::size_t n = mappings.size();
  std::vector<Entailment> worlds;
  std::vector<double> weights;
  for (unsigned w = 0; w < (1u << n); ++w) {
    KnowledgeBase kb = local;
    double weight = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool holds = w & (1u << i);
      weight *= holds ? mappings[i].probability : 1.0 - mappings[i].probability;
      if (!holds) continue;
      for (const auto& [fact, at] : external.abox()) {
        Binding b;
        if (unify(mappings[i].source, fact, b))
          kb = assert_item(kb, ABoxAssertion{instantiate(mappings[i].target, b), 0.0});
      }
    }
    worlds.emplace_back(kb);
    weights.push_back(weight);
  }

  // Candidate bindings come from the world where everything holds.
  const Entailment& full = worlds.back();
  std::vector<Binding> bindings{Binding{}};
  for (const auto& c : conjuncts) {
    std::vector<Binding> next;
    for (const auto& b : bindings)
      for (const auto& fact : full.facts()) {
        Binding e = b;
        if (unify(c, fact, e)) next.push_back(e);
      }
    bindings = std::move(next);
  }

  std::map<Binding, double> out;
  for (const auto& b : bindings) {
    if (out.contains(b)) continue;
    double p = 0.0;
    for (std::size_t w = 0; w < worlds.size(); ++w) {
      const bool all = std::all_of(conjuncts.begin(), conjuncts.end(),
                                   [&](const Atom& c) { return worlds[w].holds(instantiate(c, b)); });
      if (all) p += weights[w];
    }
    out[b] = p;
  }
  return out;
}

}  // namespace testing
