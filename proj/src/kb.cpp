#include "ontoflux/kb.hpp"

#include <algorithm>
#include <optional>

#include "ontoflux/error.hpp"

namespace ontoflux {

ParseError::ParseError(int line, int column, std::vector<std::string> expected,
                       const std::string& message)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace

MissingAxiom::MissingAxiom(std::vector<std::string> missing)
    : Error("missing axiom(s): " + join(missing, ", ")), missing_(std::move(missing)) {}

bool is_identifier(std::string_view token) noexcept {
  if (token.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(token.front())) return false;
  return std::all_of(token.begin() + 1, token.end(), [&](char c) { return alpha(c) || digit(c); });
}

EntityName EntityName::make(std::string ns, std::string local) {
  if (!is_identifier(local)) throw MalformedItem("invalid entity token '" + local + "'");
  if (!ns.empty() && !is_identifier(ns)) throw MalformedItem("invalid namespace '" + ns + "'");
  return EntityName{std::move(ns), std::move(local)};
}

bool Atom::ground() const noexcept {
  return std::none_of(args.begin(), args.end(), [](const Term& t) { return is_variable(t); });
}

std::vector<std::string> Atom::variables() const {
  std::vector<std::string> out;
  for (const auto& t : args) {
    if (const auto* v = std::get_if<Variable>(&t)) {
      if (std::find(out.begin(), out.end(), v->token) == out.end()) out.push_back(v->token);
    }
  }
  return out;
}

Atom class_atom(EntityName concept_name, Term subject) {
  return Atom{AtomKind::Class, std::move(concept_name), {std::move(subject)}};
}

Atom property_atom(EntityName property, Term subject, Term object) {
  return Atom{AtomKind::Property, std::move(property), {std::move(subject), std::move(object)}};
}

Term individual(std::string ns, std::string local) {
  return Individual{EntityName::make(std::move(ns), std::move(local))};
}

Term variable(std::string token) {
  if (!is_identifier(token)) throw MalformedItem("invalid variable token '" + token + "'");
  return Variable{std::move(token)};
}

std::string to_string(const Term& term) {
  if (const auto* v = std::get_if<Variable>(&term)) return "?" + v->token;
  return std::get<Individual>(term).name.str();
}

std::string to_string(const Atom& atom) {
  std::string out = atom.predicate.str() + "(";
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i) out += ", ";
    out += to_string(atom.args[i]);
  }
  return out + ")";
}

std::string to_string(const TBoxAxiom& axiom) {
  struct Visitor {
    std::string operator()(const ClassDeclaration& a) const { return "class " + a.name.str(); }
    std::string operator()(const PropertyDeclaration& a) const { return "property " + a.name.str(); }
    std::string operator()(const SubClassOf& a) const { return a.sub.str() + " ⊆ " + a.super.str(); }
    std::string operator()(const DisjointClasses& a) const {
      return a.a.str() + " ⊥ " + a.b.str();
    }
    std::string operator()(const UnionEquivalence& a) const {
      std::vector<std::string> parts;
      for (const auto& p : a.parts) parts.push_back(p.str());
      return a.whole.str() + " ≡ " + join(parts, " ⊔ ");
    }
    std::string operator()(const PropertyDomain& a) const {
      return "domain(" + a.property.str() + ") = " + a.cls.str();
    }
    std::string operator()(const PropertyRange& a) const {
      return "range(" + a.property.str() + ") = " + a.cls.str();
    }
    std::string operator()(const AllValuesFrom& a) const {
      return a.cls.str() + " ⊆ ∀" + a.property.str() + "." + a.filler.str();
    }
  };
  return std::visit(Visitor{}, axiom);
}

bool unify(const Atom& pattern, const Atom& fact, Binding& binding) {
  if (pattern.kind != fact.kind || pattern.predicate != fact.predicate) return false;
  if (pattern.args.size() != fact.args.size()) return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    const EntityName& value = std::get<Individual>(fact.args[i]).name;
    if (const auto* v = std::get_if<Variable>(&pattern.args[i])) {
      auto [it, inserted] = binding.emplace(v->token, value);
      if (!inserted && it->second != value) return false;
    } else if (std::get<Individual>(pattern.args[i]).name != value) {
      return false;
    }
  }
  return true;
}

Atom instantiate(const Atom& pattern, const Binding& binding) {
  Atom out = pattern;
  for (auto& t : out.args) {
    if (const auto* v = std::get_if<Variable>(&t)) {
      if (auto it = binding.find(v->token); it != binding.end()) t = Individual{it->second};
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void check_atom_shape(const Atom& atom) {
  const std::size_t want = atom.kind == AtomKind::Class ? 1 : 2;
  if (atom.args.size() != want) throw MalformedItem("atom arity mismatch: " + to_string(atom));
  if (!is_identifier(atom.predicate.local)) throw MalformedItem("invalid predicate in atom");
}

void validate(const TBoxAxiom& axiom) {
  if (const auto* u = std::get_if<UnionEquivalence>(&axiom)) {
    std::set<EntityName> distinct(u->parts.begin(), u->parts.end());
    if (distinct.size() < 2 || distinct.size() != u->parts.size())
      throw MalformedItem("union needs at least two distinct parts: " + to_string(axiom));
  }
  if (const auto* d = std::get_if<DisjointClasses>(&axiom)) {
    if (d->a == d->b) throw MalformedItem("disjointness of a class with itself: " + d->a.str());
  }
}

void add_class_names(const Atom& atom, std::set<EntityName>& out) {
  if (atom.kind == AtomKind::Class) out.insert(atom.predicate);
}

}  // namespace

KnowledgeBase assert_item(const KnowledgeBase& kb, const TBoxAxiom& axiom) {
  validate(axiom);
  KnowledgeBase next = kb;
  next.tbox_.insert(axiom);
  return next;
}

KnowledgeBase assert_item(const KnowledgeBase& kb, const ABoxAssertion& assertion) {
  check_atom_shape(assertion.atom);
  if (!assertion.atom.ground()) throw MalformedItem("A-Box atom is not ground: " + to_string(assertion.atom));
  if (!(assertion.asserted_at >= 0.0)) throw MalformedItem("negative assertion time");
  KnowledgeBase next = kb;
  auto [it, inserted] = next.abox_.emplace(assertion.atom, assertion.asserted_at);
  if (!inserted) it->second = std::min(it->second, assertion.asserted_at);
  return next;
}

KnowledgeBase assert_item(const KnowledgeBase& kb, const HornRule& rule) {
  if (rule.body.empty()) throw MalformedItem("rule '" + rule.rule_id + "' has an empty body");
  check_atom_shape(rule.head);
  std::set<std::string> bound;
  for (const auto& atom : rule.body) {
    check_atom_shape(atom);
    for (auto& v : atom.variables()) bound.insert(v);
  }
  for (const auto& v : rule.head.variables()) {
    if (!bound.contains(v))
      throw MalformedItem("unsafe rule '" + rule.rule_id + "': head variable ?" + v + " not bound in body");
  }
  KnowledgeBase next = kb;
  next.rbox_.insert(rule);
  return next;
}

KnowledgeBase close_class(const KnowledgeBase& kb, const EntityName& concept_name, Time now) {
  if (auto it = kb.closures_.find(concept_name); it != kb.closures_.end() && now < it->second.closed_at)
    throw PreconditionFailed("closing " + concept_name.str() + " earlier than its previous closure");
  if (!kb.mentions_class(concept_name))
    throw MalformedItem("cannot close unmentioned concept " + concept_name.str());
  KnowledgeBase next = kb;
  next.closures_[concept_name] = ClosureRecord{concept_name, entailed_members(kb, concept_name), now};
  return next;
}

std::vector<ABoxAssertion> KnowledgeBase::assertions() const {
  std::vector<ABoxAssertion> out;
  out.reserve(abox_.size());
  for (const auto& [atom, at] : abox_) out.push_back(ABoxAssertion{atom, at});
  return out;
}

bool KnowledgeBase::mentions_class(const EntityName& name) const {
  std::set<EntityName> names;
  for (const auto& axiom : tbox_) {
    std::visit(
        [&](const auto& a) {
          using A = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<A, ClassDeclaration>) names.insert(a.name);
          if constexpr (std::is_same_v<A, SubClassOf>) names.insert({a.sub, a.super});
          if constexpr (std::is_same_v<A, DisjointClasses>) names.insert({a.a, a.b});
          if constexpr (std::is_same_v<A, UnionEquivalence>) {
            names.insert(a.whole);
            names.insert(a.parts.begin(), a.parts.end());
          }
          if constexpr (std::is_same_v<A, PropertyDomain> || std::is_same_v<A, PropertyRange>)
            names.insert(a.cls);
          if constexpr (std::is_same_v<A, AllValuesFrom>) names.insert({a.cls, a.filler});
        },
        axiom);
  }
  for (const auto& [atom, at] : abox_) add_class_names(atom, names);
  for (const auto& rule : rbox_) {
    add_class_names(rule.head, names);
    for (const auto& atom : rule.body) add_class_names(atom, names);
  }
  return names.contains(name);
}

bool KnowledgeBase::same_content(const KnowledgeBase& other) const {
  return ns_ == other.ns_ && tbox_ == other.tbox_ && abox_ == other.abox_ && rbox_ == other.rbox_;
}

// ---------------------------------------------------------------------------

bool FactIndex::insert(const Atom& atom) {
  if (!all_.insert(atom).second) return false;
  by_predicate_[{atom.kind, atom.predicate}].push_back(atom);
  return true;
}

const std::vector<Atom>& FactIndex::with_predicate(AtomKind kind, const EntityName& predicate) const {
  static const std::vector<Atom> empty;
  auto it = by_predicate_.find({kind, predicate});
  return it == by_predicate_.end() ? empty : it->second;
}

namespace {

void join_rest(const HornRule& rule, std::size_t skip, std::size_t pos, Binding& binding,
               std::vector<Atom>& premises, const FactIndex& facts, const RuleEngine::Sink& sink) {
  if (pos == rule.body.size()) {
    sink(instantiate(rule.head, binding), premises);
    return;
  }
  if (pos == skip) {
    join_rest(rule, skip, pos + 1, binding, premises, facts, sink);
    return;
  }
  const Atom& pattern = rule.body[pos];
  for (const Atom& fact : facts.with_predicate(pattern.kind, pattern.predicate)) {
    Binding extended = binding;
    if (!unify(pattern, fact, extended)) continue;
    premises[pos] = fact;
    join_rest(rule, skip, pos + 1, extended, premises, facts, sink);
  }
}

}  // namespace

RuleEngine::RuleEngine(const KnowledgeBase& kb) {
  for (const auto& axiom : kb.tbox()) {
    if (const auto* s = std::get_if<SubClassOf>(&axiom)) class_to_super_.emplace(s->sub, s->super);
    if (const auto* u = std::get_if<UnionEquivalence>(&axiom)) {
      for (const auto& part : u->parts) class_to_super_.emplace(part, u->whole);
    }
    if (const auto* d = std::get_if<PropertyDomain>(&axiom)) domain_.emplace(d->property, d->cls);
    if (const auto* r = std::get_if<PropertyRange>(&axiom)) range_.emplace(r->property, r->cls);
  }
  rules_.assign(kb.rbox().begin(), kb.rbox().end());
}

void RuleEngine::derive(const Atom& trigger, const FactIndex& facts, const Sink& sink) const {
  const std::span<const Atom> single(&trigger, 1);
  if (trigger.kind == AtomKind::Class) {
    auto [lo, hi] = class_to_super_.equal_range(trigger.predicate);
    for (auto it = lo; it != hi; ++it) sink(class_atom(it->second, trigger.subject()), single);
  } else {
    auto [dlo, dhi] = domain_.equal_range(trigger.predicate);
    for (auto it = dlo; it != dhi; ++it) sink(class_atom(it->second, trigger.subject()), single);
    auto [rlo, rhi] = range_.equal_range(trigger.predicate);
    for (auto it = rlo; it != rhi; ++it) sink(class_atom(it->second, trigger.object()), single);
  }
  for (const auto& rule : rules_) {
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
      Binding binding;
      if (!unify(rule.body[i], trigger, binding)) continue;
      std::vector<Atom> premises(rule.body.size());
      premises[i] = trigger;
      join_rest(rule, i, 0, binding, premises, facts, sink);
    }
  }
}

Entailment::Entailment(const KnowledgeBase& kb) {
  const RuleEngine engine(kb);
  std::vector<Atom> worklist;
  for (const auto& [atom, at] : kb.abox()) {
    if (index_.insert(atom)) {
      ++insertions_;
      worklist.push_back(atom);
    }
  }
  while (!worklist.empty()) {
    Atom trigger = std::move(worklist.back());
    worklist.pop_back();
    std::vector<Atom> fresh;
    engine.derive(trigger, index_, [&](const Atom& head, std::span<const Atom>) {
      if (!index_.contains(head)) fresh.push_back(head);
    });
    for (auto& atom : fresh) {
      if (index_.insert(atom)) {
        ++insertions_;
        worklist.push_back(std::move(atom));
      }
    }
  }
}

std::set<EntityName> Entailment::members(const EntityName& concept_name) const {
  std::set<EntityName> out;
  for (const auto& atom : index_.with_predicate(AtomKind::Class, concept_name))
    out.insert(std::get<Individual>(atom.subject()).name);
  return out;
}

std::set<EntityName> entailed_members(const KnowledgeBase& kb, const EntityName& concept_name) {
  return Entailment(kb).members(concept_name);
}

std::vector<Violation> check_disjointness(const KnowledgeBase& kb) {
  const Entailment entailment(kb);
  std::vector<Violation> out;
  for (const auto& axiom : kb.tbox()) {
    const auto* d = std::get_if<DisjointClasses>(&axiom);
    if (!d) continue;
    const auto left = entailment.members(d->a);
    for (const auto& x : entailment.members(d->b)) {
      if (left.contains(x)) out.push_back(Violation{x, d->a.str() + " ⊥ " + d->b.str()});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Violation> check_all_values_from(const KnowledgeBase& kb) {
  const Entailment entailment(kb);
  std::vector<Violation> out;
  for (const auto& axiom : kb.tbox()) {
    const auto* avf = std::get_if<AllValuesFrom>(&axiom);
    if (!avf) continue;
    const auto subjects = entailment.members(avf->cls);
    for (const auto& fact : entailment.facts()) {
      if (fact.kind != AtomKind::Property || fact.predicate != avf->property) continue;
      const auto& x = std::get<Individual>(fact.subject()).name;
      const auto& y = std::get<Individual>(fact.object()).name;
      if (subjects.contains(x) && is_member(kb, entailment, y, avf->filler) == Truth::False)
        out.push_back(Violation{y, to_string(TBoxAxiom{*avf})});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Truth is_member(const KnowledgeBase& kb, const Entailment& entailment,
                const EntityName& individual_name, const EntityName& concept_name) {
  if (entailment.holds(class_atom(concept_name, Individual{individual_name}))) return Truth::True;
  auto it = kb.closures().find(concept_name);
  if (it != kb.closures().end() && !it->second.members.contains(individual_name)) return Truth::False;
  return Truth::Unknown;
}

Truth is_member(const KnowledgeBase& kb, const EntityName& individual_name,
                const EntityName& concept_name) {
  return is_member(kb, Entailment(kb), individual_name, concept_name);
}

}  // namespace ontoflux
