#include "ontoflux/prob_merge.hpp"

#include <algorithm>
#include <cmath>

#include "ontoflux/error.hpp"

namespace ontoflux {

namespace {

void require_probability(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0)) throw OutOfRange(what + " outside [0, 1]");
}

std::set<std::string> variable_set(const Atom& atom) {
  auto vars = atom.variables();
  return {vars.begin(), vars.end()};
}

bool is_subset(const MappingPath& a, const MappingPath& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Adds `path` to an antichain of minimal paths; returns true if it changed.
bool add_minimal(std::vector<MappingPath>& paths, const MappingPath& path) {
  for (const auto& p : paths) {
    if (is_subset(p, path)) return false;
  }
  std::erase_if(paths, [&](const MappingPath& p) { return is_subset(path, p); });
  paths.insert(std::upper_bound(paths.begin(), paths.end(), path), path);
  return true;
}

}  // namespace

Mapping Mapping::make(std::string id, Atom target, Atom source, double probability,
                      std::optional<double> probability_given_absent) {
  if (!is_identifier(id)) throw MalformedItem("invalid mapping id '" + id + "'");
  require_probability(probability, "mapping probability");
  if (probability_given_absent) require_probability(*probability_given_absent, "mapping probability");
  if (variable_set(target) != variable_set(source))
    throw MalformedItem("mapping " + id + ": source and target variables differ");
  if (target.predicate.ns == source.predicate.ns)
    throw MalformedItem("mapping " + id + ": source and target share namespace " + target.predicate.ns);
  return Mapping{std::move(id), std::move(target), std::move(source), probability, probability_given_absent};
}

bool DerivedFact::is_local() const {
  return std::any_of(paths.begin(), paths.end(), [](const MappingPath& p) { return p.empty(); });
}

std::vector<std::string> DerivedFact::mapping_ids() const {
  std::set<std::string> ids;
  for (const auto& p : paths) ids.insert(p.begin(), p.end());
  return {ids.begin(), ids.end()};
}

const DerivedFact* MergedKB::find(const Atom& atom) const {
  auto it = derived.find(atom);
  return it == derived.end() ? nullptr : &it->second;
}

double MergedKB::mapping_probability(const std::string& id) const {
  for (const auto& m : mappings) {
    if (m.mapping_id == id) return m.probability;
  }
  throw MalformedItem("unknown mapping id " + id);
}

double complement(double p) {
  require_probability(p, "probability");
  return 1.0 - p;
}

double combine_noisy_or(std::span<const double> ps) {
  if (ps.empty()) throw EmptyList("noisy-OR of no probabilities");
  double miss = 1.0;
  for (double p : ps) {
    require_probability(p, "probability");
    miss *= 1.0 - p;
  }
  return 1.0 - miss;
}

double path_probability(const std::vector<MappingPath>& paths,
                        const std::map<std::string, double>& mapping_probability) {
  std::vector<double> per_path;
  per_path.reserve(paths.size());
  for (const auto& path : paths) {
    double p = 1.0;
    for (const auto& id : path) p = std::min(p, mapping_probability.at(id));
    per_path.push_back(p);
  }
  return per_path.empty() ? 0.0 : combine_noisy_or(per_path);
}

MergedKB merge(const KnowledgeBase& local, const KnowledgeBase& external, std::vector<Mapping> mappings) {
  std::map<std::string, double> probability_of;
  for (const auto& m : mappings) {
    if (m.target.predicate.ns != local.ns())
      throw NamespaceClash("mapping " + m.mapping_id + " targets namespace '" + m.target.predicate.ns +
                           "' but the local ontology is '" + local.ns() + "'");
    if (!probability_of.emplace(m.mapping_id, m.probability).second)
      throw MalformedItem("duplicate mapping id " + m.mapping_id);
  }

  std::map<Atom, std::vector<MappingPath>> paths;
  FactIndex index;
  std::vector<Atom> worklist;
  auto offer = [&](const Atom& atom, const MappingPath& path) {
    if (!add_minimal(paths[atom], path)) return;
    index.insert(atom);
    worklist.push_back(atom);
  };

  for (const auto& [atom, at] : local.abox()) offer(atom, {});
  for (const auto& m : mappings) {
    for (const auto& [fact, at] : external.abox()) {
      Binding binding;
      if (unify(m.source, fact, binding)) offer(instantiate(m.target, binding), {m.mapping_id});
    }
  }

  // Local T-Box/R-Box chaining; a head's paths are unions across one path per premise.
  const RuleEngine engine(local);
  while (!worklist.empty()) {
    Atom trigger = std::move(worklist.back());
    worklist.pop_back();
    std::vector<std::pair<Atom, MappingPath>> offers;
    engine.derive(trigger, index, [&](const Atom& head, std::span<const Atom> premises) {
      std::vector<MappingPath> combos{MappingPath{}};
      for (const auto& premise : premises) {
        std::vector<MappingPath> next;
        for (const auto& partial : combos) {
          for (const auto& path : paths.at(premise)) {
            MappingPath joined = partial;
            joined.insert(path.begin(), path.end());
            add_minimal(next, joined);
          }
        }
        combos = std::move(next);
      }
      for (auto& c : combos) offers.emplace_back(head, std::move(c));
    });
    for (const auto& [head, path] : offers) offer(head, path);
  }

  MergedKB merged{local, external, std::move(mappings), {}};
  for (auto& [atom, atom_paths] : paths) {
    const double p = path_probability(atom_paths, probability_of);
    merged.derived.emplace(atom, DerivedFact{atom, p, std::move(atom_paths)});
  }
  return merged;
}

namespace {

bool holds_in_world(const DerivedFact& fact, const std::vector<std::string>& ids, unsigned world) {
  for (const auto& path : fact.paths) {
    bool all = true;
    for (const auto& id : path) {
      auto pos = std::lower_bound(ids.begin(), ids.end(), id) - ids.begin();
      if (!(world & (1u << pos))) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

/// P(all facts hold) when every mapping holds independently.
double enumerate_worlds(const MergedKB& merged, const std::vector<const DerivedFact*>& facts,
                        const std::vector<std::string>& ids) {
  double total = 0.0;
  for (unsigned world = 0; world < (1u << ids.size()); ++world) {
    double weight = 1.0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const double p = merged.mapping_probability(ids[i]);
      weight *= (world & (1u << i)) ? p : 1.0 - p;
    }
    if (weight == 0.0) continue;
    const bool all = std::all_of(facts.begin(), facts.end(),
                                 [&](const DerivedFact* f) { return holds_in_world(*f, ids, world); });
    if (all) total += weight;
  }
  return total;
}

void score(const MergedKB& merged, const std::vector<const DerivedFact*>& facts, QueryAnswer& answer) {
  std::vector<const DerivedFact*> uncertain;
  for (const auto* f : facts) {
    if (!f->is_local()) uncertain.push_back(f);
  }
  std::map<std::string, int> uses;
  for (const auto* f : uncertain) {
    for (const auto& id : f->mapping_ids()) ++uses[id];
  }
  const bool shared = std::any_of(uses.begin(), uses.end(), [](const auto& kv) { return kv.second > 1; });
  if (shared && uses.size() <= kExactEnumerationLimit) {
    std::vector<std::string> ids;
    for (const auto& [id, n] : uses) ids.push_back(id);
    answer.probability = enumerate_worlds(merged, uncertain, ids);
    return;
  }
  double p = 1.0;
  for (const auto* f : uncertain) p *= f->probability;
  answer.probability = p;
  answer.approximate = shared;
}

}  // namespace

std::vector<QueryAnswer> query(const MergedKB& merged, const std::vector<Atom>& conjuncts) {
  if (conjuncts.empty()) throw UnsafeQuery("empty conjunctive query");
  std::vector<std::string> order;
  for (const auto& c : conjuncts) {
    if (c.args.size() != (c.kind == AtomKind::Class ? 1u : 2u)) throw UnsafeQuery("malformed conjunct " + to_string(c));
    for (const auto& v : c.variables()) {
      if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
    }
  }

  FactIndex index;
  for (const auto& [atom, fact] : merged.derived) index.insert(atom);

  std::vector<QueryAnswer> answers;
  std::vector<const DerivedFact*> chosen(conjuncts.size());
  auto search = [&](auto&& self, std::size_t pos, const Binding& binding) -> void {
    if (pos == conjuncts.size()) {
      QueryAnswer answer;
      for (const auto& v : order) answer.binding.emplace_back(v, binding.at(v));
      score(merged, chosen, answer);
      answers.push_back(std::move(answer));
      return;
    }
    const Atom& pattern = conjuncts[pos];
    for (const auto& fact : index.with_predicate(pattern.kind, pattern.predicate)) {
      Binding extended = binding;
      if (!unify(pattern, fact, extended)) continue;
      chosen[pos] = merged.find(fact);
      self(self, pos + 1, extended);
    }
  };
  search(search, 0, Binding{});

  auto key = [](const QueryAnswer& a) {
    std::vector<std::string> out;
    for (const auto& [v, name] : a.binding) out.push_back(name.str());
    return out;
  };
  std::sort(answers.begin(), answers.end(), [&](const QueryAnswer& a, const QueryAnswer& b) {
    if (a.probability != b.probability) return a.probability > b.probability;
    return key(a) < key(b);
  });
  answers.erase(std::unique(answers.begin(), answers.end(),
                            [](const QueryAnswer& a, const QueryAnswer& b) { return a.binding == b.binding; }),
                answers.end());
  return answers;
}

}  // namespace ontoflux
