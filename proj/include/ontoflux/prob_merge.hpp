#pragma once

// Probabilistic mappings between a local and an external ontology, merge with
// provenance tracking, and scored conjunctive queries.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ontoflux/kb.hpp"

namespace ontoflux {

/// target ← source with probability P.
struct Mapping {
  std::string mapping_id;
  Atom target;
  Atom source;
  double probability = 1.0;
  /// P(target | ¬source). Parsed and stored, not used in scoring.
  std::optional<double> probability_given_absent;

  /// Checks the invariants; throws MalformedItem or OutOfRange.
  static Mapping make(std::string id, Atom target, Atom source, double probability,
                      std::optional<double> probability_given_absent = std::nullopt);

  bool operator==(const Mapping&) const = default;
};

/// Mapping ids that must all hold for one derivation of a fact.
using MappingPath = std::set<std::string>;

struct DerivedFact {
  Atom atom;
  double probability = 0.0;
  /// Minimal derivation paths; an empty path means the fact is local.
  std::vector<MappingPath> paths;

  bool is_local() const;
  /// Every mapping id used by some path, sorted.
  std::vector<std::string> mapping_ids() const;
  bool operator==(const DerivedFact&) const = default;
};

struct MergedKB {
  KnowledgeBase local;
  KnowledgeBase external;
  std::vector<Mapping> mappings;
  std::map<Atom, DerivedFact> derived;

  const DerivedFact* find(const Atom& atom) const;
  double mapping_probability(const std::string& id) const;
  bool operator==(const MergedKB&) const = default;
};

/// 1 − p. Throws OutOfRange outside [0, 1].
double complement(double p);

/// 1 − Π(1 − p_i). Throws EmptyList / OutOfRange.
double combine_noisy_or(std::span<const double> ps);

/// Probability of one fact from its paths: noisy-OR over paths of the minimum
/// mapping probability along each path.
double path_probability(const std::vector<MappingPath>& paths,
                        const std::map<std::string, double>& mapping_probability);

/// Throws NamespaceClash if a mapping target is outside the local namespace.
MergedKB merge(const KnowledgeBase& local, const KnowledgeBase& external, std::vector<Mapping> mappings);

struct QueryAnswer {
  std::vector<std::pair<std::string, EntityName>> binding;  // variable -> individual
  double probability = 0.0;
  /// Set when shared provenance was too large to enumerate exactly.
  bool approximate = false;
};

inline constexpr std::size_t kExactEnumerationLimit = 16;

/// Bindings satisfying every conjunct, by descending probability then binding.
/// Throws UnsafeQuery on an empty or malformed conjunction.
std::vector<QueryAnswer> query(const MergedKB& merged, const std::vector<Atom>& conjuncts);

}  // namespace ontoflux
