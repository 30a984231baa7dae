#pragma once

// Structural model of fragments F = (E, A, N, G, D) and the theories built from them.

#include <compare>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ontoflux {

struct NodeId {
  std::string token;
  auto operator<=>(const NodeId&) const = default;
  bool operator==(const NodeId&) const = default;
};

/// Conditional table for one agent node. Each row key lists one state per
/// entry of `parents`, in the same order.
struct LocalDistribution {
  NodeId agent_node;
  std::vector<NodeId> parents;
  std::map<std::vector<std::string>, std::vector<double>> rows;

  bool operator==(const LocalDistribution&) const = default;
};

struct Edge {
  NodeId from;
  NodeId to;
  auto operator<=>(const Edge&) const = default;
  bool operator==(const Edge&) const = default;
};

struct MFrag {
  std::string name;
  std::set<NodeId> events;
  std::set<NodeId> actions;
  std::set<NodeId> agents;
  std::set<Edge> graph;
  std::map<NodeId, LocalDistribution> distributions;
  std::map<NodeId, NodeId> action_instance_of;
  std::map<NodeId, std::vector<std::string>> possible_values;
  /// Situation-specific pinned values (node -> state); present only in finding fragments.
  std::map<NodeId, std::string> findings;

  std::set<NodeId> nodes() const;
  bool operator==(const MFrag&) const = default;
};

enum class StructuralErrorKind {
  DisjointnessViolated,
  UnknownNode,
  CycleDetected,
  RootNotInput,
  ActionNotRoot,
  MissingDistribution,
  UnexpectedDistribution,
  ParentMismatch,
  MissingActionInstance,
  UnexpectedActionInstance,
  MissingPossibleValues,
  UnknownState,
  RowArityMismatch,
  ProbabilityOutOfRange,
  RowSumInvalid,
  UncoveredParentCombination,
  DuplicateHome,
};

const char* to_string(StructuralErrorKind kind) noexcept;

struct StructuralError {
  StructuralErrorKind kind;
  std::string subject;  // node, edge or random-variable the error is about
  std::string fragment;

  auto operator<=>(const StructuralError&) const = default;
  bool operator==(const StructuralError&) const = default;
};

std::string to_string(const StructuralError& error);

inline constexpr double kProbabilitySumTolerance = 1e-9;

/// All invariant violations, sorted; empty iff the fragment is valid.
std::vector<StructuralError> validate_mfrag(const MFrag& fragment);

/// Kahn topological order of the fragment graph; empty if the graph has a cycle.
std::vector<NodeId> topological_order(const MFrag& fragment);

struct MTheory {
  std::vector<MFrag> fragments;
  /// Random variable (agent node token) -> index of the fragment defining it.
  std::map<std::string, std::size_t> home;

  /// Builds the home map; the first defining fragment wins (duplicates are
  /// reported by validate_mtheory).
  static MTheory from_fragments(std::vector<MFrag> fragments);
};

std::vector<StructuralError> validate_mtheory(const MTheory& theory);

enum class FragmentClass { Generative, Finding };

/// Throws InvalidFragment if the fragment is structurally invalid.
FragmentClass classify_fragment(const MFrag& fragment, bool has_findings);

}  // namespace ontoflux
