#include "ontoflux/mfrag.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "ontoflux/error.hpp"

namespace ontoflux {

std::set<NodeId> MFrag::nodes() const {
  std::set<NodeId> out = events;
  out.insert(actions.begin(), actions.end());
  out.insert(agents.begin(), agents.end());
  return out;
}

const char* to_string(StructuralErrorKind kind) noexcept {
  switch (kind) {
    case StructuralErrorKind::DisjointnessViolated: return "DisjointnessViolated";
    case StructuralErrorKind::UnknownNode: return "UnknownNode";
    case StructuralErrorKind::CycleDetected: return "CycleDetected";
    case StructuralErrorKind::RootNotInput: return "RootNotInput";
    case StructuralErrorKind::ActionNotRoot: return "ActionNotRoot";
    case StructuralErrorKind::MissingDistribution: return "MissingDistribution";
    case StructuralErrorKind::UnexpectedDistribution: return "UnexpectedDistribution";
    case StructuralErrorKind::ParentMismatch: return "ParentMismatch";
    case StructuralErrorKind::MissingActionInstance: return "MissingActionInstance";
    case StructuralErrorKind::UnexpectedActionInstance: return "UnexpectedActionInstance";
    case StructuralErrorKind::MissingPossibleValues: return "MissingPossibleValues";
    case StructuralErrorKind::UnknownState: return "UnknownState";
    case StructuralErrorKind::RowArityMismatch: return "RowArityMismatch";
    case StructuralErrorKind::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case StructuralErrorKind::RowSumInvalid: return "RowSumInvalid";
    case StructuralErrorKind::UncoveredParentCombination: return "UncoveredParentCombination";
    case StructuralErrorKind::DuplicateHome: return "DuplicateHome";
  }
  return "?";
}

std::string to_string(const StructuralError& error) {
  std::string out = to_string(error.kind);
  out += "(" + error.subject + ")";
  if (!error.fragment.empty()) out += " in " + error.fragment;
  return out;
}

namespace {

using Adjacency = std::map<NodeId, std::vector<NodeId>>;

Adjacency successors(const MFrag& f) {
  Adjacency adj;
  for (const auto& e : f.graph) adj[e.from].push_back(e.to);
  return adj;
}

std::set<NodeId> reachable(const Adjacency& adj, const NodeId& from) {
  std::set<NodeId> seen;
  std::vector<NodeId> stack{from};
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    auto it = adj.find(u);
    if (it == adj.end()) continue;
    for (const auto& v : it->second) {
      if (seen.insert(v).second) stack.push_back(v);
    }
  }
  return seen;
}

std::string join_states(const std::vector<NodeId>& parents, const std::vector<std::string>& states) {
  std::string out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i) out += ",";
    out += (i < parents.size() ? parents[i].token + "=" : std::string()) + states[i];
  }
  return out;
}

void check_distribution(const MFrag& f, const NodeId& agent, const LocalDistribution& dist,
                        const std::map<NodeId, std::set<NodeId>>& graph_parents,
                        std::vector<StructuralError>& errors) {
  auto add = [&](StructuralErrorKind kind, std::string subject) {
    errors.push_back({kind, std::move(subject), f.name});
  };
  const std::set<NodeId> declared(dist.parents.begin(), dist.parents.end());
  const auto gp = graph_parents.find(agent);
  const std::set<NodeId> actual = gp == graph_parents.end() ? std::set<NodeId>{} : gp->second;
  if (declared != actual || declared.size() != dist.parents.size()) {
    add(StructuralErrorKind::ParentMismatch, agent.token);
    return;
  }
  const auto own = f.possible_values.find(agent);
  const std::size_t arity = own == f.possible_values.end() ? 0 : own->second.size();

  std::vector<const std::vector<std::string>*> parent_values;
  for (const auto& p : dist.parents) {
    auto it = f.possible_values.find(p);
    if (it == f.possible_values.end() || it->second.empty()) return;  // reported elsewhere
    parent_values.push_back(&it->second);
  }

  for (const auto& [key, probs] : dist.rows) {
    const std::string where = agent.token + "[" + join_states(dist.parents, key) + "]";
    if (key.size() != dist.parents.size() || probs.size() != arity) {
      add(StructuralErrorKind::RowArityMismatch, where);
      continue;
    }
    bool known = true;
    for (std::size_t i = 0; i < key.size(); ++i) {
      const auto& values = *parent_values[i];
      if (std::find(values.begin(), values.end(), key[i]) == values.end()) known = false;
    }
    if (!known) add(StructuralErrorKind::UnknownState, where);
    double sum = 0.0;
    bool in_range = true;
    for (double p : probs) {
      if (!(p >= 0.0 && p <= 1.0)) in_range = false;
      sum += p;
    }
    if (!in_range) add(StructuralErrorKind::ProbabilityOutOfRange, where);
    if (!(std::abs(sum - 1.0) <= kProbabilitySumTolerance)) add(StructuralErrorKind::RowSumInvalid, where);
  }

  // Every combination in the cross product of parent states needs a row.
  std::vector<std::string> combo(dist.parents.size());
  std::function<void(std::size_t)> walk = [&](std::size_t i) {
    if (i == combo.size()) {
      if (!dist.rows.contains(combo))
        add(StructuralErrorKind::UncoveredParentCombination,
            agent.token + "[" + join_states(dist.parents, combo) + "]");
      return;
    }
    for (const auto& v : *parent_values[i]) {
      combo[i] = v;
      walk(i + 1);
    }
  };
  walk(0);
}

}  // namespace

std::vector<NodeId> topological_order(const MFrag& f) {
  const auto nodes = f.nodes();
  std::map<NodeId, int> indegree;
  for (const auto& n : nodes) indegree[n] = 0;
  for (const auto& e : f.graph) ++indegree[e.to];
  const Adjacency adj = successors(f);
  std::vector<NodeId> ready;
  for (const auto& [n, d] : indegree) {
    if (d == 0) ready.push_back(n);
  }
  std::vector<NodeId> order;
  while (!ready.empty()) {
    std::sort(ready.begin(), ready.end(), std::greater<>());
    NodeId u = ready.back();
    ready.pop_back();
    order.push_back(u);
    if (auto it = adj.find(u); it != adj.end()) {
      for (const auto& v : it->second) {
        if (--indegree[v] == 0) ready.push_back(v);
      }
    }
  }
  if (order.size() != indegree.size()) return {};
  return order;
}

std::vector<StructuralError> validate_mfrag(const MFrag& f) {
  std::vector<StructuralError> errors;
  auto add = [&](StructuralErrorKind kind, std::string subject) {
    errors.push_back({kind, std::move(subject), f.name});
  };

  // E, A, N pairwise disjoint.
  for (const auto& n : f.events) {
    if (f.actions.contains(n) || f.agents.contains(n)) add(StructuralErrorKind::DisjointnessViolated, n.token);
  }
  for (const auto& n : f.actions) {
    if (f.agents.contains(n)) add(StructuralErrorKind::DisjointnessViolated, n.token);
  }

  const auto nodes = f.nodes();
  std::map<NodeId, std::set<NodeId>> parents;
  for (const auto& e : f.graph) {
    for (const auto* end : {&e.from, &e.to}) {
      if (!nodes.contains(*end)) add(StructuralErrorKind::UnknownNode, end->token);
    }
    parents[e.to].insert(e.from);
  }

  // Cycles: one error per strongly connected component that contains a cycle.
  const Adjacency adj = successors(f);
  std::set<NodeId> on_cycle;
  for (const auto& n : nodes) {
    if (on_cycle.contains(n)) continue;
    const auto forward = reachable(adj, n);
    if (!forward.contains(n)) continue;
    std::vector<std::string> component;
    for (const auto& m : forward) {
      if (reachable(adj, m).contains(n)) {
        on_cycle.insert(m);
        component.push_back(m.token);
      }
    }
    std::sort(component.begin(), component.end());
    std::string subject;
    for (const auto& t : component) subject += (subject.empty() ? "" : ",") + t;
    add(StructuralErrorKind::CycleDetected, subject);
  }

  // Roots lie in A ∪ N; actions are roots. Nodes on a cycle are covered by CycleDetected.
  for (const auto& n : nodes) {
    if (on_cycle.contains(n)) continue;
    const bool root = !parents.contains(n);
    if (root && !f.actions.contains(n) && !f.agents.contains(n)) add(StructuralErrorKind::RootNotInput, n.token);
    if (!root && f.actions.contains(n)) add(StructuralErrorKind::ActionNotRoot, n.token);
  }

  for (const auto& n : nodes) {
    auto it = f.possible_values.find(n);
    if (it == f.possible_values.end() || it->second.empty()) add(StructuralErrorKind::MissingPossibleValues, n.token);
  }

  for (const auto& a : f.agents) {
    if (!f.distributions.contains(a)) add(StructuralErrorKind::MissingDistribution, a.token);
  }
  for (const auto& [node, dist] : f.distributions) {
    if (!f.agents.contains(node) || dist.agent_node != node) {
      add(StructuralErrorKind::UnexpectedDistribution, node.token);
      continue;
    }
    check_distribution(f, node, dist, parents, errors);
  }

  for (const auto& a : f.actions) {
    if (!f.action_instance_of.contains(a)) add(StructuralErrorKind::MissingActionInstance, a.token);
  }
  for (const auto& [node, target] : f.action_instance_of) {
    if (!f.actions.contains(node)) add(StructuralErrorKind::UnexpectedActionInstance, node.token);
  }

  std::sort(errors.begin(), errors.end());
  errors.erase(std::unique(errors.begin(), errors.end()), errors.end());
  return errors;
}

MTheory MTheory::from_fragments(std::vector<MFrag> fragments) {
  MTheory theory;
  theory.fragments = std::move(fragments);
  for (std::size_t i = 0; i < theory.fragments.size(); ++i) {
    for (const auto& a : theory.fragments[i].agents) theory.home.emplace(a.token, i);
  }
  return theory;
}

std::vector<StructuralError> validate_mtheory(const MTheory& theory) {
  std::vector<StructuralError> errors;
  std::map<std::string, std::vector<std::string>> defined_in;
  for (const auto& f : theory.fragments) {
    auto own = validate_mfrag(f);
    errors.insert(errors.end(), own.begin(), own.end());
    for (const auto& a : f.agents) defined_in[a.token].push_back(f.name);
  }
  for (const auto& [rv, where] : defined_in) {
    if (where.size() > 1) errors.push_back({StructuralErrorKind::DuplicateHome, rv, ""});
  }
  std::sort(errors.begin(), errors.end());
  return errors;
}

FragmentClass classify_fragment(const MFrag& fragment, bool has_findings) {
  if (auto errors = validate_mfrag(fragment); !errors.empty())
    throw InvalidFragment("fragment " + fragment.name + " is invalid: " + to_string(errors.front()));
  return has_findings ? FragmentClass::Finding : FragmentClass::Generative;
}

}  // namespace ontoflux
