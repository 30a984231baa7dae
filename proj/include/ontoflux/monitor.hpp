#pragma once

// The monitoring loop: queue events, drain them into the A-Box once per tick,
// reason, accept merges, refresh closures, advance the clock.

#include <deque>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ontoflux/kb.hpp"
#include "ontoflux/prob_merge.hpp"
#include "ontoflux/regimes.hpp"
#include "ontoflux/temporal.hpp"

namespace ontoflux {

/// Selects the merge alternatives applied at a tick.
struct MergePolicy {
  double acceptance_threshold = 0.5;

  /// Throws OutOfRange unless 0 <= threshold <= 1.
  static MergePolicy make(double threshold);
  /// Mappings with probability >= threshold, by (probability desc, mapping_id asc).
  std::vector<Mapping> select(const std::vector<Mapping>& candidates) const;
};

struct MergePair {
  EntityName local_concept;
  EntityName external_concept;
  double probability = 0.0;
  std::string mapping_id;
  auto operator<=>(const MergePair&) const = default;
  bool operator==(const MergePair&) const = default;
};

/// An A-Box assertion or an action (which also contributes A-Box facts).
using MonitorEvent = std::variant<ABoxAssertion, ActionRecord>;

Time event_time(const MonitorEvent& event);
std::string describe(const MonitorEvent& event);

struct LogEntry {
  int tick = 0;
  char step = 'a';  // 'a'..'e'
  std::string detail;
  /// Set on enqueue entries so the log can be replayed.
  std::optional<MonitorEvent> event;

  /// `tick=<n> step=<a..e> detail=<text>`
  std::string line() const;
  bool operator==(const LogEntry&) const = default;
};

std::string format_log(const std::vector<LogEntry>& log);

struct MonitorConfig {
  UpperOntology names;
  std::vector<EntityName> closed_concepts;
  std::vector<TemporalProposition> propositions;
};

struct MonitorState {
  Time clock = 0.0;
  int ticks = 0;
  KnowledgeBase kb;
  UpperOntology names;
  std::deque<MonitorEvent> pending_events;
  std::set<MergePair> merge_relation;
  std::vector<EntityName> closed_concepts;
  std::vector<TemporalProposition> propositions;
  /// Actions drained so far, ordered by occurrence time.
  std::vector<ActionRecord> action_log;
  std::optional<MergedKB> merged;
  std::vector<LogEntry> event_log;

  bool operator==(const MonitorState&) const = default;
};

/// Clock t(0) = 0 with every configured concept closed.
MonitorState init(const KnowledgeBase& kb, const MonitorConfig& config);

/// Appends an event to the pending FIFO. Throws StaleEvent if its time lies in
/// an already processed tick window.
MonitorState enqueue_event(const MonitorState& state, const MonitorEvent& event);

/// One loop iteration over the window (clock, clock + 1].
MonitorState tick(const MonitorState& state, const MergePolicy& policy, const std::vector<Mapping>& mappings,
                  const KnowledgeBase& external);

/// Scripted events sorted by time; each is enqueued just before the tick
/// whose window covers it.
using EventScript = std::vector<MonitorEvent>;

MonitorState run(const MonitorState& state, int horizon, const MergePolicy& policy,
                 const std::vector<Mapping>& mappings, const KnowledgeBase& external,
                 const EventScript& script = {});

/// Rebuilds a state by re-applying the enqueue and tick entries of `log`.
MonitorState replay(const KnowledgeBase& kb, const MonitorConfig& config, const std::vector<LogEntry>& log,
                    const MergePolicy& policy, const std::vector<Mapping>& mappings,
                    const KnowledgeBase& external);

/// Merge completions from the simulator as MergeAction records at their
/// effective delivery times.
EventScript script_from_orders(const std::vector<UpdateOrder>& orders, const EntityName& actor,
                               const UpperOntology& names,
                               const std::optional<std::pair<std::string, std::string>>& target = std::nullopt);

/// Shortest text that parses back to the same double.
std::string format_time(Time t);

}  // namespace ontoflux
