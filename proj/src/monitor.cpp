#include "ontoflux/monitor.hpp"

#include <algorithm>
#include <charconv>

#include "ontoflux/error.hpp"

namespace ontoflux {

MergePolicy MergePolicy::make(double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw OutOfRange("acceptance threshold must lie in [0, 1]");
  return MergePolicy{threshold};
}

std::vector<Mapping> MergePolicy::select(const std::vector<Mapping>& candidates) const {
  std::vector<Mapping> accepted;
  for (const auto& m : candidates)
    if (m.probability >= acceptance_threshold) accepted.push_back(m);
  std::sort(accepted.begin(), accepted.end(), [](const Mapping& a, const Mapping& b) {
    if (a.probability != b.probability) return a.probability > b.probability;
    return a.mapping_id < b.mapping_id;
  });
  return accepted;
}

std::string format_time(Time t) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, t);
  return std::string(buf, res.ptr);
}

Time event_time(const MonitorEvent& event) {
  if (const auto* a = std::get_if<ABoxAssertion>(&event)) return a->asserted_at;
  return std::get<ActionRecord>(event).occurred_at;
}

std::string describe(const MonitorEvent& event) {
  if (const auto* a = std::get_if<ABoxAssertion>(&event))
    return "assert " + to_string(a->atom) + " at=" + format_time(a->asserted_at);
  const auto& r = std::get<ActionRecord>(event);
  std::string out = "action " + r.action_id + " kind=" + r.action_kind.str() + " actor=" + r.actor.str() +
                    " at=" + format_time(r.occurred_at);
  if (r.target) out += " target=" + r.target->first + "," + r.target->second;
  return out;
}

std::string LogEntry::line() const {
  return "tick=" + std::to_string(tick) + " step=" + std::string(1, step) + " detail=" + detail;
}

std::string format_log(const std::vector<LogEntry>& log) {
  std::string out;
  for (const auto& entry : log) out += entry.line() + "\n";
  return out;
}

MonitorState init(const KnowledgeBase& kb, const MonitorConfig& config) {
  MonitorState state;
  state.kb = kb;
  state.names = config.names;
  state.closed_concepts = config.closed_concepts;
  state.propositions = config.propositions;
  for (const auto& c : state.closed_concepts) state.kb = close_class(state.kb, c, state.clock);
  return state;
}

MonitorState enqueue_event(const MonitorState& state, const MonitorEvent& event) {
  const Time at = event_time(event);
  if (state.ticks > 0 && at <= state.clock)
    throw StaleEvent("event at " + format_time(at) + " falls in an already processed tick");
  MonitorState next = state;
  next.pending_events.push_back(event);
  next.event_log.push_back(LogEntry{state.ticks + 1, 'a', "queued " + describe(event), event});
  return next;
}

namespace {

void log(MonitorState& s, char step, std::string detail) {
  s.event_log.push_back(LogEntry{s.ticks + 1, step, std::move(detail), std::nullopt});
}

}  // namespace

MonitorState tick(const MonitorState& state, const MergePolicy& policy, const std::vector<Mapping>& mappings,
                  const KnowledgeBase& external) {
  MonitorState s = state;
  const Time now = s.clock + 1.0;

  // (a) drain the window (clock, clock + 1]; later events keep their order.
  std::deque<MonitorEvent> keep;
  std::vector<ActionRecord> drained_actions;
  for (const auto& event : s.pending_events) {
    if (event_time(event) > now) {
      keep.push_back(event);
      continue;
    }
    if (const auto* a = std::get_if<ABoxAssertion>(&event)) {
      s.kb = assert_item(s.kb, *a);
    } else {
      const auto& record = std::get<ActionRecord>(event);
      for (const auto& fact : action_assertions(record, s.names)) s.kb = assert_item(s.kb, fact);
      drained_actions.push_back(record);
    }
    log(s, 'a', "drained " + describe(event));
  }
  s.pending_events = std::move(keep);

  // (b) reasoning, then proposition stepping over the accepted action log.
  const Entailment entailment(s.kb);
  for (const auto& record : drained_actions) {
    if (!actor_is_agent(entailment, record, s.names)) {
      log(s, 'b', "rejected action " + record.action_id + ": actor " + record.actor.str() + " is not an Agent");
      continue;
    }
    s.action_log.push_back(record);
  }
  std::stable_sort(s.action_log.begin(), s.action_log.end(),
                   [](const ActionRecord& x, const ActionRecord& y) { return x.occurred_at < y.occurred_at; });
  for (auto& prop : s.propositions) {
    const auto before = prop.state;
    prop = step_proposition(prop, s.action_log, now);
    if (prop.state != before)
      log(s, 'b', "proposition " + prop.prop_id + " " + to_string(before) + " -> " + to_string(prop.state));
  }

  // (c) merge policy, recomputed from scratch every tick.
  if (!mappings.empty()) {
    const auto accepted = policy.select(mappings);
    s.merge_relation.clear();
    for (const auto& m : accepted) {
      s.merge_relation.insert(MergePair{m.target.predicate, m.source.predicate, m.probability, m.mapping_id});
      log(s, 'c', "accepted " + m.mapping_id + " p=" + format_time(m.probability));
    }
    s.merged = merge(s.kb, external, accepted);
    log(s, 'c', "derived " + std::to_string(s.merged->derived.size()) + " facts");
  }

  // (d) closures at the new clock.
  for (const auto& c : s.closed_concepts) {
    s.kb = close_class(s.kb, c, now);
    log(s, 'd', "closed " + c.str() + " members=" + std::to_string(s.kb.closures().at(c).members.size()));
  }

  // (e)
  log(s, 'e', "clock=" + format_time(now));
  s.clock = now;
  ++s.ticks;
  return s;
}

MonitorState run(const MonitorState& state, int horizon, const MergePolicy& policy,
                 const std::vector<Mapping>& mappings, const KnowledgeBase& external, const EventScript& script) {
  if (horizon < 0) throw PreconditionFailed("horizon must be >= 0");
  MonitorState s = state;
  std::size_t next = 0;
  // Redelivered events from windows already processed are dropped.
  if (s.ticks > 0)
    while (next < script.size() && event_time(script[next]) <= s.clock) ++next;
  for (int i = 0; i < horizon; ++i) {
    const Time window_end = s.clock + 1.0;
    while (next < script.size() && event_time(script[next]) <= window_end)
      s = enqueue_event(s, script[next++]);
    s = tick(s, policy, mappings, external);
  }
  return s;
}

MonitorState replay(const KnowledgeBase& kb, const MonitorConfig& config, const std::vector<LogEntry>& log,
                    const MergePolicy& policy, const std::vector<Mapping>& mappings,
                    const KnowledgeBase& external) {
  MonitorState s = init(kb, config);
  for (const auto& entry : log) {
    if (entry.event) {
      s = enqueue_event(s, *entry.event);
    } else if (entry.step == 'e' && entry.tick > s.ticks) {
      s = tick(s, policy, mappings, external);
    }
  }
  return s;
}

EventScript script_from_orders(const std::vector<UpdateOrder>& orders, const EntityName& actor,
                               const UpperOntology& names,
                               const std::optional<std::pair<std::string, std::string>>& target) {
  EventScript script;
  script.reserve(orders.size());
  for (const auto& order : orders) {
    ActionRecord record;
    record.action_id = "merge" + std::to_string(order.seq);
    record.actor = actor;
    record.action_kind = names.merge_action;
    record.occurred_at = order.effective_delivery;
    record.target = target;
    script.emplace_back(std::move(record));
  }
  std::stable_sort(script.begin(), script.end(),
                   [](const MonitorEvent& a, const MonitorEvent& b) { return event_time(a) < event_time(b); });
  return script;
}

}  // namespace ontoflux
