#pragma once

// Line-based text formats: ontologies, mappings, queries, fragments,
// simulation configs and monitor scripts; result records as CSV or JSON.

#include <string>
#include <string_view>
#include <vector>

#include "ontoflux/kb.hpp"
#include "ontoflux/mfrag.hpp"
#include "ontoflux/monitor.hpp"
#include "ontoflux/prob_merge.hpp"
#include "ontoflux/regimes.hpp"

namespace ontoflux {

// Ontology documents.
//
//   namespace O1
//   class C                     property p
//   subclass C D                disjoint C D
//   union C = C1 | C2 | ...     allvalues C p D
//   domain p C                  range p C
//   assert C(i) [@ t]           assert p(i, j) [@ t]
//   rule id: A1, A2 -> H
//
// `#` starts a comment. Unqualified names live in the document namespace.
// In rules, `?x` and lowercase-initial tokens are variables; uppercase-initial
// and qualified tokens are individuals.

/// Throws ParseError on syntax errors and UnresolvedName when a class or
/// property of the document namespace is used but never declared.
KnowledgeBase parse_ontology(std::string_view text);

/// Canonical text for the KB's T-Box, R-Box and A-Box (closures are not
/// serialized).
std::string serialize_ontology(const KnowledgeBase& kb);

// Mapping documents, one per line:
//
//   map id: O1:keyword(x, y) <- O2:about(x, y) ; P(0.9) [; PN(0.1)]
//
// `←` may replace `<-`, and `0,9` may replace `0.9`. Predicates must be
// qualified; unqualified individuals take the namespace of their predicate.

/// Throws ParseError, or ProbabilityOutOfRange for a probability outside [0, 1].
std::vector<Mapping> parse_mappings(std::string_view text);

/// Conjunctive query `O1:Event(x) ∧ O1:keyword(x, Sea)`; conjuncts may also be
/// joined with `&` or `,`.
std::vector<Atom> parse_query(std::string_view text);

std::string format_binding(const QueryAnswer& answer, const std::string& home_ns);

// Fragment documents:
//
//   fragment F
//     event|action|agent <node> values s1 s2 ...
//     edge <from> <to>
//     instanceof <action> <agent>
//     dist <agent> given p1 p2 ...
//     row <agent> <p1-state> ... = q1 q2 ...
//     finding <node> = <state>
//   end

std::vector<MFrag> parse_fragments(std::string_view text);

// Simulation configs: flat `key = value` lines.
//
// Mandatory: regime, base_stock, demand_rate, lead_mu, lead_r, horizon,
// warmup, seed. Optional: review_period (1), holding_cost (1),
// lost_penalty (10), processing_cost (1), inventory_metric (on_hand).

/// Throws InvalidConfig on unknown, missing or malformed keys.
SimConfig parse_config(std::string_view text);

/// Same format, but any value may be a comma-separated list. The result is
/// the cartesian product over the keys in result-column order, with the last
/// key varying fastest.
std::vector<SimConfig> parse_config_grid(std::string_view text);

/// `a..b` inclusive, or a single value.
std::vector<std::uint64_t> parse_seed_range(std::string_view text);

// Monitor scripts:
//
//   close <Class>
//   prop <id> pos|neg <start> <end> <Kind>(<actor-term>) [target <a> <b>]
//   at <t> assert <atom>
//   at <t> action <id> <Kind> <actor> [target <a> <b>]
//   ticks <n>
//
// Names resolve against `ns`; lines `at ...` must be sorted by time.

struct MonitorScript {
  MonitorConfig config;
  EventScript events;
  int ticks = 0;
};

MonitorScript parse_monitor_script(std::string_view text, const std::string& ns);

// Result records.

struct ResultRecord {
  SimConfig config;
  SimStats stats;
  double wall_time_s = 0.0;
};

/// Fixed column order: config echo, statistics, wall time.
const std::vector<std::string>& result_columns();
std::string csv_header();
/// Floats with 9 significant digits.
std::string to_csv_row(const ResultRecord& record);
std::string to_json(const ResultRecord& record);
/// JSON array of records, one per line.
std::string to_json(const std::vector<ResultRecord>& records);

/// Reads a whole file; throws Error if it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace ontoflux
