#include "ontoflux/error.hpp"
#include "ontoflux/io.hpp"
#include "text_cursor.hpp"

namespace ontoflux {

using detail::Cursor;

namespace {

EntityName resolve(const detail::RawName& n, const std::string& ns) {
  return EntityName{n.qualified ? n.ns : ns, n.local};
}

std::optional<std::pair<std::string, std::string>> optional_target(Cursor& c) {
  if (!c.peek_identifier()) return std::nullopt;
  const int col = (c.skip_ws(), c.column());
  if (c.identifier("target") != "target") c.fail_at(col, {"target"}, "expected 'target'");
  const std::string a = c.identifier("ontology");
  return std::make_pair(a, c.identifier("ontology"));
}

}  // namespace

MonitorScript parse_monitor_script(std::string_view text, const std::string& ns) {
  MonitorScript script;
  script.config.names = UpperOntology::in(ns);
  Time last = -1.0;
  int line_no = 0;
  for (const auto line : detail::split_lines(text)) {
    Cursor c(line, ++line_no);
    if (c.done()) continue;
    const int start = c.column();
    const std::string kw = c.identifier("statement");
    if (kw == "close") {
      script.config.closed_concepts.push_back(resolve(detail::parse_name(c, "class"), ns));
    } else if (kw == "ticks") {
      const auto n = c.integer();
      if (n < 0) c.fail_at(start, {"integer"}, "tick count must be >= 0");
      script.ticks = static_cast<int>(n);
    } else if (kw == "prop") {
      TemporalProposition p;
      p.prop_id = c.identifier("proposition id");
      c.skip_ws();
      const int pol_col = c.column();
      const std::string pol = c.identifier("polarity");
      if (pol == "pos") p.polarity = Polarity::TEPos;
      else if (pol == "neg") p.polarity = Polarity::TENeg;
      else c.fail_at(pol_col, {"pos", "neg"}, "expected pos or neg");
      const int interval_col = (c.skip_ws(), c.column());
      const Time a = c.real();
      const Time b = c.real();
      if (a > b) c.fail_at(interval_col, {"interval"}, "interval start after end");
      p.interval = Interval{a, b};
      p.pattern.atom = detail::parse_atom(c, detail::TermMode::Mixed, ns, false).atom;
      if (p.pattern.atom.kind != AtomKind::Class) c.fail_at(start, {"Kind(actor)"}, "pattern must be a class atom");
      p.pattern.target = optional_target(c);
      script.config.propositions.push_back(std::move(p));
    } else if (kw == "at") {
      const int time_col = (c.skip_ws(), c.column());
      const Time t = c.real();
      if (t < 0.0) c.fail_at(time_col, {"time"}, "negative time");
      if (t < last) c.fail_at(time_col, {"time"}, "events must be sorted by time");
      last = t;
      c.skip_ws();
      const int what_col = c.column();
      const std::string what = c.identifier("assert or action");
      if (what == "assert") {
        const auto atom = detail::parse_atom(c, detail::TermMode::Individuals, ns, false).atom;
        script.events.emplace_back(ABoxAssertion{atom, t});
      } else if (what == "action") {
        ActionRecord r;
        r.action_id = c.identifier("action id");
        r.action_kind = resolve(detail::parse_name(c, "action kind"), ns);
        r.actor = resolve(detail::parse_name(c, "actor"), ns);
        r.occurred_at = t;
        r.target = optional_target(c);
        script.events.emplace_back(std::move(r));
      } else {
        c.fail_at(what_col, {"assert", "action"}, "expected assert or action");
      }
    } else {
      c.fail_at(start, {"close", "prop", "at", "ticks"}, "unknown statement '" + kw + "'");
    }
    c.expect_end();
  }
  return script;
}

}  // namespace ontoflux
