#include "ontoflux/io.hpp"
#include "text_cursor.hpp"

namespace ontoflux {

using detail::Cursor;

std::vector<MFrag> parse_fragments(std::string_view text) {
  std::vector<MFrag> out;
  std::optional<MFrag> current;
  int line_no = 0;
  for (const auto line : detail::split_lines(text)) {
    Cursor c(line, ++line_no);
    if (c.done()) continue;
    const int start = c.column();
    const std::string kw = c.identifier("statement");

    if (kw == "fragment") {
      if (current) c.fail_at(start, {"end"}, "nested fragment");
      current = MFrag{};
      current->name = c.identifier("fragment name");
      c.expect_end();
      continue;
    }
    if (!current) c.fail_at(start, {"fragment"}, "statement outside a fragment");
    MFrag& f = *current;

    if (kw == "end") {
      out.push_back(std::move(f));
      current.reset();
    } else if (kw == "event" || kw == "action" || kw == "agent") {
      const NodeId node{c.identifier("node")};
      (kw == "event" ? f.events : kw == "action" ? f.actions : f.agents).insert(node);
      if (c.peek_identifier()) {
        const int col = (c.skip_ws(), c.column());
        if (c.identifier("values") != "values") c.fail_at(col, {"values"}, "expected 'values'");
        std::vector<std::string> states;
        while (!c.done()) states.push_back(c.identifier("state"));
        f.possible_values[node] = std::move(states);
      }
    } else if (kw == "edge") {
      const NodeId from{c.identifier("node")};
      f.graph.insert(Edge{from, NodeId{c.identifier("node")}});
    } else if (kw == "instanceof") {
      const NodeId action{c.identifier("node")};
      f.action_instance_of[action] = NodeId{c.identifier("node")};
    } else if (kw == "dist") {
      LocalDistribution d;
      d.agent_node = NodeId{c.identifier("node")};
      if (c.peek_identifier()) {
        const int col = (c.skip_ws(), c.column());
        if (c.identifier("given") != "given") c.fail_at(col, {"given"}, "expected 'given'");
        while (!c.done()) d.parents.push_back(NodeId{c.identifier("node")});
      }
      f.distributions[d.agent_node] = std::move(d);
    } else if (kw == "row") {
      c.skip_ws();
      const int node_col = c.column();
      const NodeId node{c.identifier("node")};
      auto it = f.distributions.find(node);
      if (it == f.distributions.end()) c.fail_at(node_col, {"dist"}, "row for a node without a dist statement");
      std::vector<std::string> key;
      while (!c.peek("=")) key.push_back(c.identifier("state"));
      c.expect("=");
      std::vector<double> probs;
      do probs.push_back(c.decimal());
      while (!c.done());
      it->second.rows[std::move(key)] = std::move(probs);
    } else if (kw == "finding") {
      const NodeId node{c.identifier("node")};
      c.expect("=");
      f.findings[node] = c.identifier("state");
    } else {
      c.fail_at(start, {"event", "action", "agent", "edge", "instanceof", "dist", "row", "finding", "end"},
                "unknown statement '" + kw + "'");
    }
    c.expect_end();
  }
  if (current) throw ParseError(line_no, 1, {"end"}, "fragment " + current->name + " is not closed");
  return out;
}

}  // namespace ontoflux
