#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <variant>

#include "ontoflux/error.hpp"
#include "ontoflux/io.hpp"
#include "ontoflux/monitor.hpp"
#include "text_cursor.hpp"

namespace ontoflux {

using detail::Cursor;
using detail::RawName;
using detail::TermMode;

namespace {

struct Use {
  EntityName name;
  int line;
  int column;
};

struct Statement {
  int line;
  std::variant<TBoxAxiom, ABoxAssertion, HornRule> item;
};

const std::vector<std::string> kStatements = {"namespace", "class",  "property", "subclass", "disjoint", "union",
                                              "domain",    "range",  "allvalues", "assert",  "rule"};

class OntologyParser {
 public:
  KnowledgeBase parse(std::string_view text) {
    int line_no = 0;
    for (const auto line : detail::split_lines(text)) {
      Cursor c(line, ++line_no);
      if (c.done()) continue;
      statement(c);
    }
    if (!ns_) throw ParseError(line_no, 1, {"namespace"}, "missing namespace declaration");

    for (const auto& use : uses_) {
      if (use.name.ns == *ns_ && !defined_.contains(use.name))
        throw UnresolvedName("line " + std::to_string(use.line) + ", column " + std::to_string(use.column) +
                             ": undeclared name '" + use.name.local + "'");
    }

    KnowledgeBase kb(*ns_);
    for (const auto& st : statements_) {
      try {
        kb = std::visit([&](const auto& item) { return assert_item(kb, item); }, st.item);
      } catch (const MalformedItem& e) {
        throw ParseError(st.line, 1, {}, e.what());
      }
    }
    return kb;
  }

 private:
  /// Before the namespace line, statements are still checked for syntax.
  std::string home() const { return ns_.value_or(""); }
  EntityName resolve(const RawName& n) const { return EntityName{n.qualified ? n.ns : home(), n.local}; }

  EntityName define(Cursor& c, const std::string& what) {
    const EntityName name = resolve(detail::parse_name(c, what));
    defined_.insert(name);
    return name;
  }

  void use(const detail::ParsedAtom& a, int line) {
    uses_.push_back(Use{a.atom.predicate, line, a.predicate.column});
  }

  void add(int line, std::variant<TBoxAxiom, ABoxAssertion, HornRule> item) {
    statements_.push_back(Statement{line, std::move(item)});
  }

  void statement(Cursor& c) {
    const int line = c.line();
    const int start = (c.skip_ws(), c.column());
    const std::string kw = c.identifier("statement");
    if (kw == "namespace") {
      if (ns_) c.fail_at(start, {"statement"}, "namespace declared twice");
      ns_ = c.identifier("namespace");
      c.expect_end();
      return;
    }

    if (kw == "class") {
      add(line, ClassDeclaration{define(c, "class")});
    } else if (kw == "property") {
      add(line, PropertyDeclaration{define(c, "property")});
    } else if (kw == "subclass") {
      const auto sub = define(c, "class");
      add(line, SubClassOf{sub, define(c, "class")});
    } else if (kw == "disjoint") {
      const auto a = define(c, "class");
      add(line, DisjointClasses{a, define(c, "class")});
    } else if (kw == "union") {
      UnionEquivalence u;
      u.whole = define(c, "class");
      c.expect("=");
      u.parts.push_back(define(c, "class"));
      while (c.accept("|")) u.parts.push_back(define(c, "class"));
      add(line, std::move(u));
    } else if (kw == "domain") {
      const auto p = define(c, "property");
      add(line, PropertyDomain{p, define(c, "class")});
    } else if (kw == "range") {
      const auto p = define(c, "property");
      add(line, PropertyRange{p, define(c, "class")});
    } else if (kw == "allvalues") {
      const auto cls = define(c, "class");
      const auto p = define(c, "property");
      add(line, AllValuesFrom{cls, p, define(c, "class")});
    } else if (kw == "assert") {
      const auto a = detail::parse_atom(c, TermMode::Individuals, home(), false);
      use(a, line);
      Time at = 0.0;
      if (c.accept("@")) at = c.real();
      add(line, ABoxAssertion{a.atom, at});
    } else if (kw == "rule") {
      HornRule rule;
      rule.rule_id = c.identifier("rule id");
      c.expect(":");
      for (;;) {
        const auto a = detail::parse_atom(c, TermMode::Mixed, home(), false);
        use(a, line);
        rule.body.push_back(a.atom);
        if (c.accept(",") || c.accept("&") || c.accept("∧")) continue;
        if (c.accept("->") || c.accept("→")) break;
        c.fail_tokens({",", "&", "∧", "->", "→"}, "expected ',' or '->'");
      }
      const auto head = detail::parse_atom(c, TermMode::Mixed, home(), false);
      use(head, line);
      rule.head = head.atom;
      add(line, std::move(rule));
    } else {
      std::size_t matched = 0;
      for (const auto& k : kStatements) {
        std::size_t n = 0;
        while (n < k.size() && n < kw.size() && k[n] == kw[n]) ++n;
        matched = std::max(matched, n);
      }
      c.fail_at(start + static_cast<int>(matched), kStatements, "unknown statement '" + kw + "'");
    }
    c.expect_end();
    if (!ns_) c.fail_at(start, {"namespace"}, "the document must start with a namespace declaration");
  }

  std::optional<std::string> ns_;
  std::vector<Statement> statements_;
  std::set<EntityName> defined_;
  std::vector<Use> uses_;
};

std::string show(const EntityName& name, const std::string& home) {
  return name.ns == home ? name.local : name.str();
}

std::string show_atom(const Atom& atom, const std::string& home, bool rule) {
  std::string out = show(atom.predicate, home) + "(";
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i) out += ", ";
    const Term& t = atom.args[i];
    if (const auto* v = std::get_if<Variable>(&t)) {
      out += "?" + v->token;
    } else {
      const auto& name = std::get<Individual>(t).name;
      // In rules a bare lowercase token would read back as a variable.
      out += rule ? name.str() : show(name, home);
    }
  }
  return out + ")";
}

}  // namespace

KnowledgeBase parse_ontology(std::string_view text) { return OntologyParser{}.parse(text); }

std::string serialize_ontology(const KnowledgeBase& kb) {
  const std::string& home = kb.ns();
  std::string out = "namespace " + home + "\n";
  for (const auto& axiom : kb.tbox()) {
    out += std::visit(
        [&](const auto& a) -> std::string {
          using A = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<A, ClassDeclaration>) return "class " + show(a.name, home);
          if constexpr (std::is_same_v<A, PropertyDeclaration>) return "property " + show(a.name, home);
          if constexpr (std::is_same_v<A, SubClassOf>) return "subclass " + show(a.sub, home) + " " + show(a.super, home);
          if constexpr (std::is_same_v<A, DisjointClasses>) return "disjoint " + show(a.a, home) + " " + show(a.b, home);
          if constexpr (std::is_same_v<A, UnionEquivalence>) {
            std::string s = "union " + show(a.whole, home) + " =";
            for (std::size_t i = 0; i < a.parts.size(); ++i) s += (i ? " | " : " ") + show(a.parts[i], home);
            return s;
          }
          if constexpr (std::is_same_v<A, PropertyDomain>) return "domain " + show(a.property, home) + " " + show(a.cls, home);
          if constexpr (std::is_same_v<A, PropertyRange>) return "range " + show(a.property, home) + " " + show(a.cls, home);
          if constexpr (std::is_same_v<A, AllValuesFrom>)
            return "allvalues " + show(a.cls, home) + " " + show(a.property, home) + " " + show(a.filler, home);
        },
        axiom);
    out += "\n";
  }
  for (const auto& rule : kb.rbox()) {
    out += "rule " + rule.rule_id + ":";
    for (std::size_t i = 0; i < rule.body.size(); ++i) out += (i ? ", " : " ") + show_atom(rule.body[i], home, true);
    out += " -> " + show_atom(rule.head, home, true) + "\n";
  }
  for (const auto& [atom, at] : kb.abox()) {
    out += "assert " + show_atom(atom, home, false);
    if (at != 0.0) out += " @ " + format_time(at);
    out += "\n";
  }
  return out;
}

std::vector<Mapping> parse_mappings(std::string_view text) {
  std::vector<Mapping> out;
  std::set<std::string> ids;
  int line_no = 0;
  for (const auto line : detail::split_lines(text)) {
    Cursor c(line, ++line_no);
    if (c.done()) continue;
    const int start = c.column();
    if (c.identifier("map") != "map") c.fail_at(start, {"map"}, "expected 'map'");
    c.skip_ws();
    const int id_col = c.column();
    const std::string id = c.identifier("mapping id");
    if (!ids.insert(id).second) c.fail_at(id_col, {"mapping id"}, "duplicate mapping id '" + id + "'");
    c.expect(":");

    auto atom = [&c] {
      auto a = detail::parse_atom(c, TermMode::Mixed, "", true);
      if (!a.predicate.qualified)
        c.fail_at(a.predicate.column, {"namespace"}, "mapping predicates must be qualified");
      return a.atom;
    };
    const Atom target = atom();
    if (!c.accept("<-") && !c.accept("←")) c.fail_tokens({"<-", "←"}, "expected '<-'");
    const Atom source = atom();

    auto probability = [&c](const char* tag) {
      c.expect(tag);
      c.expect("(");
      const int col = (c.skip_ws(), c.column());
      const double p = c.decimal();
      if (p > 1.0)
        throw ProbabilityOutOfRange("line " + std::to_string(c.line()) + ", column " + std::to_string(col) +
                                    ": probability outside [0, 1]");
      c.expect(")");
      return p;
    };
    c.expect(";");
    const double p = probability("P");
    std::optional<double> pn;
    if (c.accept(";")) pn = probability("PN");
    c.expect_end();
    try {
      out.push_back(Mapping::make(id, target, source, p, pn));
    } catch (const MalformedItem& e) {
      throw ParseError(line_no, start, {}, e.what());
    }
  }
  return out;
}

std::vector<Atom> parse_query(std::string_view text) {
  std::vector<Atom> out;
  std::string joined(text);
  std::replace(joined.begin(), joined.end(), '\n', ' ');
  Cursor c(joined, 1);
  if (c.done()) c.fail({"atom"}, "empty query");
  for (;;) {
    auto a = detail::parse_atom(c, TermMode::Mixed, "", true);
    if (!a.predicate.qualified) c.fail_at(a.predicate.column, {"namespace"}, "query predicates must be qualified");
    out.push_back(std::move(a.atom));
    if (c.done()) break;
    if (!(c.accept("∧") || c.accept("&") || c.accept(","))) c.fail_tokens({"∧", "&", ","}, "expected a conjunction");
  }
  return out;
}

std::string format_binding(const QueryAnswer& answer, const std::string& home_ns) {
  std::string out;
  for (const auto& [var, ind] : answer.binding) {
    if (!out.empty()) out += ' ';
    out += var + "=" + show(ind, home_ns);
  }
  char buf[48];
  std::snprintf(buf, sizeof buf, "p=%.9f", answer.probability);
  if (!out.empty()) out += ' ';
  out += buf;
  if (answer.approximate) out += " approx";
  return out;
}

}  // namespace ontoflux
