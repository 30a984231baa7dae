#pragma once

// Per-line scanner shared by the text parsers. Columns are 1-based bytes.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ontoflux/error.hpp"
#include "ontoflux/kb.hpp"

namespace ontoflux::detail {

inline bool ident_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
inline bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

/// Splits on LF, drops a trailing CR and everything from `#`.
inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

class Cursor {
 public:
  Cursor(std::string_view text, int line) : text_(text), line_(line) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return static_cast<int>(pos_) + 1; }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool done() {
    skip_ws();
    return pos_ >= text_.size();
  }

  bool peek(std::string_view lit) {
    skip_ws();
    return text_.substr(pos_).starts_with(lit);
  }

  bool accept(std::string_view lit) {
    if (!peek(lit)) return false;
    pos_ += lit.size();
    return true;
  }

  void expect(std::string_view lit) {
    if (!accept(lit)) fail_tokens({std::string(lit)}, "expected '" + std::string(lit) + "'");
  }

  bool peek_identifier() {
    skip_ws();
    return pos_ < text_.size() && ident_start(text_[pos_]);
  }

  std::string identifier(const std::string& what = "identifier") {
    if (!peek_identifier()) fail({what}, "expected " + what);
    const auto start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  /// Decimal with either `.` or `,` as separator: digits [sep digits].
  double decimal() {
    skip_ws();
    const int col = column();
    std::string digits;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) digits += text_[pos_++];
    if (digits.empty()) fail_at(col, {"number"}, "expected a number");
    if (pos_ + 1 < text_.size() && (text_[pos_] == '.' || text_[pos_] == ',') &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      digits += '.';
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) digits += text_[pos_++];
    }
    double value = 0.0;
    std::from_chars(digits.data(), digits.data() + digits.size(), value);
    return value;
  }

  /// Finite real in C syntax (`1.5`, `2e-3`).
  double real() {
    skip_ws();
    const int col = column();
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    double value = 0.0;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || !std::isfinite(value)) fail_at(col, {"number"}, "expected a number");
    pos_ += static_cast<std::size_t>(res.ptr - first);
    return value;
  }

  long long integer() {
    skip_ws();
    const int col = column();
    const char* first = text_.data() + pos_;
    long long value = 0;
    const auto res = std::from_chars(first, text_.data() + text_.size(), value);
    if (res.ec != std::errc()) fail_at(col, {"integer"}, "expected an integer");
    pos_ += static_cast<std::size_t>(res.ptr - first);
    return value;
  }

  void expect_end() {
    if (!done()) fail({"end of line"}, "unexpected trailing text");
  }

  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& message) {
    skip_ws();
    fail_at(column(), std::move(expected), message);
  }

  /// Fails at the first byte that no literal in `tokens` can continue.
  [[noreturn]] void fail_tokens(std::vector<std::string> tokens, const std::string& message) {
    skip_ws();
    const auto rest = text_.substr(pos_);
    std::size_t matched = 0;
    for (const auto& t : tokens) {
      std::size_t k = 0;
      while (k < t.size() && k < rest.size() && rest[k] == t[k]) ++k;
      matched = std::max(matched, k);
    }
    fail_at(column() + static_cast<int>(matched), std::move(tokens), message);
  }

  [[noreturn]] void fail_at(int column, std::vector<std::string> expected, const std::string& message) const {
    throw ParseError(line_, column, std::move(expected), message);
  }

 private:
  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

/// `ident` or `ns:ident` (whitespace allowed after the colon).
struct RawName {
  std::string ns;
  std::string local;
  bool qualified = false;
  int column = 0;
};

inline RawName parse_name(Cursor& c, const std::string& what) {
  RawName n;
  c.skip_ws();
  n.column = c.column();
  const std::string first = c.identifier(what);
  if (c.peek(":")) {
    c.expect(":");
    n.ns = first;
    n.local = c.identifier(what);
    n.qualified = true;
  } else {
    n.local = first;
  }
  return n;
}

enum class TermMode {
  Individuals,  // every argument is an individual
  Mixed,        // ?x and lowercase tokens are variables
};

inline Term parse_term(Cursor& c, TermMode mode, const std::string& default_ns) {
  c.skip_ws();
  if (mode == TermMode::Mixed && c.accept("?")) return Variable{c.identifier("variable")};
  const RawName n = parse_name(c, "term");
  if (n.qualified) return Individual{EntityName{n.ns, n.local}};
  if (mode == TermMode::Individuals || (n.local[0] >= 'A' && n.local[0] <= 'Z'))
    return Individual{EntityName{default_ns, n.local}};
  return Variable{n.local};
}

struct ParsedAtom {
  Atom atom;
  RawName predicate;
};

/// `P(t)` or `p(t, u)`. An argument list cut off by the end of the line is
/// reported at its opening parenthesis.
inline ParsedAtom parse_atom(Cursor& c, TermMode mode, const std::string& doc_ns, bool individuals_in_predicate_ns) {
  ParsedAtom out;
  out.predicate = parse_name(c, "predicate");
  const std::string pred_ns = out.predicate.qualified ? out.predicate.ns : doc_ns;
  const std::string term_ns = individuals_in_predicate_ns ? pred_ns : doc_ns;
  c.skip_ws();
  const int paren = c.column();
  c.expect("(");
  std::vector<Term> args;
  for (;;) {
    if (c.done()) c.fail_at(paren, {")"}, "unclosed parenthesis");
    args.push_back(parse_term(c, mode, term_ns));
    if (c.accept(")")) break;
    if (args.size() == 2 && c.peek(",")) c.fail({")"}, "atoms take one or two arguments");
    if (c.accept(",")) continue;
    if (c.done()) c.fail_at(paren, {")"}, "unclosed parenthesis");
    c.fail({",", ")"}, "expected ',' or ')'");
  }
  const EntityName pred{pred_ns, out.predicate.local};
  out.atom = args.size() == 1 ? Atom{AtomKind::Class, pred, std::move(args)}
                              : Atom{AtomKind::Property, pred, std::move(args)};
  return out;
}

}  // namespace ontoflux::detail
