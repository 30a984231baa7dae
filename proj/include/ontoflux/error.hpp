#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ontoflux {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ONTOFLUX_DEFINE_ERROR(Name)          \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

// kb-core
ONTOFLUX_DEFINE_ERROR(MalformedItem);
ONTOFLUX_DEFINE_ERROR(PreconditionFailed);
// temporal-kb
ONTOFLUX_DEFINE_ERROR(UnsortedLog);
// mfrag
ONTOFLUX_DEFINE_ERROR(InvalidFragment);
// prob-merge
ONTOFLUX_DEFINE_ERROR(OutOfRange);
ONTOFLUX_DEFINE_ERROR(EmptyList);
ONTOFLUX_DEFINE_ERROR(NamespaceClash);
ONTOFLUX_DEFINE_ERROR(UnsafeQuery);
// regimes-des
ONTOFLUX_DEFINE_ERROR(NonPositiveRate);
ONTOFLUX_DEFINE_ERROR(NegativeAdjustment);
ONTOFLUX_DEFINE_ERROR(InvalidConfig);
// monitor
ONTOFLUX_DEFINE_ERROR(StaleEvent);
// cli-io
ONTOFLUX_DEFINE_ERROR(UnresolvedName);
ONTOFLUX_DEFINE_ERROR(ProbabilityOutOfRange);

#undef ONTOFLUX_DEFINE_ERROR

/// Raised by the text parsers. Line and column are 1-based; column counts bytes.
class ParseError : public Error {
 public:
  ParseError(int line, int column, std::vector<std::string> expected, const std::string& message);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

/// Thrown by validate_upper_ontology; lists the absent structural axioms.
class MissingAxiom : public Error {
 public:
  explicit MissingAxiom(std::vector<std::string> missing);
  const std::vector<std::string>& missing() const noexcept { return missing_; }

 private:
  std::vector<std::string> missing_;
};

}  // namespace ontoflux
