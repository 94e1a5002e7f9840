#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adsm {

enum class ErrorKind {
  // ingest
  DuplicateId,
  MalformedRecord,
  // query parsing
  EmptyQuery,
  UnterminatedQuote,
  UnbalancedParentheses,
  DanglingOperator,
  PureNegationQuery,
  BadYearRange,
  BadWildcard,
  UnexpectedToken,
  // evaluation
  UnknownField,
  NotWithoutScope,
  // metrics / selection
  EmptySelection,
  UnknownId,
  // report / service / io
  UnsupportedFormat,
  StoreUnwritable,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for the kinds raised by the query tokenizer and parser.
bool is_parse_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace adsm
