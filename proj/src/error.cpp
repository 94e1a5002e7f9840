#include "adsm/error.hpp"

namespace adsm {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::MalformedRecord: return "MalformedRecord";
    case ErrorKind::EmptyQuery: return "EmptyQuery";
    case ErrorKind::UnterminatedQuote: return "UnterminatedQuote";
    case ErrorKind::UnbalancedParentheses: return "UnbalancedParentheses";
    case ErrorKind::DanglingOperator: return "DanglingOperator";
    case ErrorKind::PureNegationQuery: return "PureNegationQuery";
    case ErrorKind::BadYearRange: return "BadYearRange";
    case ErrorKind::BadWildcard: return "BadWildcard";
    case ErrorKind::UnexpectedToken: return "UnexpectedToken";
    case ErrorKind::UnknownField: return "UnknownField";
    case ErrorKind::NotWithoutScope: return "NotWithoutScope";
    case ErrorKind::EmptySelection: return "EmptySelection";
    case ErrorKind::UnknownId: return "UnknownId";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::StoreUnwritable: return "StoreUnwritable";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

bool is_parse_error(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::EmptyQuery:
    case ErrorKind::UnterminatedQuote:
    case ErrorKind::UnbalancedParentheses:
    case ErrorKind::DanglingOperator:
    case ErrorKind::PureNegationQuery:
    case ErrorKind::BadYearRange:
    case ErrorKind::BadWildcard:
    case ErrorKind::UnexpectedToken:
      return true;
    default:
      return false;
  }
}

}  // namespace adsm
