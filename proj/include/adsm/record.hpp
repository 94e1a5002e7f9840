#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace adsm {

inline constexpr int kMinYear = 1500;
inline constexpr int kMaxYear = 2200;

/// One bibliographic item. Author names, properties and database tags are
/// stored normalized; bibstem and page keep their original spelling.
struct Record {
  std::string id;
  std::vector<std::string> authors;
  int year = 0;
  std::string bibstem;
  std::string page;
  std::string title;
  std::string abstract;
  std::optional<std::string> body;
  std::set<std::string> properties;
  std::set<std::string> databases;
  /// As written, including identifiers missing from the corpus.
  std::vector<std::string> references;
  /// year -> readership count; absent years read as zero.
  std::map<int, std::uint64_t> reads;

  bool is_refereed() const { return properties.contains("refereed"); }
  std::uint64_t reads_in(int y) const;

  friend bool operator==(const Record&, const Record&) = default;
};

/// Trim, collapse internal whitespace runs to one space, ASCII case-fold.
std::string normalize_author(std::string_view name);

/// Lowercase and collapse whitespace; used for query values and flags.
std::string fold_value(std::string_view value);

/// Checks the record invariants (non-empty authors, year range, unique
/// references, reads keys in range). Throws Error(MalformedRecord).
void validate(const Record& record);

/// Parses one line-delimited JSON record document. Unknown fields are
/// ignored. Throws Error(MalformedRecord) on missing or ill-typed fields.
Record parse_record_document(std::string_view line);

/// Inverse of parse_record_document (normalized form, one line, no newline).
std::string to_record_document(const Record& record);

}  // namespace adsm
