#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "adsm/error.hpp"
#include "adsm/record.hpp"

namespace adsm {

/// Position of a record inside a Corpus. Records are stored sorted by id, so
/// ascending DocIndex order is ascending id order.
using DocIndex = std::uint32_t;

/// Sorted, duplicate-free set of record positions.
using DocSet = std::vector<DocIndex>;

/// Splits text on non-alphanumeric ASCII boundaries and lowercases. Bytes
/// outside ASCII are kept inside tokens.
std::vector<std::string> tokenize_text(std::string_view text);

enum class TextField { Title, Abstract, Body };

struct Posting {
  DocIndex doc;
  std::vector<std::uint32_t> positions;
};

/// Positional inverted index over one text field. Terms are kept ordered so
/// that prefix lookups are a range scan.
class TextIndex {
 public:
  using PostingList = std::vector<Posting>;

  void add(DocIndex doc, std::string_view text);

  const PostingList* find(const std::string& term) const;

  /// Every (term, postings) pair whose term starts with `prefix`.
  std::vector<const PostingList*> with_prefix(const std::string& prefix) const;

  std::size_t term_count() const { return terms_.size(); }

 private:
  std::map<std::string, PostingList, std::less<>> terms_;
};

/// Exact-value lookup over a keyword field (author names, bibstems, ...).
class KeywordIndex {
 public:
  void add(DocIndex doc, const std::string& key);

  DocSet equal(const std::string& key) const;
  DocSet with_prefix(const std::string& prefix) const;

 private:
  std::map<std::string, DocSet, std::less<>> keys_;
};

struct IngestIssue {
  std::size_t line = 0;  // 1-based document position in the input stream
  ErrorKind kind = ErrorKind::MalformedRecord;
  std::string message;
};

struct IngestReport {
  std::size_t accepted = 0;
  std::vector<IngestIssue> rejects;

  std::size_t rejected() const { return rejects.size(); }
};

/// Immutable ingested collection with its search indexes.
class Corpus {
 public:
  Corpus() = default;

  /// Reads one JSON record document per line. Blank lines are skipped.
  /// Bad documents are rejected individually and listed in report().
  static Corpus ingest(std::istream& documents);
  static Corpus ingest(std::span<const std::string> documents);
  static Corpus ingest_file(const std::string& path);

  /// Same acceptance rules, starting from already-built records.
  static Corpus from_records(std::vector<Record> records);

  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const std::vector<Record>& records() const { return records_; }
  const Record& record(DocIndex i) const { return records_[i]; }
  std::optional<DocIndex> find(std::string_view id) const;
  const IngestReport& report() const { return report_; }

  const TextIndex& text(TextField f) const { return text_[static_cast<int>(f)]; }
  const KeywordIndex& authors() const { return authors_; }
  const KeywordIndex& first_authors() const { return first_authors_; }
  const KeywordIndex& bibstems() const { return bibstems_; }
  const KeywordIndex& pages() const { return pages_; }
  const KeywordIndex& properties() const { return properties_; }
  const KeywordIndex& databases() const { return databases_; }
  const std::map<int, DocSet>& years() const { return years_; }

  /// Largest year appearing as a publication year or a reads key; 0 if empty.
  int latest_year() const;

  /// Maps ids to positions, throwing Error(UnknownId) for ids not present.
  std::vector<DocIndex> resolve(std::span<const std::string> ids) const;

  /// Structural equality over the stored records.
  friend bool operator==(const Corpus& a, const Corpus& b) { return a.records_ == b.records_; }

 private:
  struct Candidate {
    std::size_t line;
    Record record;
  };
  static Corpus build(std::vector<Candidate> candidates, IngestReport report);

  std::vector<Record> records_;
  std::unordered_map<std::string, DocIndex> by_id_;
  IngestReport report_;
  TextIndex text_[3];
  KeywordIndex authors_, first_authors_, bibstems_, pages_, properties_, databases_;
  std::map<int, DocSet> years_;
};

/// Resolvable citation edges. Both directions hold sorted in-corpus positions.
struct CitationGraph {
  std::vector<DocSet> citing;    // citing[a]: records a references
  std::vector<DocSet> cited_by;  // cited_by[a]: records referencing a
  std::size_t dangling = 0;      // references to ids absent from the corpus

  std::size_t citation_count(DocIndex i) const { return cited_by[i].size(); }

  friend bool operator==(const CitationGraph&, const CitationGraph&) = default;
};

CitationGraph build_citation_graph(const Corpus& corpus);

}  // namespace adsm
