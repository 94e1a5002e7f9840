#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adsm/corpus.hpp"
#include "adsm/query.hpp"

namespace adsm {

using FacetCount = std::pair<std::string, std::size_t>;

/// Fields that facet_counts accepts.
inline constexpr std::string_view kFacetFields[] = {"bibstem", "year", "property"};

struct ResultSet {
  std::vector<std::string> ids;  // year descending, then id ascending
  std::size_t total = 0;
  std::map<std::string, std::vector<FacetCount>> facets;

  friend bool operator==(const ResultSet&, const ResultSet&) = default;
};

/// Evaluates parsed queries against a corpus and its citation graph. Holds
/// references only; both must outlive the evaluator. Safe to share between
/// threads.
class Evaluator {
 public:
  Evaluator(const Corpus& corpus, const CitationGraph& graph) : corpus_(corpus), graph_(graph) {}

  /// Matching record positions in ascending id order.
  DocSet match(const QueryAst& ast) const;

  /// Matches ordered for presentation, with bibstem/year/property facets.
  ResultSet evaluate(const QueryAst& ast) const;

  /// Same ordering rule as evaluate(), for an arbitrary set of positions.
  std::vector<DocIndex> presentation_order(const DocSet& docs) const;

 private:
  DocSet match_term(const QueryNode& term) const;
  DocSet match_text(TextField field, const QueryNode& term) const;
  DocSet match_conjunction(const QueryNode& node) const;

  const Corpus& corpus_;
  const CitationGraph& graph_;
};

ResultSet evaluate(const QueryAst& ast, const Corpus& corpus, const CitationGraph& graph);

/// Records citing any member of `inner` (union of cited_by).
DocSet op_citations(const DocSet& inner, const CitationGraph& graph);

/// In-corpus records referenced by any member of `inner`, resolved from the
/// records' own reference lists.
DocSet op_references(const DocSet& inner, const Corpus& corpus);

/// Multiplicity tally of a field over `docs`, sorted by count descending and
/// then value ascending. Throws Error(UnknownField) for fields outside
/// kFacetFields.
std::vector<FacetCount> facet_counts(std::span<const DocIndex> docs, const Corpus& corpus,
                                     std::string_view field);

}  // namespace adsm
