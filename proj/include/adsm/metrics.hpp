#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "adsm/corpus.hpp"
#include "adsm/evaluator.hpp"

namespace adsm {

inline constexpr std::size_t kDefaultSelectionCap = 3000;

struct Selection {
  std::vector<std::string> ids;
  std::size_t available = 0;  // size before the cap was applied
  bool truncated = false;
};

/// First min(total, cap) ids of the result set, in result order.
Selection select_for_metrics(const ResultSet& result, std::size_t cap = kDefaultSelectionCap);

/// Same rule for an explicit id list. Repeated ids are dropped (first
/// occurrence kept) before the cap is applied.
Selection select_for_metrics(std::span<const std::string> ids,
                             std::size_t cap = kDefaultSelectionCap);

/// True iff the normalized author sets of the two records intersect.
bool is_self_citation(const Record& citing, const Record& cited);

/// Sum over articles i and their non-self citations c of 1 / (a_i * n_c),
/// with a_i the author count of i and n_c the full length of c's reference
/// list. Citing records with an empty reference list contribute nothing.
/// Summation runs in ascending article id, then ascending citing id.
double tori(std::span<const DocIndex> docs, const Corpus& corpus, const CitationGraph& graph);

/// Sum over papers published in [current_year - 9, current_year] of their
/// current_year reads divided by author count.
double read10(std::span<const DocIndex> docs, const Corpus& corpus, int current_year);

std::size_t h_index(std::span<const DocIndex> docs, const CitationGraph& graph);

struct AuxIndicators {
  std::size_t g = 0;
  std::size_t i10 = 0;
  std::size_t i100 = 0;
  double m = 0.0;
};

AuxIndicators aux_indicators(std::span<const DocIndex> docs, const CitationGraph& graph,
                             const Corpus& corpus, int current_year);

// Citation-count forms, handy when counts come from elsewhere.
std::size_t h_index_of(std::vector<std::size_t> citation_counts);
std::size_t g_index_of(std::vector<std::size_t> citation_counts);

struct Histograms {
  std::map<int, std::uint64_t> papers;     // by publication year
  std::map<int, std::uint64_t> citations;  // by citing paper's year
  std::map<int, std::uint64_t> reads;      // by reads year

  friend bool operator==(const Histograms&, const Histograms&) = default;
};

Histograms histograms(std::span<const DocIndex> docs, const Corpus& corpus,
                      const CitationGraph& graph);

struct TimeSeriesRow {
  int year = 0;
  std::size_t h_index = 0;
  double tori = 0.0;
  double read10 = 0.0;

  friend bool operator==(const TimeSeriesRow&, const TimeSeriesRow&) = default;
};

/// One row per year from the earliest selected publication year through
/// current_year. Row t only sees papers and citing papers dated <= t, and
/// evaluates read10 with current year t. Throws Error(EmptySelection).
std::vector<TimeSeriesRow> time_series(std::span<const DocIndex> docs, const Corpus& corpus,
                                       const CitationGraph& graph, int current_year);

struct Stats {
  std::size_t total_papers = 0;
  std::size_t refereed_papers = 0;
  double normalized_papers = 0.0;
  std::size_t total_citations = 0;
  std::size_t refereed_citations = 0;
  std::size_t self_citations = 0;
  double normalized_citations = 0.0;
  std::uint64_t total_reads = 0;

  friend bool operator==(const Stats&, const Stats&) = default;
};

struct Indicators {
  std::size_t h_index = 0;
  std::size_t g_index = 0;
  std::size_t i10 = 0;
  std::size_t i100 = 0;
  double m_index = 0.0;
  double tori = 0.0;
  double read10 = 0.0;

  friend bool operator==(const Indicators&, const Indicators&) = default;
};

std::string_view caveat_note();

struct MetricsReport {
  int current_year = 0;
  bool truncated = false;
  Stats stats;
  Indicators indicators;
  Histograms histograms;
  std::vector<TimeSeriesRow> time_series;
  std::string caveat;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Assembles the full overview. Throws Error(EmptySelection) for no docs.
MetricsReport metrics_report(std::span<const DocIndex> docs, const Corpus& corpus,
                             const CitationGraph& graph, int current_year);

/// Resolves the selection's ids and carries its truncation flag over.
MetricsReport metrics_report(const Selection& selection, const Corpus& corpus,
                             const CitationGraph& graph, int current_year);

}  // namespace adsm
