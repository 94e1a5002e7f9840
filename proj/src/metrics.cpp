#include "adsm/metrics.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <unordered_set>

#include "adsm/error.hpp"

namespace adsm {

namespace {

constexpr int kNoLimit = INT_MAX;

std::vector<DocIndex> canonical(std::span<const DocIndex> docs) {
  std::vector<DocIndex> v(docs.begin(), docs.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::size_t citations_upto(DocIndex i, const Corpus& corpus, const CitationGraph& graph,
                           int limit) {
  if (limit == kNoLimit) return graph.citation_count(i);
  return static_cast<std::size_t>(std::count_if(
      graph.cited_by[i].begin(), graph.cited_by[i].end(),
      [&](DocIndex c) { return corpus.record(c).year <= limit; }));
}

std::vector<std::size_t> citation_counts(const std::vector<DocIndex>& docs, const Corpus& corpus,
                                         const CitationGraph& graph, int limit) {
  std::vector<std::size_t> counts;
  counts.reserve(docs.size());
  for (auto i : docs) {
    if (corpus.record(i).year <= limit) counts.push_back(citations_upto(i, corpus, graph, limit));
  }
  return counts;
}

double tori_upto(const std::vector<DocIndex>& docs, const Corpus& corpus,
                 const CitationGraph& graph, int limit) {
  double sum = 0.0;
  for (auto i : docs) {
    const auto& article = corpus.record(i);
    if (article.year > limit) continue;
    const double authors = static_cast<double>(article.authors.size());
    for (auto c : graph.cited_by[i]) {
      const auto& citing = corpus.record(c);
      if (citing.year > limit || citing.references.empty()) continue;
      if (is_self_citation(citing, article)) continue;
      sum += 1.0 / (authors * static_cast<double>(citing.references.size()));
    }
  }
  return sum;
}

double read10_sorted(const std::vector<DocIndex>& docs, const Corpus& corpus, int current_year) {
  double sum = 0.0;
  for (auto i : docs) {
    const auto& r = corpus.record(i);
    if (r.year > current_year || r.year < current_year - 9) continue;
    sum += static_cast<double>(r.reads_in(current_year)) / static_cast<double>(r.authors.size());
  }
  return sum;
}

int earliest_year(const std::vector<DocIndex>& docs, const Corpus& corpus) {
  int earliest = INT_MAX;
  for (auto i : docs) earliest = std::min(earliest, corpus.record(i).year);
  return earliest;
}

}  // namespace

Selection select_for_metrics(const ResultSet& result, std::size_t cap) {
  if (cap == 0) cap = 1;
  Selection s;
  s.available = result.ids.size();
  s.truncated = s.available > cap;
  auto take = std::min(s.available, cap);
  s.ids.assign(result.ids.begin(), result.ids.begin() + static_cast<std::ptrdiff_t>(take));
  return s;
}

Selection select_for_metrics(std::span<const std::string> ids, std::size_t cap) {
  if (cap == 0) cap = 1;
  Selection s;
  std::unordered_set<std::string_view> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) continue;
    ++s.available;
    if (s.ids.size() < cap) s.ids.push_back(id);
  }
  s.truncated = s.available > cap;
  return s;
}

bool is_self_citation(const Record& citing, const Record& cited) {
  for (const auto& a : citing.authors) {
    if (std::find(cited.authors.begin(), cited.authors.end(), a) != cited.authors.end()) {
      return true;
    }
  }
  return false;
}

double tori(std::span<const DocIndex> docs, const Corpus& corpus, const CitationGraph& graph) {
  return tori_upto(canonical(docs), corpus, graph, kNoLimit);
}

double read10(std::span<const DocIndex> docs, const Corpus& corpus, int current_year) {
  return read10_sorted(canonical(docs), corpus, current_year);
}

std::size_t h_index_of(std::vector<std::size_t> counts) {
  std::sort(counts.begin(), counts.end(), std::greater<>());
  std::size_t h = 0;
  while (h < counts.size() && counts[h] >= h + 1) ++h;
  return h;
}

std::size_t g_index_of(std::vector<std::size_t> counts) {
  std::sort(counts.begin(), counts.end(), std::greater<>());
  std::size_t g = 0;
  std::uint64_t running = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    running += counts[k];
    const std::uint64_t rank = k + 1;
    if (running >= rank * rank) g = k + 1;
  }
  return g;
}

std::size_t h_index(std::span<const DocIndex> docs, const CitationGraph& graph) {
  std::vector<std::size_t> counts;
  for (auto i : canonical(docs)) counts.push_back(graph.citation_count(i));
  return h_index_of(std::move(counts));
}

AuxIndicators aux_indicators(std::span<const DocIndex> docs, const CitationGraph& graph,
                             const Corpus& corpus, int current_year) {
  auto sorted = canonical(docs);
  auto counts = citation_counts(sorted, corpus, graph, kNoLimit);
  AuxIndicators aux;
  aux.g = g_index_of(counts);
  for (auto c : counts) {
    if (c >= 10) ++aux.i10;
    if (c >= 100) ++aux.i100;
  }
  if (!sorted.empty()) {
    const int span = current_year - earliest_year(sorted, corpus) + 1;
    if (span > 0) aux.m = static_cast<double>(h_index_of(counts)) / span;
  }
  return aux;
}

Histograms histograms(std::span<const DocIndex> docs, const Corpus& corpus,
                      const CitationGraph& graph) {
  Histograms h;
  for (auto i : canonical(docs)) {
    const auto& r = corpus.record(i);
    ++h.papers[r.year];
    for (auto c : graph.cited_by[i]) ++h.citations[corpus.record(c).year];
    for (const auto& [year, n] : r.reads) h.reads[year] += n;
  }
  return h;
}

std::vector<TimeSeriesRow> time_series(std::span<const DocIndex> docs, const Corpus& corpus,
                                       const CitationGraph& graph, int current_year) {
  auto sorted = canonical(docs);
  if (sorted.empty()) throw Error(ErrorKind::EmptySelection, "no records selected");
  std::vector<TimeSeriesRow> rows;
  for (int t = earliest_year(sorted, corpus); t <= current_year; ++t) {
    TimeSeriesRow row;
    row.year = t;
    row.h_index = h_index_of(citation_counts(sorted, corpus, graph, t));
    row.tori = tori_upto(sorted, corpus, graph, t);
    row.read10 = read10_sorted(sorted, corpus, t);
    rows.push_back(row);
  }
  return rows;
}

std::string_view caveat_note() {
  return "Caveat emptor: figures cover only records and citations present in this corpus. "
         "Author names are matched exactly, without disambiguation. "
         "Citations are counted regardless of intent, and field-dependent citation practices "
         "are not corrected for.";
}

MetricsReport metrics_report(std::span<const DocIndex> docs, const Corpus& corpus,
                             const CitationGraph& graph, int current_year) {
  auto sorted = canonical(docs);
  if (sorted.empty()) throw Error(ErrorKind::EmptySelection, "no records selected");

  MetricsReport rep;
  rep.current_year = current_year;

  auto& s = rep.stats;
  s.total_papers = sorted.size();
  for (auto i : sorted) {
    const auto& r = corpus.record(i);
    const double authors = static_cast<double>(r.authors.size());
    if (r.is_refereed()) ++s.refereed_papers;
    s.normalized_papers += 1.0 / authors;
    s.total_citations += graph.citation_count(i);
    s.normalized_citations += static_cast<double>(graph.citation_count(i)) / authors;
    for (auto c : graph.cited_by[i]) {
      const auto& citing = corpus.record(c);
      if (citing.is_refereed()) ++s.refereed_citations;
      if (is_self_citation(citing, r)) ++s.self_citations;
    }
    for (const auto& [year, n] : r.reads) {
      (void)year;
      s.total_reads += n;
    }
  }

  auto& ind = rep.indicators;
  ind.h_index = h_index(sorted, graph);
  auto aux = aux_indicators(sorted, graph, corpus, current_year);
  ind.g_index = aux.g;
  ind.i10 = aux.i10;
  ind.i100 = aux.i100;
  ind.m_index = aux.m;
  ind.tori = tori_upto(sorted, corpus, graph, kNoLimit);
  ind.read10 = read10_sorted(sorted, corpus, current_year);

  rep.histograms = histograms(sorted, corpus, graph);
  rep.time_series = time_series(sorted, corpus, graph, current_year);
  rep.caveat = std::string(caveat_note());
  return rep;
}

MetricsReport metrics_report(const Selection& selection, const Corpus& corpus,
                             const CitationGraph& graph, int current_year) {
  auto docs = corpus.resolve(selection.ids);
  auto rep = metrics_report(docs, corpus, graph, current_year);
  rep.truncated = selection.truncated;
  return rep;
}

}  // namespace adsm
