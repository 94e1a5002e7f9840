#include "adsm/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <climits>

#include "adsm/error.hpp"

namespace adsm {

using nlohmann::json;

ReportFormat parse_format(std::string_view name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw Error(ErrorKind::UnsupportedFormat, "unsupported report format '" + std::string(name) + "'");
}

std::string_view to_string(ReportFormat format) {
  return format == ReportFormat::Json ? "json" : "csv";
}

namespace {

json year_map(const std::map<int, std::uint64_t>& m) {
  json out = json::object();
  for (const auto& [year, n] : m) out[std::to_string(year)] = n;
  return out;
}

std::map<int, std::uint64_t> year_map_from(const json& j) {
  std::map<int, std::uint64_t> out;
  for (const auto& [key, value] : j.items()) out[std::stoi(key)] = value.get<std::uint64_t>();
  return out;
}

// Shortest representation that reads back to the same double; always '.'
// as decimal separator regardless of locale.
std::string number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

std::string number(std::uint64_t v) { return std::to_string(v); }

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::string render_csv(const MetricsReport& r) {
  std::string out;
  auto row = [&out](std::string_view key, const std::string& value) {
    out.append(key).append(",").append(value).append("\n");
  };

  out += "#selection\n";
  row("current_year", std::to_string(r.current_year));
  row("truncated", r.truncated ? "true" : "false");

  const auto& s = r.stats;
  out += "#stats\n";
  row("total_papers", number(std::uint64_t{s.total_papers}));
  row("refereed_papers", number(std::uint64_t{s.refereed_papers}));
  row("normalized_papers", number(s.normalized_papers));
  row("total_citations", number(std::uint64_t{s.total_citations}));
  row("refereed_citations", number(std::uint64_t{s.refereed_citations}));
  row("self_citations", number(std::uint64_t{s.self_citations}));
  row("normalized_citations", number(s.normalized_citations));
  row("total_reads", number(s.total_reads));

  const auto& ind = r.indicators;
  out += "#indicators\n";
  row("h_index", number(std::uint64_t{ind.h_index}));
  row("g_index", number(std::uint64_t{ind.g_index}));
  row("i10", number(std::uint64_t{ind.i10}));
  row("i100", number(std::uint64_t{ind.i100}));
  row("m_index", number(ind.m_index));
  row("tori", number(ind.tori));
  row("read10", number(ind.read10));

  out += "#histograms\nyear,papers,citations,reads\n";
  const auto& h = r.histograms;
  int first = INT_MAX;
  int last = INT_MIN;
  for (const auto* m : {&h.papers, &h.citations, &h.reads}) {
    if (m->empty()) continue;
    first = std::min(first, m->begin()->first);
    last = std::max(last, m->rbegin()->first);
  }
  auto at = [](const std::map<int, std::uint64_t>& m, int y) {
    auto it = m.find(y);
    return it == m.end() ? std::uint64_t{0} : it->second;
  };
  for (int y = first; first != INT_MAX && y <= last; ++y) {
    out += std::to_string(y) + "," + number(at(h.papers, y)) + "," + number(at(h.citations, y)) +
           "," + number(at(h.reads, y)) + "\n";
  }

  out += "#timeseries\nyear,h_index,tori,read10\n";
  for (const auto& t : r.time_series) {
    out += std::to_string(t.year) + "," + number(std::uint64_t{t.h_index}) + "," +
           number(t.tori) + "," + number(t.read10) + "\n";
  }

  out += "#caveat\n" + quote(r.caveat) + "\n";
  return out;
}

}  // namespace

json to_json(const MetricsReport& r) {
  json j;
  j["current_year"] = r.current_year;
  j["truncated"] = r.truncated;
  const auto& s = r.stats;
  j["stats"] = {{"total_papers", s.total_papers},
                {"refereed_papers", s.refereed_papers},
                {"normalized_papers", s.normalized_papers},
                {"total_citations", s.total_citations},
                {"refereed_citations", s.refereed_citations},
                {"self_citations", s.self_citations},
                {"normalized_citations", s.normalized_citations},
                {"total_reads", s.total_reads}};
  const auto& ind = r.indicators;
  j["indicators"] = {{"h_index", ind.h_index}, {"g_index", ind.g_index}, {"i10", ind.i10},
                     {"i100", ind.i100},       {"m_index", ind.m_index}, {"tori", ind.tori},
                     {"read10", ind.read10}};
  j["histograms"] = {{"papers", year_map(r.histograms.papers)},
                     {"citations", year_map(r.histograms.citations)},
                     {"reads", year_map(r.histograms.reads)}};
  json series = json::array();
  for (const auto& t : r.time_series) {
    series.push_back({{"year", t.year}, {"h_index", t.h_index}, {"tori", t.tori},
                      {"read10", t.read10}});
  }
  j["time_series"] = std::move(series);
  j["caveat"] = r.caveat;
  return j;
}

MetricsReport metrics_report_from_json(const json& j) {
  MetricsReport r;
  try {
    r.current_year = j.at("current_year").get<int>();
    r.truncated = j.at("truncated").get<bool>();
    const auto& s = j.at("stats");
    r.stats.total_papers = s.at("total_papers").get<std::size_t>();
    r.stats.refereed_papers = s.at("refereed_papers").get<std::size_t>();
    r.stats.normalized_papers = s.at("normalized_papers").get<double>();
    r.stats.total_citations = s.at("total_citations").get<std::size_t>();
    r.stats.refereed_citations = s.at("refereed_citations").get<std::size_t>();
    r.stats.self_citations = s.at("self_citations").get<std::size_t>();
    r.stats.normalized_citations = s.at("normalized_citations").get<double>();
    r.stats.total_reads = s.at("total_reads").get<std::uint64_t>();
    const auto& ind = j.at("indicators");
    r.indicators.h_index = ind.at("h_index").get<std::size_t>();
    r.indicators.g_index = ind.at("g_index").get<std::size_t>();
    r.indicators.i10 = ind.at("i10").get<std::size_t>();
    r.indicators.i100 = ind.at("i100").get<std::size_t>();
    r.indicators.m_index = ind.at("m_index").get<double>();
    r.indicators.tori = ind.at("tori").get<double>();
    r.indicators.read10 = ind.at("read10").get<double>();
    const auto& h = j.at("histograms");
    r.histograms.papers = year_map_from(h.at("papers"));
    r.histograms.citations = year_map_from(h.at("citations"));
    r.histograms.reads = year_map_from(h.at("reads"));
    for (const auto& t : j.at("time_series")) {
      r.time_series.push_back(TimeSeriesRow{t.at("year").get<int>(),
                                            t.at("h_index").get<std::size_t>(),
                                            t.at("tori").get<double>(),
                                            t.at("read10").get<double>()});
    }
    r.caveat = j.at("caveat").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::UnsupportedFormat, std::string("not a metrics report: ") + e.what());
  }
  return r;
}

MetricsReport parse_json_report(std::string_view payload) {
  json j;
  try {
    j = json::parse(payload);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::UnsupportedFormat, std::string("invalid JSON: ") + e.what());
  }
  return metrics_report_from_json(j);
}

ReportDocument render(const MetricsReport& report, ReportFormat format) {
  ReportDocument doc;
  doc.format = format;
  doc.caveat_footer = report.caveat;
  switch (format) {
    case ReportFormat::Json: doc.payload = to_json(report).dump(2) + "\n"; break;
    case ReportFormat::Csv: doc.payload = render_csv(report); break;
  }
  return doc;
}

json to_json(const ResultSet& result, std::size_t start, std::size_t rows) {
  json j;
  j["total"] = result.total;
  j["start"] = start;
  j["rows"] = rows;
  json ids = json::array();
  for (std::size_t i = start; i < result.ids.size() && i < start + rows; ++i) {
    ids.push_back(result.ids[i]);
  }
  j["ids"] = std::move(ids);
  json facets = json::object();
  for (const auto& [field, counts] : result.facets) {
    json list = json::array();
    for (const auto& [value, count] : counts) list.push_back({value, count});
    facets[field] = std::move(list);
  }
  j["facets"] = std::move(facets);
  return j;
}

}  // namespace adsm
