#include <gtest/gtest.h>

#include <sstream>

#include "adsm/error.hpp"
#include "adsm/report.hpp"
#include "generators.hpp"

using namespace adsm;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::size_t histogram_span(const Histograms& h) {
  int first = 1 << 30;
  int last = -(1 << 30);
  for (const auto* m : {&h.papers, &h.citations, &h.reads}) {
    if (m->empty()) continue;
    first = std::min(first, m->begin()->first);
    last = std::max(last, m->rbegin()->first);
  }
  return first > last ? 0 : static_cast<std::size_t>(last - first + 1);
}

}  // namespace

TEST(Render, JsonRoundTripIsLossless) {
  gen::Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    auto rep = gen::random_report(rng);
    auto doc = render(rep, ReportFormat::Json);
    ASSERT_EQ(parse_json_report(doc.payload), rep);
  }
}

TEST(Render, JsonKeepsAwkwardDoubles) {
  MetricsReport rep;
  rep.indicators.tori = 1.0 / 3.0;
  rep.indicators.read10 = 5e-324;
  rep.stats.normalized_papers = 0.1 + 0.2;
  rep.caveat = std::string(caveat_note());
  EXPECT_EQ(parse_json_report(render(rep, ReportFormat::Json).payload), rep);
}

TEST(Render, IsDeterministic) {
  gen::Rng rng(42);
  auto rep = gen::random_report(rng);
  for (auto f : {ReportFormat::Json, ReportFormat::Csv}) {
    EXPECT_EQ(render(rep, f).payload, render(rep, f).payload);
  }
}

TEST(Render, EmptyIndicatorsRenderAsZeros) {
  MetricsReport rep;
  rep.current_year = 2020;
  rep.caveat = std::string(caveat_note());
  auto csv = render(rep, ReportFormat::Csv).payload;
  EXPECT_NE(csv.find("h_index,0\n"), std::string::npos);
  EXPECT_NE(csv.find("tori,0\n"), std::string::npos);
  EXPECT_NE(csv.find("read10,0\n"), std::string::npos);
  EXPECT_EQ(csv.find(",\n"), std::string::npos);
  auto json = render(rep, ReportFormat::Json).payload;
  EXPECT_NE(json.find("\"tori\": 0.0"), std::string::npos);
}

TEST(Render, CsvLayout) {
  MetricsReport rep;
  rep.current_year = 2012;
  rep.stats.total_papers = 2;
  rep.stats.normalized_papers = 1.5;
  rep.indicators.tori = 0.05;
  rep.histograms.papers = {{2010, 1}, {2012, 1}};
  rep.histograms.reads = {{2011, 7}};
  rep.time_series = {{2010, 0, 0.0, 0.0}, {2011, 0, 0.0, 7.0}, {2012, 1, 0.05, 0.0}};
  rep.caveat = "Caveat emptor: a, b";
  auto doc = render(rep, ReportFormat::Csv);
  EXPECT_EQ(doc.caveat_footer, rep.caveat);
  auto expected =
      "#selection\n"
      "current_year,2012\n"
      "truncated,false\n"
      "#stats\n"
      "total_papers,2\n"
      "refereed_papers,0\n"
      "normalized_papers,1.5\n"
      "total_citations,0\n"
      "refereed_citations,0\n"
      "self_citations,0\n"
      "normalized_citations,0\n"
      "total_reads,0\n"
      "#indicators\n"
      "h_index,0\n"
      "g_index,0\n"
      "i10,0\n"
      "i100,0\n"
      "m_index,0\n"
      "tori,0.05\n"
      "read10,0\n"
      "#histograms\n"
      "year,papers,citations,reads\n"
      "2010,1,0,0\n"
      "2011,0,0,7\n"
      "2012,1,0,0\n"
      "#timeseries\n"
      "year,h_index,tori,read10\n"
      "2010,0,0,0\n"
      "2011,0,0,7\n"
      "2012,1,0.05,0\n"
      "#caveat\n"
      "\"Caveat emptor: a, b\"\n";
  EXPECT_EQ(doc.payload, expected);
}

TEST(Render, CsvRowCountFollowsYearSpans) {
  gen::Rng rng(43);
  for (int i = 0; i < 100; ++i) {
    auto rep = gen::random_report(rng);
    auto rows = lines(render(rep, ReportFormat::Csv).payload);
    EXPECT_EQ(rows.size(), kCsvFixedRows + histogram_span(rep.histograms) + rep.time_series.size());
  }
}

TEST(Render, NumbersUseDotDecimalsWithoutGrouping) {
  MetricsReport rep;
  rep.stats.total_reads = 123456789;
  rep.indicators.tori = 1234.5;
  auto csv = render(rep, ReportFormat::Csv).payload;
  EXPECT_NE(csv.find("total_reads,123456789\n"), std::string::npos);
  EXPECT_NE(csv.find("tori,1234.5\n"), std::string::npos);
}

TEST(Render, UnsupportedFormat) {
  EXPECT_EQ(parse_format("csv"), ReportFormat::Csv);
  try {
    parse_format("xlsx");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedFormat);
  }
}

TEST(Render, RejectsForeignJson) {
  EXPECT_THROW(parse_json_report("{\"tori\": 1}"), Error);
  EXPECT_THROW(parse_json_report("not json"), Error);
}

TEST(SearchJson, PagesIdsAndKeepsTotal) {
  ResultSet rs;
  rs.ids = {"a", "b", "c", "d", "e"};
  rs.total = 5;
  rs.facets["bibstem"] = {{"ApJ", 3}, {"AJ", 2}};
  auto j = to_json(rs, 1, 2);
  EXPECT_EQ(j["total"], 5);
  EXPECT_EQ(j["ids"], nlohmann::json::array({"b", "c"}));
  EXPECT_EQ(j["facets"]["bibstem"][0][0], "ApJ");
  EXPECT_EQ(to_json(rs, 10, 2)["ids"].size(), 0u);
}
