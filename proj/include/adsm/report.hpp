#pragma once

#include <string>
#include <string_view>

#include "adsm/evaluator.hpp"
#include "adsm/metrics.hpp"
#include "json.hpp"

namespace adsm {

enum class ReportFormat { Json, Csv };

/// "json" or "csv"; anything else throws Error(UnsupportedFormat).
ReportFormat parse_format(std::string_view name);
std::string_view to_string(ReportFormat format);

struct ReportDocument {
  ReportFormat format = ReportFormat::Json;
  std::string payload;
  std::string caveat_footer;
};

/// Byte-deterministic rendering. The JSON form is lossless (see
/// parse_json_report); the CSV form is sectioned:
///
///   #selection / #stats / #indicators   key,value rows
///   #histograms                         year,papers,citations,reads
///   #timeseries                         year,h_index,tori,read10
///   #caveat                             the caveat note
///
/// Histogram rows cover every year between the first and last year present
/// in any of the three maps, zero-filled.
ReportDocument render(const MetricsReport& report, ReportFormat format);

/// Inverse of the JSON rendering.
MetricsReport parse_json_report(std::string_view payload);

nlohmann::json to_json(const MetricsReport& report);
MetricsReport metrics_report_from_json(const nlohmann::json& doc);

/// Search response body: total, start, rows, ids page and facets.
nlohmann::json to_json(const ResultSet& result, std::size_t start, std::size_t rows);

/// Number of CSV rows that do not depend on the year spans.
inline constexpr std::size_t kCsvFixedRows = 26;

}  // namespace adsm
