#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "adsm/metrics.hpp"
#include "adsm/report.hpp"

namespace adsm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Environment variables consulted when the matching flag is absent.
inline constexpr const char* kCorpusEnv = "ADSM_CORPUS";
inline constexpr const char* kTokenStoreEnv = "ADSM_TOKEN_STORE";

struct CliConfig {
  std::string corpus_path;
  std::string token_store_path = "adsm_tokens.jsonl";
  std::size_t cap = kDefaultSelectionCap;
  std::optional<int> current_year;
  ReportFormat format = ReportFormat::Json;
  std::string output_path;
};

/// Runs one command line (without the program name). Returns 0 on success,
/// 1 on usage errors (including malformed queries), 2 on data errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adsm
