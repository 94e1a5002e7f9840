#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adsm/corpus.hpp"
#include "adsm/metrics.hpp"

namespace adsm {

// ---------------------------------------------------------------------------
// Developer tokens
// ---------------------------------------------------------------------------

struct DeveloperToken {
  std::string token;  // 128 random bits, base64url without padding
  std::string label;
  std::int64_t created_at = 0;  // unix seconds

  friend bool operator==(const DeveloperToken&, const DeveloperToken&) = default;
};

/// Compares in time that depends only on the lengths of the inputs.
bool constant_time_equal(std::string_view a, std::string_view b) noexcept;

/// Snapshot of a token store file (one JSON object per line). Immutable once
/// loaded, so lookups need no locking.
class TokenStore {
 public:
  TokenStore() = default;
  explicit TokenStore(std::vector<DeveloperToken> tokens) : tokens_(std::move(tokens)) {}

  /// A missing file loads as an empty store.
  static TokenStore load(const std::filesystem::path& path);

  const std::vector<DeveloperToken>& tokens() const { return tokens_; }

  /// Checks every stored token so the scan cost does not depend on which
  /// (if any) token matched.
  bool verify(std::string_view token) const;

 private:
  std::vector<DeveloperToken> tokens_;
};

/// Generates a fresh token and appends it to the store file. Issuance is
/// serialized within the process. Throws Error(StoreUnwritable).
DeveloperToken issue_token(const std::filesystem::path& store, std::string label);

// ---------------------------------------------------------------------------
// HTTP handlers
// ---------------------------------------------------------------------------

struct ServiceOptions {
  std::size_t default_cap = kDefaultSelectionCap;
  std::size_t default_rows = 10;
  std::size_t max_rows = 200;
  std::optional<int> current_year;  // defaults to Corpus::latest_year()
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Request handlers over one corpus snapshot. Handlers are const and may run
/// concurrently; responses depend only on the snapshot and the request.
class Service {
 public:
  Service(Corpus corpus, TokenStore tokens, ServiceOptions options = {});

  /// GET /search?q=&start=&rows=
  HttpResponse handle_search(std::string_view authorization, const std::optional<std::string>& q,
                             const std::optional<std::string>& start,
                             const std::optional<std::string>& rows) const;

  /// POST /metrics with {"query": "..."} or {"ids": [...]}, optional "cap",
  /// "current_year" and "format".
  HttpResponse handle_metrics(std::string_view authorization, std::string_view body) const;

  /// GET /healthz (no auth)
  HttpResponse handle_healthz() const;

  const Corpus& corpus() const { return corpus_; }
  const CitationGraph& graph() const { return graph_; }
  int current_year() const { return current_year_; }

 private:
  bool authorized(std::string_view authorization) const;

  Corpus corpus_;
  CitationGraph graph_;
  TokenStore tokens_;
  ServiceOptions options_;
  int current_year_;
};

/// Binds a Service to an HTTP listener.
class HttpServer {
 public:
  explicit HttpServer(const Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port, or -1 on failure.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace adsm
