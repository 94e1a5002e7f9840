#include "adsm/service.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <fstream>
#include <mutex>
#include <random>

#include "adsm/error.hpp"
#include "adsm/evaluator.hpp"
#include "adsm/query.hpp"
#include "adsm/report.hpp"
#include "httplib.h"
#include "json.hpp"

namespace adsm {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Tokens

bool constant_time_equal(std::string_view a, std::string_view b) noexcept {
  const std::size_t n = std::max(a.size(), b.size());
  unsigned diff = a.size() == b.size() ? 0u : 1u;
  for (std::size_t i = 0; i < n; ++i) {
    auto x = i < a.size() ? static_cast<unsigned char>(a[i]) : 0u;
    auto y = i < b.size() ? static_cast<unsigned char>(b[i]) : 0u;
    diff |= x ^ y;
  }
  return diff == 0;
}

TokenStore TokenStore::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return TokenStore{};
  std::vector<DeveloperToken> tokens;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = json::parse(line);
      tokens.push_back(DeveloperToken{j.at("token").get<std::string>(),
                                      j.value("label", std::string{}),
                                      j.value("created_at", std::int64_t{0})});
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Io, path.string() + ":" + std::to_string(lineno) +
                                     ": bad token record: " + e.what());
    }
  }
  return TokenStore(std::move(tokens));
}

bool TokenStore::verify(std::string_view token) const {
  bool found = false;
  for (const auto& t : tokens_) found |= constant_time_equal(t.token, token);
  return found && !token.empty();
}

namespace {

std::string base64url(const std::array<unsigned char, 16>& bytes) {
  static constexpr char kAlphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";
  std::string out;
  std::uint32_t acc = 0;
  int bits = 0;
  for (auto b : bytes) {
    acc = (acc << 8) | b;
    bits += 8;
    while (bits >= 6) {
      bits -= 6;
      out.push_back(kAlphabet[(acc >> bits) & 0x3f]);
    }
  }
  if (bits > 0) out.push_back(kAlphabet[(acc << (6 - bits)) & 0x3f]);
  return out;
}

std::mutex& issue_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

DeveloperToken issue_token(const std::filesystem::path& store, std::string label) {
  std::lock_guard lock(issue_mutex());
  auto existing = TokenStore::load(store);

  std::random_device rd;
  DeveloperToken t;
  do {
    std::array<unsigned char, 16> bytes{};
    for (std::size_t i = 0; i < bytes.size(); i += 4) {
      auto word = rd();
      for (std::size_t k = 0; k < 4; ++k) bytes[i + k] = static_cast<unsigned char>(word >> (8 * k));
    }
    t.token = base64url(bytes);
  } while (existing.verify(t.token));
  t.label = std::move(label);
  t.created_at = std::chrono::duration_cast<std::chrono::seconds>(
                     std::chrono::system_clock::now().time_since_epoch())
                     .count();

  std::ofstream out(store, std::ios::app);
  if (!out) throw Error(ErrorKind::StoreUnwritable, "cannot write token store " + store.string());
  json j = {{"token", t.token}, {"label", t.label}, {"created_at", t.created_at}};
  out << j.dump() << '\n';
  out.flush();
  if (!out) throw Error(ErrorKind::StoreUnwritable, "write to " + store.string() + " failed");
  return t;
}

// ---------------------------------------------------------------------------
// Handlers

namespace {

HttpResponse error_response(int status, std::string_view kind, const std::string& message) {
  json j = {{"error", kind}, {"message", message}};
  return HttpResponse{status, j.dump(2) + "\n", "application/json"};
}

int status_for(ErrorKind kind) {
  if (is_parse_error(kind)) return 400;
  switch (kind) {
    case ErrorKind::UnknownField:
    case ErrorKind::NotWithoutScope:
    case ErrorKind::UnsupportedFormat:
      return 400;
    case ErrorKind::UnknownId: return 404;
    case ErrorKind::EmptySelection: return 422;
    default: return 500;
  }
}

HttpResponse from_error(const Error& e) { return error_response(status_for(e.kind()), to_string(e.kind()), e.what()); }

HttpResponse unauthorized() {
  return error_response(401, "Unauthorized", "missing or unknown developer token");
}

std::optional<std::size_t> parse_count(const std::string& s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

Service::Service(Corpus corpus, TokenStore tokens, ServiceOptions options)
    : corpus_(std::move(corpus)),
      graph_(build_citation_graph(corpus_)),
      tokens_(std::move(tokens)),
      options_(options),
      current_year_(options.current_year.value_or(corpus_.latest_year())) {}

bool Service::authorized(std::string_view authorization) const {
  constexpr std::string_view kScheme = "Bearer ";
  if (authorization.substr(0, kScheme.size()) != kScheme) return false;
  return tokens_.verify(authorization.substr(kScheme.size()));
}

HttpResponse Service::handle_search(std::string_view authorization,
                                    const std::optional<std::string>& q,
                                    const std::optional<std::string>& start,
                                    const std::optional<std::string>& rows) const {
  if (!authorized(authorization)) return unauthorized();

  std::size_t first = 0;
  std::size_t count = options_.default_rows;
  if (start) {
    auto v = parse_count(*start);
    if (!v) return error_response(400, "BadRequest", "start must be a non-negative integer");
    first = *v;
  }
  if (rows) {
    auto v = parse_count(*rows);
    if (!v) return error_response(400, "BadRequest", "rows must be a non-negative integer");
    count = *v;
  }
  if (count > options_.max_rows) {
    return error_response(422, "RowsTooLarge",
                          "rows may not exceed " + std::to_string(options_.max_rows));
  }

  try {
    auto ast = parse(q.value_or(""));
    auto result = Evaluator(corpus_, graph_).evaluate(ast);
    return HttpResponse{200, to_json(result, first, count).dump(2) + "\n", "application/json"};
  } catch (const Error& e) {
    return from_error(e);
  }
}

HttpResponse Service::handle_metrics(std::string_view authorization, std::string_view body) const {
  if (!authorized(authorization)) return unauthorized();

  json req;
  try {
    req = json::parse(body);
  } catch (const json::parse_error& e) {
    return error_response(400, "BadRequest", std::string("body is not JSON: ") + e.what());
  }
  if (!req.is_object()) return error_response(400, "BadRequest", "body must be a JSON object");
  const bool has_query = req.contains("query");
  const bool has_ids = req.contains("ids");
  if (has_query == has_ids) {
    return error_response(400, "BadRequest", "give exactly one of \"query\" or \"ids\"");
  }

  std::size_t cap = options_.default_cap;
  int year = current_year_;
  auto format = ReportFormat::Json;
  try {
    if (auto it = req.find("cap"); it != req.end()) {
      if (!it->is_number_integer() || it->get<std::int64_t>() < 1) {
        return error_response(400, "BadRequest", "cap must be a positive integer");
      }
      cap = it->get<std::size_t>();
    }
    if (auto it = req.find("current_year"); it != req.end()) {
      if (!it->is_number_integer()) {
        return error_response(400, "BadRequest", "current_year must be an integer");
      }
      year = it->get<int>();
    }
    if (auto it = req.find("format"); it != req.end()) {
      if (!it->is_string()) return error_response(400, "BadRequest", "format must be a string");
      format = parse_format(it->get<std::string>());
    }

    Selection selection;
    if (has_query) {
      if (!req["query"].is_string()) {
        return error_response(400, "BadRequest", "query must be a string");
      }
      auto ast = parse(req["query"].get<std::string>());
      selection = select_for_metrics(Evaluator(corpus_, graph_).evaluate(ast), cap);
    } else {
      const auto& ids = req["ids"];
      if (!ids.is_array() ||
          !std::all_of(ids.begin(), ids.end(), [](const json& v) { return v.is_string(); })) {
        return error_response(400, "BadRequest", "ids must be an array of strings");
      }
      auto list = ids.get<std::vector<std::string>>();
      corpus_.resolve(list);
      selection = select_for_metrics(list, cap);
    }
    if (selection.ids.empty()) {
      throw Error(ErrorKind::EmptySelection, "the selection contains no records");
    }

    auto report = metrics_report(selection, corpus_, graph_, year);
    auto doc = render(report, format);
    return HttpResponse{200, std::move(doc.payload),
                        format == ReportFormat::Json ? "application/json" : "text/csv"};
  } catch (const Error& e) {
    return from_error(e);
  }
}

HttpResponse Service::handle_healthz() const {
  json j = {{"status", "ok"}, {"records", corpus_.size()}, {"current_year", current_year_}};
  return HttpResponse{200, j.dump(2) + "\n", "application/json"};
}

// ---------------------------------------------------------------------------
// HTTP binding

struct HttpServer::Impl {
  httplib::Server server;
};

namespace {

void send(httplib::Response& res, const HttpResponse& r) {
  res.status = r.status;
  if (r.status == 401) res.set_header("WWW-Authenticate", "Bearer");
  res.set_content(r.body, r.content_type);
}

std::optional<std::string> param(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  return req.get_param_value(key);
}

}  // namespace

HttpServer::HttpServer(const Service& service) : impl_(std::make_unique<Impl>()) {
  auto& srv = impl_->server;
  srv.Get("/healthz", [&service](const httplib::Request&, httplib::Response& res) {
    send(res, service.handle_healthz());
  });
  srv.Get("/search", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.handle_search(req.get_header_value("Authorization"), param(req, "q"),
                                    param(req, "start"), param(req, "rows")));
  });
  srv.Post("/metrics", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.handle_metrics(req.get_header_value("Authorization"), req.body));
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace adsm
