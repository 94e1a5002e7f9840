#include "adsm/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "adsm/corpus.hpp"
#include "adsm/error.hpp"
#include "adsm/evaluator.hpp"
#include "adsm/query.hpp"
#include "adsm/service.hpp"

namespace adsm {

namespace {

struct SearchArgs {
  std::string query;
  bool facets = false;
  bool explain = false;
  std::size_t start = 0;
  std::size_t rows = 20;
};

struct MetricsArgs {
  std::string query;
  std::string ids_file;
  std::string format = "json";
};

struct ServeArgs {
  std::string addr = "127.0.0.1:8080";
};

struct TokenArgs {
  std::string label;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require_corpus(const CliConfig& cfg) {
  if (cfg.corpus_path.empty()) {
    throw UsageError(std::string("no corpus given; pass --corpus or set ") + kCorpusEnv);
  }
}

Corpus load_corpus(const CliConfig& cfg, std::ostream& err) {
  require_corpus(cfg);
  auto corpus = Corpus::ingest_file(cfg.corpus_path);
  if (corpus.report().rejected() > 0) {
    err << "warning: " << corpus.report().rejected() << " record document(s) rejected; run "
        << "'adsm ingest " << cfg.corpus_path << "' for details\n";
  }
  return corpus;
}

int cmd_ingest(const std::string& path, std::ostream& out, std::ostream& err) {
  auto corpus = Corpus::ingest_file(path);
  auto graph = build_citation_graph(corpus);
  const auto& report = corpus.report();
  out << "accepted " << report.accepted << "\n";
  out << "rejected " << report.rejected() << "\n";
  out << "dangling_references " << graph.dangling << "\n";
  for (const auto& issue : report.rejects) {
    err << path << ":" << issue.line << ": " << issue.message << "\n";
  }
  return kExitOk;
}

void print_facet(std::ostream& out, const std::string& field, const std::vector<FacetCount>& counts) {
  out << "facet " << field << "\n";
  for (const auto& [value, count] : counts) out << "  " << value << "\t" << count << "\n";
}

int cmd_search(const CliConfig& cfg, const SearchArgs& args, std::ostream& out, std::ostream& err) {
  auto ast = parse(args.query);
  if (args.explain) {
    out << explain(ast) << "\n";
    return kExitOk;
  }
  auto corpus = load_corpus(cfg, err);
  auto graph = build_citation_graph(corpus);
  auto result = evaluate(ast, corpus, graph);

  out << "total " << result.total << "\n";
  for (std::size_t i = args.start; i < result.ids.size() && i < args.start + args.rows; ++i) {
    const auto& r = corpus.record(*corpus.find(result.ids[i]));
    out << r.id << "\t" << r.year << "\t" << r.bibstem << "\t" << r.title << "\n";
  }
  print_facet(out, "bibstem", result.facets.at("bibstem"));
  if (args.facets) {
    print_facet(out, "year", result.facets.at("year"));
    print_facet(out, "property", result.facets.at("property"));
  }
  return kExitOk;
}

std::vector<std::string> read_id_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open id file " + path);
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    ids.push_back(line.substr(first, last - first + 1));
  }
  return ids;
}

int cmd_metrics(const CliConfig& cfg, const MetricsArgs& args, std::ostream& out,
                std::ostream& err) {
  auto format = parse_format(args.format);
  auto corpus = load_corpus(cfg, err);
  auto graph = build_citation_graph(corpus);

  Selection selection;
  if (!args.query.empty()) {
    selection = select_for_metrics(evaluate(parse(args.query), corpus, graph), cfg.cap);
  } else {
    auto ids = read_id_file(args.ids_file);
    corpus.resolve(ids);
    selection = select_for_metrics(ids, cfg.cap);
  }
  if (selection.ids.empty()) throw Error(ErrorKind::EmptySelection, "no records selected");
  if (selection.truncated) {
    err << "note: selection truncated to " << selection.ids.size() << " of "
        << selection.available << " records\n";
  }

  auto report =
      metrics_report(selection, corpus, graph, cfg.current_year.value_or(corpus.latest_year()));
  auto doc = render(report, format);
  if (cfg.output_path.empty()) {
    out << doc.payload;
  } else {
    std::ofstream file(cfg.output_path, std::ios::binary);
    if (!file) throw Error(ErrorKind::Io, "cannot write " + cfg.output_path);
    file << doc.payload;
    out << "wrote " << cfg.output_path << "\n";
  }
  return kExitOk;
}

int cmd_serve(const CliConfig& cfg, const ServeArgs& args, std::ostream& out, std::ostream& err) {
  auto colon = args.addr.rfind(':');
  if (colon == std::string::npos) throw UsageError("--addr must look like host:port");
  auto host = args.addr.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(args.addr.substr(colon + 1));
  } catch (const std::exception&) {
    throw UsageError("--addr port is not a number");
  }

  ServiceOptions options;
  options.default_cap = cfg.cap;
  options.current_year = cfg.current_year;
  Service service(load_corpus(cfg, err), TokenStore::load(cfg.token_store_path), options);
  HttpServer server(service);
  int bound = server.bind(host, port);
  if (bound < 0) throw Error(ErrorKind::Io, "cannot bind " + args.addr);
  out << "serving " << service.corpus().size() << " records on " << host << ":" << bound
      << std::endl;
  server.listen();
  return kExitOk;
}

int cmd_token_issue(const CliConfig& cfg, const TokenArgs& args, std::ostream& out) {
  auto token = issue_token(cfg.token_store_path, args.label);
  out << token.token << "\n";
  return kExitOk;
}

int cmd_token_list(const CliConfig& cfg, std::ostream& out) {
  auto store = TokenStore::load(cfg.token_store_path);
  for (const auto& t : store.tokens()) {
    // Only a short prefix of each token is shown.
    out << t.token.substr(0, 6) << "...\t" << t.created_at << "\t" << t.label << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  SearchArgs search;
  MetricsArgs metrics;
  ServeArgs serve;
  TokenArgs token;
  std::string ingest_path;
  int year_override = 0;

  CLI::App app{"Bibliographic search and citation metrics", "adsm"};
  app.require_subcommand(1);
  app.add_option("--corpus", cfg.corpus_path, "Record file (one JSON document per line)")
      ->envname(kCorpusEnv);
  app.add_option("--tokens", cfg.token_store_path, "Developer token store file")
      ->envname(kTokenStoreEnv);

  auto* ingest_cmd = app.add_subcommand("ingest", "Validate a record file and report counts");
  ingest_cmd->add_option("file", ingest_path, "Record file, or - for standard input")->required();

  auto* search_cmd = app.add_subcommand("search", "Run a query");
  search_cmd->add_option("query", search.query, "Query string")->required();
  search_cmd->add_flag("--facets", search.facets, "Also print year and property facets");
  search_cmd->add_flag("--explain", search.explain, "Print the parsed query tree and exit");
  search_cmd->add_option("--start", search.start, "Offset of the first listed result");
  search_cmd->add_option("--rows", search.rows, "Number of results to list");

  auto* metrics_cmd = app.add_subcommand("metrics", "Compute the metrics overview");
  auto* q_opt = metrics_cmd->add_option("--query", metrics.query, "Select records by query");
  auto* ids_opt = metrics_cmd->add_option("--ids", metrics.ids_file, "File with one id per line");
  q_opt->excludes(ids_opt);
  ids_opt->excludes(q_opt);
  metrics_cmd->add_option("--cap", cfg.cap, "Maximum number of records analysed")
      ->check(CLI::PositiveNumber);
  auto* year_opt = metrics_cmd->add_option("--year", year_override, "Current year override");
  metrics_cmd->add_option("--format", metrics.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  metrics_cmd->add_option("--output", cfg.output_path, "Write the report here instead of stdout");

  auto* serve_cmd = app.add_subcommand("serve", "Start the HTTP service");
  serve_cmd->add_option("--addr", serve.addr, "host:port to listen on");
  serve_cmd->add_option("--cap", cfg.cap, "Default selection cap")->check(CLI::PositiveNumber);
  auto* serve_year = serve_cmd->add_option("--year", year_override, "Current year override");

  auto* token_cmd = app.add_subcommand("token", "Manage developer tokens");
  token_cmd->require_subcommand(1);
  auto* issue_cmd = token_cmd->add_subcommand("issue", "Issue a new token");
  issue_cmd->add_option("--label", token.label, "Free-text label");
  auto* list_cmd = token_cmd->add_subcommand("list", "List issued tokens");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    out << "\n" << grammar_help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << "\n" << grammar_help();
    return kExitUsage;
  }

  if (year_opt->count() > 0 || serve_year->count() > 0) cfg.current_year = year_override;

  try {
    if (ingest_cmd->parsed()) return cmd_ingest(ingest_path, out, err);
    if (search_cmd->parsed()) return cmd_search(cfg, search, out, err);
    if (metrics_cmd->parsed()) {
      if (metrics.query.empty() && metrics.ids_file.empty()) {
        throw UsageError("metrics needs --query or --ids");
      }
      return cmd_metrics(cfg, metrics, out, err);
    }
    if (serve_cmd->parsed()) return cmd_serve(cfg, serve, out, err);
    if (issue_cmd->parsed()) return cmd_token_issue(cfg, token, out);
    if (list_cmd->parsed()) return cmd_token_list(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (is_parse_error(e.kind())) {
      err << "\n" << grammar_help();
      return kExitUsage;
    }
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace adsm
