#include <gtest/gtest.h>

#include <filesystem>
#include <set>
#include <thread>

#include "adsm/report.hpp"
#include "adsm/service.hpp"
#include "httplib.h"
#include "json.hpp"

using namespace adsm;
using nlohmann::json;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "adsm_service_test";
  std::filesystem::create_directories(dir);
  auto p = dir / name;
  std::filesystem::remove(p);
  return p;
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    store_ = temp_path(std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) +
                       ".tokens");
    token_ = issue_token(store_, "tests").token;
    service_ = std::make_unique<Service>(Corpus::ingest_file(ADSM_TEST_DATA_DIR "/fixture.jsonl"),
                                         TokenStore::load(store_));
  }

  std::string bearer() const { return "Bearer " + token_; }

  std::filesystem::path store_;
  std::string token_;
  std::unique_ptr<Service> service_;
};

}  // namespace

TEST(Tokens, IssueTwiceGivesDistinctTokensAndSurvivesReload) {
  auto store = temp_path("issue.tokens");
  auto a = issue_token(store, "alpha");
  auto b = issue_token(store, "beta");
  EXPECT_NE(a.token, b.token);
  EXPECT_GE(a.token.size(), 22u);  // 128 bits in base64url
  EXPECT_EQ(a.token.find_first_not_of(
                "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_"),
            std::string::npos);
  auto reloaded = TokenStore::load(store);
  ASSERT_EQ(reloaded.tokens().size(), 2u);
  EXPECT_EQ(reloaded.tokens()[0], a);
  EXPECT_EQ(reloaded.tokens()[1].label, "beta");
  EXPECT_TRUE(reloaded.verify(a.token));
  EXPECT_FALSE(reloaded.verify(a.token + "x"));
  EXPECT_FALSE(reloaded.verify(""));
}

TEST(Tokens, UnwritableStore) {
  try {
    issue_token("/nonexistent-dir/tokens.jsonl", "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StoreUnwritable);
  }
}

TEST(Tokens, ConstantTimeCompare) {
  EXPECT_TRUE(constant_time_equal("abc", "abc"));
  EXPECT_FALSE(constant_time_equal("abc", "abd"));
  EXPECT_FALSE(constant_time_equal("abc", "ab"));
  EXPECT_FALSE(constant_time_equal("", "a"));
  EXPECT_TRUE(constant_time_equal("", ""));
}

TEST_F(ServiceTest, SearchPagesOverFixedOrder) {
  auto r = service_->handle_search(bearer(), std::string(R"(year:2013 database:"astronomy")"),
                                   std::nullopt, std::string("2"));
  ASSERT_EQ(r.status, 200) << r.body;
  auto j = json::parse(r.body);
  EXPECT_EQ(j["total"], 5);
  ASSERT_EQ(j["ids"].size(), 2u);
  EXPECT_EQ(j["ids"][0], "2013A&A...550....9M");
  EXPECT_EQ(j["ids"][1], "2013ApJ...765...10R");
  EXPECT_TRUE(j["facets"].contains("bibstem"));

  auto next = json::parse(service_->handle_search(bearer(),
                                                  std::string(R"(year:2013 database:"astronomy")"),
                                                  std::string("2"), std::string("2"))
                              .body);
  EXPECT_EQ(next["ids"][0], "2013ApJ...770L..12S");
}

TEST_F(ServiceTest, SearchErrors) {
  EXPECT_EQ(service_->handle_search("", std::string("year:2013"), {}, {}).status, 401);
  EXPECT_EQ(service_->handle_search("Bearer nope", std::string("year:2013"), {}, {}).status, 401);
  EXPECT_EQ(service_->handle_search(token_, std::string("year:2013"), {}, {}).status, 401);

  auto bad = service_->handle_search(bearer(), std::string("\"weak lensing"), {}, {});
  EXPECT_EQ(bad.status, 400);
  EXPECT_EQ(json::parse(bad.body)["error"], "UnterminatedQuote");

  EXPECT_EQ(service_->handle_search(bearer(), std::string("year:2013"), {}, std::string("201")).status,
            422);
  EXPECT_EQ(service_->handle_search(bearer(), std::string("year:2013"), {}, std::string("200")).status,
            200);
  EXPECT_EQ(service_->handle_search(bearer(), std::string("year:2013"), std::string("-1"), {}).status,
            400);
  EXPECT_EQ(service_->handle_search(bearer(), std::nullopt, {}, {}).status, 400);
  EXPECT_EQ(json::parse(service_->handle_search(bearer(), std::string("colour:red"), {}, {}).body)["error"],
            "UnknownField");
}

TEST_F(ServiceTest, MetricsOverIdsEqualsLibraryReport) {
  std::vector<std::string> ids = {"2013ApJ...765...10R", "2005ApJ...620..300R",
                                  "2010MNRAS.400..500B"};
  json body = {{"ids", ids}};
  auto r = service_->handle_metrics(bearer(), body.dump());
  ASSERT_EQ(r.status, 200) << r.body;

  const auto& corpus = service_->corpus();
  auto graph = build_citation_graph(corpus);
  auto docs = corpus.resolve(ids);
  auto expected = render(metrics_report(docs, corpus, graph, corpus.latest_year()), ReportFormat::Json);
  EXPECT_EQ(r.body, expected.payload);
  EXPECT_FALSE(json::parse(r.body)["truncated"].get<bool>());
}

TEST_F(ServiceTest, MetricsErrors) {
  EXPECT_EQ(service_->handle_metrics("", R"({"ids":["2005ApJ...620..300R"]})").status, 401);
  EXPECT_EQ(service_->handle_metrics(bearer(), R"({"query":"year:1800"})").status, 422);
  EXPECT_EQ(service_->handle_metrics(bearer(), R"({"ids":[]})").status, 422);
  EXPECT_EQ(service_->handle_metrics(bearer(), R"({"ids":["nope"]})").status, 404);
  EXPECT_EQ(service_->handle_metrics(bearer(), R"({"query":"(a"})").status, 400);
  EXPECT_EQ(service_->handle_metrics(bearer(), R"({"query":"a","ids":["x"]})").status, 400);
  EXPECT_EQ(service_->handle_metrics(bearer(), R"({"query":"a","cap":0})").status, 400);
  EXPECT_EQ(service_->handle_metrics(bearer(), "not json").status, 400);
  EXPECT_EQ(service_->handle_metrics(bearer(), R"({"query":"year:2013","format":"pdf"})").status, 400);
}

TEST_F(ServiceTest, MetricsByQueryAppliesCap) {
  auto r = service_->handle_metrics(bearer(), R"({"query":"year:2013","cap":2})");
  ASSERT_EQ(r.status, 200);
  auto rep = parse_json_report(r.body);
  EXPECT_TRUE(rep.truncated);
  EXPECT_EQ(rep.stats.total_papers, 2u);

  auto csv = service_->handle_metrics(bearer(), R"({"query":"year:2013","format":"csv"})");
  EXPECT_EQ(csv.status, 200);
  EXPECT_EQ(csv.content_type, "text/csv");
  EXPECT_EQ(csv.body.rfind("#selection\n", 0), 0u);
}

TEST_F(ServiceTest, ResponsesAreReplayable) {
  auto a = service_->handle_metrics(bearer(), R"({"query":"weak lensing"})");
  auto b = service_->handle_metrics(bearer(), R"({"query":"weak lensing"})");
  EXPECT_EQ(a.body, b.body);
  auto s1 = service_->handle_search(bearer(), std::string("weak"), {}, {});
  auto s2 = service_->handle_search(bearer(), std::string("weak"), {}, {});
  EXPECT_EQ(s1.body, s2.body);
}

TEST_F(ServiceTest, HttpEndToEnd) {
  HttpServer server(*service_);
  int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread t([&] { server.listen(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/healthz");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);

  auto anon = client.Get("/search?q=year:2013");
  ASSERT_TRUE(anon);
  EXPECT_EQ(anon->status, 401);

  httplib::Headers auth = {{"Authorization", bearer()}};
  auto search = client.Get("/search?q=year%3A2013&rows=3", auth);
  ASSERT_TRUE(search);
  EXPECT_EQ(search->status, 200);
  EXPECT_EQ(json::parse(search->body)["total"], 6);

  std::string body = R"({"ids":["2013ApJ...765...10R","2005ApJ...620..300R"]})";
  auto metrics = client.Post("/metrics", auth, body, "application/json");
  ASSERT_TRUE(metrics);
  EXPECT_EQ(metrics->status, 200);
  EXPECT_EQ(metrics->body, service_->handle_metrics(bearer(), body).body);

  auto unauth_metrics = client.Post("/metrics", body, "application/json");
  ASSERT_TRUE(unauth_metrics);
  EXPECT_EQ(unauth_metrics->status, 401);

  server.stop();
  t.join();
}

TEST(ServiceRestart, TokenIssuedBeforeRestartStillWorks) {
  auto store = temp_path("restart.tokens");
  auto corpus_path = ADSM_TEST_DATA_DIR "/fixture.jsonl";
  std::string token;
  {
    Service first(Corpus::ingest_file(corpus_path), TokenStore::load(store));
    token = issue_token(store, "restart").token;
    // the running snapshot does not hot-reload
    EXPECT_EQ(first.handle_search("Bearer " + token, std::string("weak"), {}, {}).status, 401);
  }
  Service second(Corpus::ingest_file(corpus_path), TokenStore::load(store));
  EXPECT_EQ(second.handle_search("Bearer " + token, std::string("weak"), {}, {}).status, 200);
}
