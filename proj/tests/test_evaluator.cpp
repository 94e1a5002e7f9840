#include <gtest/gtest.h>

#include <set>

#include "adsm/error.hpp"
#include "adsm/evaluator.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace adsm;

namespace {

struct Fixture {
  Corpus corpus;
  CitationGraph graph;

  explicit Fixture(Corpus c) : corpus(std::move(c)), graph(build_citation_graph(corpus)) {}

  std::set<std::string> run(std::string_view q) const {
    auto rs = evaluate(parse(q), corpus, graph);
    return {rs.ids.begin(), rs.ids.end()};
  }

  std::set<std::string> ids(const DocSet& docs) const {
    std::set<std::string> out;
    for (auto d : docs) out.insert(corpus.record(d).id);
    return out;
  }

  DocIndex at(const std::string& id) const { return *corpus.find(id); }
};

const Fixture& paper_fixture() {
  static const Fixture f(Corpus::ingest_file(ADSM_TEST_DATA_DIR "/fixture.jsonl"));
  return f;
}

Record rec(std::string id, std::vector<std::string> authors, int year, std::string bibstem,
           std::set<std::string> props = {}, std::set<std::string> dbs = {},
           std::vector<std::string> refs = {}) {
  Record r;
  r.id = std::move(id);
  r.authors = std::move(authors);
  r.year = year;
  r.bibstem = std::move(bibstem);
  r.properties = std::move(props);
  r.databases = std::move(dbs);
  r.references = std::move(refs);
  return r;
}

using Ids = std::set<std::string>;

}  // namespace

TEST(Evaluate, AstronomyRefereedYearOnSixRecordCorpus) {
  std::vector<Record> records = {
      rec("A", {"a"}, 2013, "ApJ", {"refereed"}, {"astronomy"}),
      rec("B", {"b"}, 2013, "MNRAS", {"refereed"}, {"astronomy", "physics"}),
      rec("C", {"c"}, 2012, "ApJ", {"refereed"}, {"astronomy"}),
      rec("D", {"d"}, 2013, "ApJ", {}, {"astronomy"}),
      rec("E", {"e"}, 2013, "PhRvD", {"refereed"}, {"physics"}),
      rec("F", {"f"}, 2014, "AJ", {"refereed"}, {"astronomy"}),
  };
  Fixture f(Corpus::from_records(records));
  auto q = parse(R"(database:"astronomy" year:2013 property:"refereed")");
  auto got = f.run(R"(database:"astronomy" year:2013 property:"refereed")");
  EXPECT_EQ(got, (Ids{"A", "B"}));
  EXPECT_EQ(got, oracle::interpret(q, f.corpus.records()));
}

TEST(Evaluate, EmptyCorpusGivesEmptyResult) {
  Fixture f{Corpus{}};
  auto rs = evaluate(parse("weak OR year:2013"), f.corpus, f.graph);
  EXPECT_EQ(rs.total, 0u);
  EXPECT_TRUE(rs.ids.empty());
  for (const auto& [field, counts] : rs.facets) EXPECT_TRUE(counts.empty()) << field;
}

TEST(Evaluate, PaperQueriesOnFixture) {
  const auto& f = paper_fixture();
  EXPECT_EQ(f.run(R"(database:"astronomy" year:2013 property:"refereed")"),
            (Ids{"2013ApJ...765...10R", "2013ApJ...770L..12S", "2013MNRAS.430..100K",
                 "2013A&A...550....9M"}));
  EXPECT_EQ(f.run(R"(citations(bibstem:"MNRAS" year:2013) property:"refereed")"),
            (Ids{"2013PhRvD..87..200L", "2013A&A...550....9M"}));
  EXPECT_EQ(f.run(R"("weak lensing" bibstem:"ApJ" -page:"L*" year:2013)"),
            (Ids{"2013ApJ...765...10R", "2013ApJ...780..600T"}));
  EXPECT_EQ(f.run(R"((title:"weak lensing" OR abs:"weak lensing") bibstem:"ApJ" -page:"L*" year:2013)"),
            (Ids{"2013ApJ...765...10R"}));
  EXPECT_EQ(f.run(R"(references("weak lensing" year:2013) bibstem:"ApJ" -page:"L*")"),
            (Ids{"2013ApJ...765...10R", "2005ApJ...620..300R", "2012ApJ...750..700W"}));
  EXPECT_EQ(f.run(R"(author:"^Riess, Adam G." year:2000-2013 property:"refereed")"),
            (Ids{"2013ApJ...765...10R", "2005ApJ...620..300R"}));
}

TEST(Evaluate, FieldRules) {
  const auto& f = paper_fixture();
  // default field reaches the body text; title does not
  EXPECT_TRUE(f.run(R"("mass maps")").contains("2013ApJ...780..600T"));
  EXPECT_TRUE(f.run(R"(title:"mass maps")").empty());
  // non-anchored author matches any position, anchored only the first
  EXPECT_TRUE(f.run(R"(author:"Riess, Adam G.")").contains("2008ApJ...680..900X"));
  EXPECT_FALSE(f.run(R"(author:"^Riess, Adam G.")").contains("2008ApJ...680..900X"));
  // no partial-name expansion
  EXPECT_TRUE(f.run(R"(author:"Riess")").empty());
  // prefix wildcard on text fields expands the last token
  EXPECT_EQ(f.run(R"(title:"cephe*")"), (Ids{"2010MNRAS.400..500B"}));
  // year is an exact match
  EXPECT_EQ(f.run("year:2014"), (Ids{"2014AJ....147....1R"}));
  EXPECT_EQ(f.run("year:1999-1999"), (Ids{"1999ApJ...500..800R"}));
  EXPECT_EQ(f.run(R"(bibstem:"a&a")"), (Ids{"2013A&A...550....9M"}));
}

TEST(Evaluate, OrderingAndFacets) {
  const auto& f = paper_fixture();
  auto rs = evaluate(parse(R"(author:"Riess, Adam G.")"), f.corpus, f.graph);
  std::vector<std::string> expected = {"2014AJ....147....1R", "2013ApJ...765...10R",
                                       "2011ApJ...730...40R", "2010MNRAS.400..500B",
                                       "2008ApJ...680..900X", "2005ApJ...620..300R",
                                       "1999ApJ...500..800R"};
  EXPECT_EQ(rs.ids, expected);
  EXPECT_EQ(rs.total, expected.size());
  std::vector<FacetCount> bibstems = {{"ApJ", 5}, {"AJ", 1}, {"MNRAS", 1}};
  EXPECT_EQ(rs.facets.at("bibstem"), bibstems);
  std::vector<FacetCount> props = {{"refereed", 6}};
  EXPECT_EQ(rs.facets.at("property"), props);
}

TEST(Evaluate, ErrorsForHandBuiltAsts) {
  const auto& f = paper_fixture();
  Evaluator ev(f.corpus, f.graph);
  try {
    ev.match(parse("keyword:x"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownField);
  }
  try {
    ev.match(QueryNode::negate(QueryNode::term("", "weak")));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotWithoutScope);
  }
  try {
    ev.match(QueryNode::all_of({QueryNode::negate(QueryNode::term("", "a")),
                                QueryNode::negate(QueryNode::term("", "b"))}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotWithoutScope);
  }
}

TEST(OpCitations, SingleEdgeAndEmpty) {
  std::vector<Record> records = {rec("A", {"a"}, 2010, "ApJ", {}, {}, {"B"}),
                                 rec("B", {"b"}, 2009, "ApJ")};
  Fixture f(Corpus::from_records(records));
  EXPECT_EQ(f.ids(op_citations({f.at("B")}, f.graph)), (Ids{"A"}));
  EXPECT_TRUE(op_citations({}, f.graph).empty());
}

TEST(OpReferences, SingleEdgeAndDangling) {
  std::vector<Record> records = {rec("A", {"a"}, 2010, "ApJ", {}, {}, {"B"}),
                                 rec("B", {"b"}, 2009, "ApJ"),
                                 rec("C", {"c"}, 2009, "ApJ", {}, {}, {"X", "Y"})};
  Fixture f(Corpus::from_records(records));
  EXPECT_EQ(f.ids(op_references({f.at("A")}, f.corpus)), (Ids{"B"}));
  EXPECT_TRUE(op_references({f.at("C")}, f.corpus).empty());
}

TEST(OpCitations, MatchesReverseScanOnRandomGraphs) {
  gen::Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Fixture f(Corpus::from_records(gen::random_records(rng, {.records = 10})));
    auto inner = gen::random_subset(rng, f.corpus.size(), 4);
    std::sort(inner.begin(), inner.end());
    Ids inner_ids = f.ids(inner);

    Ids cites;
    for (const auto& r : f.corpus.records())
      for (const auto& ref : r.references)
        if (inner_ids.contains(ref)) cites.insert(r.id);
    EXPECT_EQ(f.ids(op_citations(inner, f.graph)), cites);

    Ids refs;
    for (const auto& id : inner_ids) {
      auto part = oracle::references_of(id, f.corpus.records());
      refs.insert(part.begin(), part.end());
    }
    EXPECT_EQ(f.ids(op_references(inner, f.corpus)), refs);
  }
}

TEST(OpCitations, DualityWithReferences) {
  gen::Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Fixture f(Corpus::from_records(gen::random_records(rng, {.records = 60})));
    for (DocIndex a = 0; a < f.corpus.size(); ++a) {
      auto cites = op_citations({a}, f.graph);
      for (DocIndex b = 0; b < f.corpus.size(); ++b) {
        auto refs = op_references({b}, f.corpus);
        ASSERT_EQ(std::binary_search(cites.begin(), cites.end(), b),
                  std::binary_search(refs.begin(), refs.end(), a));
      }
    }
  }
}

TEST(FacetCounts, DirectTallyAndErrors) {
  std::vector<Record> records = {rec("A", {"a"}, 2010, "ApJ"), rec("B", {"b"}, 2011, "ApJ"),
                                 rec("C", {"c"}, 2010, "MNRAS")};
  Fixture f(Corpus::from_records(records));
  DocSet all = {0, 1, 2};
  std::vector<FacetCount> expected = {{"ApJ", 2}, {"MNRAS", 1}};
  EXPECT_EQ(facet_counts(all, f.corpus, "bibstem"), expected);
  EXPECT_TRUE(facet_counts(DocSet{}, f.corpus, "bibstem").empty());
  try {
    facet_counts(all, f.corpus, "page");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownField);
  }
}

TEST(FacetCounts, MatchesHashMapOracle) {
  gen::Rng rng(8);
  Fixture f(Corpus::from_records(gen::random_records(rng, {.records = 100})));
  for (int trial = 0; trial < 20; ++trial) {
    auto docs = gen::random_subset(rng, f.corpus.size(), 100);
    std::sort(docs.begin(), docs.end());
    for (std::string field : {"bibstem", "year", "property"}) {
      EXPECT_EQ(facet_counts(docs, f.corpus, field), oracle::facet(f.ids(docs), f.corpus.records(), field));
    }
  }
}

TEST(Evaluate, MatchesNaiveInterpreter) {
  gen::Rng rng(2024);
  for (int corpus_trial = 0; corpus_trial < 10; ++corpus_trial) {
    Fixture f(Corpus::from_records(gen::random_records(rng, {.records = 50})));
    Evaluator ev(f.corpus, f.graph);
    for (int q = 0; q < 200; ++q) {
      auto ast = gen::random_ast(rng, 3);
      auto got = f.ids(ev.match(ast));
      ASSERT_EQ(got, oracle::interpret(ast, f.corpus.records())) << print_canonical(ast);
    }
  }
}

TEST(Evaluate, ResultSetInvariants) {
  gen::Rng rng(77);
  Fixture f(Corpus::from_records(gen::random_records(rng, {.records = 80})));
  for (int q = 0; q < 200; ++q) {
    auto rs = evaluate(gen::random_ast(rng, 3), f.corpus, f.graph);
    EXPECT_EQ(rs.total, rs.ids.size());
    EXPECT_EQ(Ids(rs.ids.begin(), rs.ids.end()).size(), rs.ids.size());
    std::size_t sum = 0;
    for (const auto& [value, count] : rs.facets.at("bibstem")) {
      EXPECT_LE(count, rs.total);
      sum += count;
    }
    EXPECT_EQ(sum, rs.total);
    for (std::size_t i = 1; i < rs.ids.size(); ++i) {
      const auto& a = f.corpus.record(f.at(rs.ids[i - 1]));
      const auto& b = f.corpus.record(f.at(rs.ids[i]));
      ASSERT_TRUE(a.year > b.year || (a.year == b.year && a.id < b.id));
    }
  }
}

TEST(Evaluate, NegationAndMonotonicity) {
  gen::Rng rng(13);
  Fixture f(Corpus::from_records(gen::random_records(rng, {.records = 80})));
  Evaluator ev(f.corpus, f.graph);
  for (int i = 0; i < 200; ++i) {
    auto a = gen::random_ast(rng, 1);
    auto b = gen::random_ast(rng, 1);
    auto a_docs = ev.match(a);
    auto a_minus_b = ev.match(QueryNode::all_of({a, QueryNode::negate(b)}));
    auto a_and_b = ev.match(QueryNode::all_of({a, b}));
    DocSet rebuilt;
    std::set_union(a_minus_b.begin(), a_minus_b.end(), a_and_b.begin(), a_and_b.end(),
                   std::back_inserter(rebuilt));
    ASSERT_EQ(rebuilt, a_docs);
    // an extra AND term never grows the result
    ASSERT_TRUE(std::includes(a_docs.begin(), a_docs.end(), a_and_b.begin(), a_and_b.end()));
  }
}
