#include "adsm/evaluator.hpp"

#include <algorithm>
#include <iterator>
#include <unordered_map>

#include "adsm/error.hpp"

namespace adsm {

namespace {

enum class Field { Default, Title, Abs, Author, Bibstem, Page, Year, Property, Database };

Field resolve_field(const std::string& name) {
  if (name.empty()) return Field::Default;
  if (name == "title") return Field::Title;
  if (name == "abs") return Field::Abs;
  if (name == "author") return Field::Author;
  if (name == "bibstem") return Field::Bibstem;
  if (name == "page") return Field::Page;
  if (name == "year") return Field::Year;
  if (name == "property") return Field::Property;
  if (name == "database") return Field::Database;
  throw Error(ErrorKind::UnknownField, "unknown field '" + name + "'");
}

DocSet set_union(const DocSet& a, const DocSet& b) {
  DocSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

DocSet set_intersection(const DocSet& a, const DocSet& b) {
  DocSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

DocSet set_difference(const DocSet& a, const DocSet& b) {
  DocSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

DocSet sorted_unique(std::vector<DocIndex> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

using PositionMap = std::unordered_map<DocIndex, std::vector<std::uint32_t>>;

void merge_postings(PositionMap& into, const TextIndex::PostingList& list) {
  for (const auto& p : list) {
    auto& dst = into[p.doc];
    std::vector<std::uint32_t> merged;
    std::set_union(dst.begin(), dst.end(), p.positions.begin(), p.positions.end(),
                   std::back_inserter(merged));
    dst.swap(merged);
  }
}

}  // namespace

DocSet Evaluator::match_text(TextField field, const QueryNode& term) const {
  auto tokens = tokenize_text(term.value);
  if (tokens.empty()) return {};
  const auto& index = corpus_.text(field);

  // Position maps per phrase slot; the last slot expands to every indexed
  // term sharing the prefix for wildcard matches.
  std::vector<PositionMap> slots(tokens.size());
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    bool expand = term.match == MatchKind::Prefix && k + 1 == tokens.size();
    if (expand) {
      for (const auto* list : index.with_prefix(tokens[k])) merge_postings(slots[k], *list);
    } else if (const auto* list = index.find(tokens[k])) {
      merge_postings(slots[k], *list);
    }
    if (slots[k].empty()) return {};
  }

  DocSet out;
  for (const auto& [doc, starts] : slots[0]) {
    for (auto start : starts) {
      bool ok = true;
      for (std::size_t k = 1; k < tokens.size() && ok; ++k) {
        auto it = slots[k].find(doc);
        ok = it != slots[k].end() &&
             std::binary_search(it->second.begin(), it->second.end(),
                                start + static_cast<std::uint32_t>(k));
      }
      if (ok) {
        out.push_back(doc);
        break;
      }
    }
  }
  return sorted_unique(std::move(out));
}

DocSet Evaluator::match_term(const QueryNode& term) const {
  auto keyword = [&](const KeywordIndex& index) {
    return term.match == MatchKind::Prefix ? index.with_prefix(term.value)
                                           : index.equal(term.value);
  };
  switch (resolve_field(term.field)) {
    case Field::Default: {
      auto out = set_union(match_text(TextField::Title, term), match_text(TextField::Abstract, term));
      return set_union(out, match_text(TextField::Body, term));
    }
    case Field::Title: return match_text(TextField::Title, term);
    case Field::Abs: return match_text(TextField::Abstract, term);
    case Field::Author:
      if (term.match == MatchKind::FirstAuthor) return corpus_.first_authors().equal(term.value);
      return keyword(corpus_.authors());
    case Field::Bibstem: return keyword(corpus_.bibstems());
    case Field::Page: return keyword(corpus_.pages());
    case Field::Property: return keyword(corpus_.properties());
    case Field::Database: return keyword(corpus_.databases());
    case Field::Year: {
      int y = 0;
      try {
        std::size_t used = 0;
        y = std::stoi(term.value, &used);
        if (used != term.value.size()) throw std::invalid_argument(term.value);
      } catch (const std::exception&) {
        throw Error(ErrorKind::BadYearRange, "'" + term.value + "' is not a year");
      }
      auto it = corpus_.years().find(y);
      return it == corpus_.years().end() ? DocSet{} : it->second;
    }
  }
  return {};
}

DocSet Evaluator::match_conjunction(const QueryNode& node) const {
  DocSet positive;
  DocSet excluded;
  bool have_positive = false;
  for (const auto& child : node.children) {
    if (child.kind == NodeKind::Not) {
      excluded = set_union(excluded, match(child.children.front()));
      continue;
    }
    auto docs = match(child);
    positive = have_positive ? set_intersection(positive, docs) : std::move(docs);
    have_positive = true;
  }
  if (!have_positive) {
    throw Error(ErrorKind::NotWithoutScope, "conjunction has only negated terms");
  }
  return set_difference(positive, excluded);
}

DocSet Evaluator::match(const QueryAst& ast) const {
  switch (ast.kind) {
    case NodeKind::Term: return match_term(ast);
    case NodeKind::YearRange: {
      DocSet out;
      const auto& years = corpus_.years();
      for (auto it = years.lower_bound(ast.lo); it != years.end() && it->first <= ast.hi; ++it) {
        out = set_union(out, it->second);
      }
      return out;
    }
    case NodeKind::And: return match_conjunction(ast);
    case NodeKind::Or: {
      DocSet out;
      for (const auto& child : ast.children) {
        if (child.kind == NodeKind::Not) {
          throw Error(ErrorKind::NotWithoutScope, "negation directly under OR");
        }
        out = set_union(out, match(child));
      }
      return out;
    }
    case NodeKind::Not:
      throw Error(ErrorKind::NotWithoutScope, "negation outside a conjunction");
    case NodeKind::Func: {
      auto inner = match(ast.children.front());
      return ast.op == FuncOp::Citations ? op_citations(inner, graph_)
                                         : op_references(inner, corpus_);
    }
  }
  return {};
}

std::vector<DocIndex> Evaluator::presentation_order(const DocSet& docs) const {
  std::vector<DocIndex> ordered(docs.begin(), docs.end());
  std::sort(ordered.begin(), ordered.end());
  std::stable_sort(ordered.begin(), ordered.end(), [&](DocIndex a, DocIndex b) {
    return corpus_.record(a).year > corpus_.record(b).year;
  });
  return ordered;
}

ResultSet Evaluator::evaluate(const QueryAst& ast) const {
  auto docs = match(ast);
  ResultSet rs;
  for (auto i : presentation_order(docs)) rs.ids.push_back(corpus_.record(i).id);
  rs.total = rs.ids.size();
  for (auto field : kFacetFields) rs.facets[std::string(field)] = facet_counts(docs, corpus_, field);
  return rs;
}

ResultSet evaluate(const QueryAst& ast, const Corpus& corpus, const CitationGraph& graph) {
  return Evaluator(corpus, graph).evaluate(ast);
}

DocSet op_citations(const DocSet& inner, const CitationGraph& graph) {
  std::vector<DocIndex> out;
  for (auto r : inner) out.insert(out.end(), graph.cited_by[r].begin(), graph.cited_by[r].end());
  return sorted_unique(std::move(out));
}

DocSet op_references(const DocSet& inner, const Corpus& corpus) {
  std::vector<DocIndex> out;
  for (auto r : inner) {
    for (const auto& ref : corpus.record(r).references) {
      if (auto pos = corpus.find(ref)) out.push_back(*pos);
    }
  }
  return sorted_unique(std::move(out));
}

std::vector<FacetCount> facet_counts(std::span<const DocIndex> docs, const Corpus& corpus,
                                     std::string_view field) {
  std::map<std::string, std::size_t> tally;
  if (field == "bibstem") {
    for (auto i : docs) ++tally[corpus.record(i).bibstem];
  } else if (field == "year") {
    for (auto i : docs) ++tally[std::to_string(corpus.record(i).year)];
  } else if (field == "property") {
    for (auto i : docs)
      for (const auto& p : corpus.record(i).properties) ++tally[p];
  } else {
    throw Error(ErrorKind::UnknownField, "cannot facet on '" + std::string(field) + "'");
  }
  std::vector<FacetCount> out(tally.begin(), tally.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const FacetCount& a, const FacetCount& b) { return a.second > b.second; });
  return out;
}

}  // namespace adsm
