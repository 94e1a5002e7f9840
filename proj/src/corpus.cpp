#include "adsm/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <unordered_set>

namespace adsm {

namespace {

bool is_token_byte(unsigned char c) { return c >= 0x80 || std::isalnum(c); }

DocSet collect_prefix(const std::map<std::string, DocSet, std::less<>>& keys,
                      const std::string& prefix) {
  DocSet out;
  for (auto it = keys.lower_bound(prefix); it != keys.end(); ++it) {
    if (it->first.compare(0, prefix.size(), prefix) != 0) break;
    DocSet merged;
    std::set_union(out.begin(), out.end(), it->second.begin(), it->second.end(),
                   std::back_inserter(merged));
    out.swap(merged);
  }
  return out;
}

}  // namespace

std::vector<std::string> tokenize_text(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (is_token_byte(c)) {
      current.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

void TextIndex::add(DocIndex doc, std::string_view text) {
  auto tokens = tokenize_text(text);
  for (std::uint32_t pos = 0; pos < tokens.size(); ++pos) {
    auto& list = terms_[tokens[pos]];
    if (list.empty() || list.back().doc != doc) list.push_back(Posting{doc, {}});
    list.back().positions.push_back(pos);
  }
}

const TextIndex::PostingList* TextIndex::find(const std::string& term) const {
  auto it = terms_.find(term);
  return it == terms_.end() ? nullptr : &it->second;
}

std::vector<const TextIndex::PostingList*> TextIndex::with_prefix(const std::string& prefix) const {
  std::vector<const PostingList*> out;
  for (auto it = terms_.lower_bound(prefix); it != terms_.end(); ++it) {
    if (it->first.compare(0, prefix.size(), prefix) != 0) break;
    out.push_back(&it->second);
  }
  return out;
}

void KeywordIndex::add(DocIndex doc, const std::string& key) {
  auto& docs = keys_[key];
  if (docs.empty() || docs.back() != doc) docs.push_back(doc);
}

DocSet KeywordIndex::equal(const std::string& key) const {
  auto it = keys_.find(key);
  return it == keys_.end() ? DocSet{} : it->second;
}

DocSet KeywordIndex::with_prefix(const std::string& prefix) const {
  return collect_prefix(keys_, prefix);
}

Corpus Corpus::ingest(std::istream& documents) {
  std::vector<Candidate> candidates;
  IngestReport report;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(documents, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      candidates.push_back(Candidate{lineno, parse_record_document(line)});
    } catch (const Error& e) {
      report.rejects.push_back(IngestIssue{lineno, e.kind(), e.what()});
    }
  }
  return build(std::move(candidates), std::move(report));
}

Corpus Corpus::ingest(std::span<const std::string> documents) {
  std::vector<Candidate> candidates;
  IngestReport report;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    const auto& doc = documents[i];
    if (doc.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    try {
      candidates.push_back(Candidate{i + 1, parse_record_document(doc)});
    } catch (const Error& e) {
      report.rejects.push_back(IngestIssue{i + 1, e.kind(), e.what()});
    }
  }
  return build(std::move(candidates), std::move(report));
}

Corpus Corpus::ingest_file(const std::string& path) {
  if (path == "-") return ingest(std::cin);
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open record file " + path);
  return ingest(in);
}

Corpus Corpus::from_records(std::vector<Record> records) {
  std::vector<Candidate> candidates;
  IngestReport report;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& r = records[i];
    try {
      for (auto& a : r.authors) a = normalize_author(a);
      validate(r);
      candidates.push_back(Candidate{i + 1, std::move(r)});
    } catch (const Error& e) {
      report.rejects.push_back(IngestIssue{i + 1, e.kind(), e.what()});
    }
  }
  return build(std::move(candidates), std::move(report));
}

Corpus Corpus::build(std::vector<Candidate> candidates, IngestReport report) {
  Corpus c;
  std::unordered_set<std::string> seen;
  std::vector<Record> accepted;
  for (auto& cand : candidates) {
    if (!seen.insert(cand.record.id).second) {
      report.rejects.push_back(
          IngestIssue{cand.line, ErrorKind::DuplicateId, "DuplicateId: " + cand.record.id});
      continue;
    }
    accepted.push_back(std::move(cand.record));
  }
  std::sort(report.rejects.begin(), report.rejects.end(),
            [](const IngestIssue& a, const IngestIssue& b) { return a.line < b.line; });
  std::sort(accepted.begin(), accepted.end(),
            [](const Record& a, const Record& b) { return a.id < b.id; });
  report.accepted = accepted.size();

  c.records_ = std::move(accepted);
  c.report_ = std::move(report);
  c.by_id_.reserve(c.records_.size());
  for (DocIndex i = 0; i < c.records_.size(); ++i) {
    const auto& r = c.records_[i];
    c.by_id_.emplace(r.id, i);
    c.text_[static_cast<int>(TextField::Title)].add(i, r.title);
    c.text_[static_cast<int>(TextField::Abstract)].add(i, r.abstract);
    if (r.body) c.text_[static_cast<int>(TextField::Body)].add(i, *r.body);
    for (const auto& a : r.authors) c.authors_.add(i, a);
    c.first_authors_.add(i, r.authors.front());
    c.bibstems_.add(i, fold_value(r.bibstem));
    c.pages_.add(i, fold_value(r.page));
    for (const auto& p : r.properties) c.properties_.add(i, p);
    for (const auto& d : r.databases) c.databases_.add(i, d);
    c.years_[r.year].push_back(i);
  }
  return c;
}

std::optional<DocIndex> Corpus::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

int Corpus::latest_year() const {
  int latest = 0;
  for (const auto& r : records_) {
    latest = std::max(latest, r.year);
    if (!r.reads.empty()) latest = std::max(latest, r.reads.rbegin()->first);
  }
  return latest;
}

std::vector<DocIndex> Corpus::resolve(std::span<const std::string> ids) const {
  std::vector<DocIndex> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    auto pos = find(id);
    if (!pos) throw Error(ErrorKind::UnknownId, "no record with id '" + id + "'");
    out.push_back(*pos);
  }
  return out;
}

CitationGraph build_citation_graph(const Corpus& corpus) {
  CitationGraph g;
  g.citing.resize(corpus.size());
  g.cited_by.resize(corpus.size());
  for (DocIndex a = 0; a < corpus.size(); ++a) {
    for (const auto& ref : corpus.record(a).references) {
      auto b = corpus.find(ref);
      if (!b) {
        ++g.dangling;
        continue;
      }
      g.citing[a].push_back(*b);
      g.cited_by[*b].push_back(a);
    }
    std::sort(g.citing[a].begin(), g.citing[a].end());
  }
  // cited_by lists were filled in ascending citing order already.
  return g;
}

}  // namespace adsm
