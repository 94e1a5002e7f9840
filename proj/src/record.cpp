#include "adsm/record.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_set>

#include "adsm/error.hpp"
#include "json.hpp"

namespace adsm {

using nlohmann::json;

std::uint64_t Record::reads_in(int y) const {
  auto it = reads.find(y);
  return it == reads.end() ? 0 : it->second;
}

std::string fold_value(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  bool pending_space = false;
  for (char ch : value) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::string normalize_author(std::string_view name) { return fold_value(name); }

void validate(const Record& r) {
  if (r.id.empty()) throw Error(ErrorKind::MalformedRecord, "empty id");
  if (r.authors.empty()) throw Error(ErrorKind::MalformedRecord, r.id + ": empty author list");
  for (const auto& a : r.authors) {
    if (a.empty()) throw Error(ErrorKind::MalformedRecord, r.id + ": blank author name");
  }
  if (r.year < kMinYear || r.year > kMaxYear) {
    throw Error(ErrorKind::MalformedRecord,
                r.id + ": year " + std::to_string(r.year) + " out of range");
  }
  if (r.bibstem.empty()) throw Error(ErrorKind::MalformedRecord, r.id + ": empty bibstem");
  std::unordered_set<std::string_view> seen;
  for (const auto& ref : r.references) {
    if (!seen.insert(ref).second) {
      throw Error(ErrorKind::MalformedRecord, r.id + ": duplicate reference " + ref);
    }
  }
  for (const auto& [y, n] : r.reads) {
    (void)n;
    if (y < kMinYear || y > kMaxYear) {
      throw Error(ErrorKind::MalformedRecord,
                  r.id + ": reads year " + std::to_string(y) + " out of range");
    }
  }
}

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorKind::MalformedRecord, what);
}

std::string required_string(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) malformed(std::string("missing field '") + key + "'");
  if (!it->is_string()) malformed(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::string optional_string(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return {};
  if (!it->is_string()) malformed(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::vector<std::string> string_list(const json& doc, const char* key, bool required) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) {
    if (required) malformed(std::string("missing field '") + key + "'");
    return {};
  }
  if (!it->is_array()) malformed(std::string("field '") + key + "' must be an array");
  std::vector<std::string> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_string()) malformed(std::string("field '") + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

int parse_year_key(const std::string& key) {
  int y = 0;
  auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), y);
  if (ec != std::errc{} || ptr != key.data() + key.size()) {
    malformed("reads key '" + key + "' is not a year");
  }
  return y;
}

}  // namespace

Record parse_record_document(std::string_view line) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) malformed("record document must be an object");

  Record r;
  r.id = required_string(doc, "id");

  for (auto& a : string_list(doc, "authors", true)) r.authors.push_back(normalize_author(a));

  auto year = doc.find("year");
  if (year == doc.end()) malformed("missing field 'year'");
  if (!year->is_number_integer()) malformed("field 'year' must be an integer");
  auto y = year->get<std::int64_t>();
  if (y < kMinYear || y > kMaxYear) malformed("year " + std::to_string(y) + " out of range");
  r.year = static_cast<int>(y);

  r.bibstem = required_string(doc, "bibstem");
  r.page = optional_string(doc, "page");
  r.title = optional_string(doc, "title");
  r.abstract = optional_string(doc, "abstract");
  if (auto body = doc.find("body"); body != doc.end() && !body->is_null()) {
    if (!body->is_string()) malformed("field 'body' must be a string");
    r.body = body->get<std::string>();
  }
  for (auto& p : string_list(doc, "properties", false)) r.properties.insert(fold_value(p));
  for (auto& d : string_list(doc, "databases", false)) r.databases.insert(fold_value(d));
  r.references = string_list(doc, "references", false);

  if (auto reads = doc.find("reads"); reads != doc.end() && !reads->is_null()) {
    if (!reads->is_object()) malformed("field 'reads' must be an object");
    for (const auto& [key, value] : reads->items()) {
      if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
        malformed("reads count for '" + key + "' must be a non-negative integer");
      }
      auto count = value.get<std::uint64_t>();
      if (count != 0) r.reads[parse_year_key(key)] = count;
      else parse_year_key(key);
    }
  }

  validate(r);
  return r;
}

std::string to_record_document(const Record& r) {
  json doc = json::object();
  doc["id"] = r.id;
  doc["authors"] = r.authors;
  doc["year"] = r.year;
  doc["bibstem"] = r.bibstem;
  doc["page"] = r.page;
  doc["title"] = r.title;
  doc["abstract"] = r.abstract;
  if (r.body) doc["body"] = *r.body;
  doc["properties"] = r.properties;
  doc["databases"] = r.databases;
  doc["references"] = r.references;
  json reads = json::object();
  for (const auto& [y, n] : r.reads) reads[std::to_string(y)] = n;
  doc["reads"] = reads;
  return doc.dump();
}

}  // namespace adsm
