#include "adsm/query.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "adsm/error.hpp"
#include "adsm/record.hpp"
#include "json.hpp"

namespace adsm {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_word_break(char c) { return is_space(c) || c == '(' || c == ')' || c == '"'; }

bool is_field_name(std::string_view s) {
  if (s.empty()) return false;
  auto first = static_cast<unsigned char>(s.front());
  if (!std::isalpha(first) && first != '_') return false;
  return std::all_of(s.begin(), s.end(), [](char ch) {
    auto c = static_cast<unsigned char>(ch);
    return std::isalnum(c) || c == '_';
  });
}

}  // namespace

std::vector<Token> tokenize(std::string_view input) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = input.size();
  while (i < n) {
    char c = input[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (c == '(') {
      out.push_back({TokenKind::LParen, "(", i++});
      continue;
    }
    if (c == ')') {
      out.push_back({TokenKind::RParen, ")", i++});
      continue;
    }
    if (c == '"') {
      auto close = input.find('"', i + 1);
      if (close == std::string_view::npos) {
        throw Error(ErrorKind::UnterminatedQuote,
                    "quote opened at offset " + std::to_string(i) + " is never closed");
      }
      out.push_back({TokenKind::Phrase, std::string(input.substr(i + 1, close - i - 1)), i});
      i = close + 1;
      continue;
    }
    if (c == '-') {
      out.push_back({TokenKind::Minus, "-", i++});
      continue;
    }

    std::size_t start = i;
    while (i < n && !is_word_break(input[i])) ++i;
    std::string_view word = input.substr(start, i - start);

    if (i < n && input[i] == '(' && (word == "citations" || word == "references")) {
      out.push_back({TokenKind::Func, std::string(word), start});
      ++i;
      continue;
    }
    if (word == "OR") {
      out.push_back({TokenKind::Or, "OR", start});
      continue;
    }
    auto colon = word.find(':');
    if (colon != std::string_view::npos && is_field_name(word.substr(0, colon))) {
      out.push_back({TokenKind::Field, std::string(word.substr(0, colon)), start});
      if (colon + 1 < word.size()) {
        out.push_back({TokenKind::Word, std::string(word.substr(colon + 1)), start + colon + 1});
      }
      continue;
    }
    out.push_back({TokenKind::Word, std::string(word), start});
  }
  if (out.empty()) throw Error(ErrorKind::EmptyQuery, "query is empty");
  return out;
}

// ---------------------------------------------------------------------------

QueryNode QueryNode::term(std::string field, std::string value, MatchKind match) {
  QueryNode n;
  n.kind = NodeKind::Term;
  n.field = std::move(field);
  n.value = std::move(value);
  n.match = match;
  return n;
}

QueryNode QueryNode::year_range(int lo, int hi) {
  QueryNode n;
  n.kind = NodeKind::YearRange;
  n.lo = lo;
  n.hi = hi;
  return n;
}

QueryNode QueryNode::all_of(std::vector<QueryNode> children) {
  QueryNode n;
  n.kind = NodeKind::And;
  n.children = std::move(children);
  return n;
}

QueryNode QueryNode::any_of(std::vector<QueryNode> children) {
  QueryNode n;
  n.kind = NodeKind::Or;
  n.children = std::move(children);
  return n;
}

QueryNode QueryNode::negate(QueryNode child) {
  QueryNode n;
  n.kind = NodeKind::Not;
  n.children.push_back(std::move(child));
  return n;
}

QueryNode QueryNode::func(FuncOp op, QueryNode child) {
  QueryNode n;
  n.kind = NodeKind::Func;
  n.op = op;
  n.children.push_back(std::move(child));
  return n;
}

bool is_known_field(std::string_view field) {
  static constexpr std::string_view kFields[] = {"",     "title", "abs",      "author",  "bibstem",
                                                 "page", "year",  "property", "database"};
  return std::find(std::begin(kFields), std::end(kFields), field) != std::end(kFields);
}

std::string_view to_string(MatchKind m) {
  switch (m) {
    case MatchKind::Token: return "token";
    case MatchKind::Phrase: return "phrase";
    case MatchKind::Prefix: return "prefix";
    case MatchKind::FirstAuthor: return "first_author";
  }
  return "?";
}

std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Term: return "term";
    case NodeKind::YearRange: return "year_range";
    case NodeKind::And: return "and";
    case NodeKind::Or: return "or";
    case NodeKind::Not: return "not";
    case NodeKind::Func: return "func";
  }
  return "?";
}

std::string_view to_string(FuncOp op) {
  return op == FuncOp::Citations ? "citations" : "references";
}

// ---------------------------------------------------------------------------

namespace {

bool parse_int(std::string_view s, int& out) {
  if (s.empty() || s.size() > 6) return false;
  if (!std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

QueryNode make_year_term(std::string_view raw, bool quoted) {
  auto trimmed = fold_value(raw);
  std::string_view s = trimmed;
  int lo = 0;
  int hi = 0;
  if (parse_int(s, lo)) {
    return QueryNode::term("year", std::to_string(lo), quoted ? MatchKind::Phrase : MatchKind::Token);
  }
  auto dash = s.find('-');
  if (dash != std::string_view::npos && parse_int(s.substr(0, dash), lo) &&
      parse_int(s.substr(dash + 1), hi)) {
    if (lo > hi) {
      throw Error(ErrorKind::BadYearRange,
                  "range " + std::string(s) + " has its lower bound above its upper bound");
    }
    return QueryNode::year_range(lo, hi);
  }
  throw Error(ErrorKind::BadYearRange, "'" + std::string(raw) + "' is not a year or year range");
}

QueryNode make_term(const std::string& field, std::string_view raw, bool quoted) {
  if (field == "year") return make_year_term(raw, quoted);

  MatchKind kind = quoted ? MatchKind::Phrase : MatchKind::Token;
  std::string_view text = raw;
  if (quoted) {
    bool anchored = false;
    if (field == "author" && !text.empty() && text.front() == '^') {
      anchored = true;
      text.remove_prefix(1);
      kind = MatchKind::FirstAuthor;
    }
    if (!text.empty() && text.back() == '*') {
      if (anchored) {
        throw Error(ErrorKind::BadWildcard, "a first-author anchor cannot be combined with '*'");
      }
      text.remove_suffix(1);
      kind = MatchKind::Prefix;
    }
  }
  if (text.find('*') != std::string_view::npos) {
    throw Error(ErrorKind::BadWildcard,
                "'*' is only allowed at the end of a quoted value: '" + std::string(raw) + "'");
  }
  auto value = fold_value(text);
  if (value.empty()) {
    throw Error(kind == MatchKind::Prefix ? ErrorKind::BadWildcard : ErrorKind::UnexpectedToken,
                "empty search value");
  }
  return QueryNode::term(field, std::move(value), kind);
}

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

  QueryNode run() {
    if (tokens_.empty()) throw Error(ErrorKind::EmptyQuery, "query is empty");
    auto root = parse_or();
    if (!at_end()) {
      // Only a stray ')' stops parse_or early.
      throw Error(ErrorKind::UnbalancedParentheses,
                  "unmatched ')' at offset " + std::to_string(peek().offset));
    }
    return root;
  }

 private:
  bool at_end() const { return pos_ >= tokens_.size(); }
  const Token& peek() const { return tokens_[pos_]; }
  bool peek_is(TokenKind k) const { return !at_end() && peek().kind == k; }

  QueryNode parse_or() {
    std::vector<QueryNode> items;
    append_flat(items, parse_and(), NodeKind::Or);
    while (peek_is(TokenKind::Or)) {
      ++pos_;
      if (at_end() || peek_is(TokenKind::Or) || peek_is(TokenKind::RParen)) {
        throw Error(ErrorKind::DanglingOperator, "OR is missing its right-hand side");
      }
      append_flat(items, parse_and(), NodeKind::Or);
    }
    if (items.size() == 1) return std::move(items.front());
    return QueryNode::any_of(std::move(items));
  }

  QueryNode parse_and() {
    std::vector<QueryNode> items;
    while (!at_end() && !peek_is(TokenKind::Or) && !peek_is(TokenKind::RParen)) {
      append_flat(items, parse_unary(), NodeKind::And);
    }
    if (items.empty()) {
      if (peek_is(TokenKind::Or)) {
        throw Error(ErrorKind::DanglingOperator, "OR is missing its left-hand side");
      }
      throw Error(ErrorKind::UnexpectedToken, "empty group");
    }
    bool all_negated = std::all_of(items.begin(), items.end(),
                                   [](const QueryNode& n) { return n.kind == NodeKind::Not; });
    if (all_negated) {
      throw Error(ErrorKind::PureNegationQuery,
                  "a clause must contain at least one term that is not negated");
    }
    if (items.size() == 1) return std::move(items.front());
    return QueryNode::all_of(std::move(items));
  }

  QueryNode parse_unary() {
    if (!peek_is(TokenKind::Minus)) return parse_primary();
    ++pos_;
    if (at_end() || peek_is(TokenKind::Or) || peek_is(TokenKind::RParen) ||
        peek_is(TokenKind::Minus)) {
      throw Error(ErrorKind::DanglingOperator, "'-' must be followed by a term or group");
    }
    return QueryNode::negate(parse_primary());
  }

  QueryNode parse_primary() {
    const Token& tok = peek();
    switch (tok.kind) {
      case TokenKind::LParen: {
        ++pos_;
        auto inner = parse_or();
        expect_close(tok);
        return inner;
      }
      case TokenKind::Func: {
        ++pos_;
        auto op = tok.text == "citations" ? FuncOp::Citations : FuncOp::References;
        auto inner = parse_or();
        expect_close(tok);
        return QueryNode::func(op, std::move(inner));
      }
      case TokenKind::Field: {
        ++pos_;
        if (at_end() || !(peek_is(TokenKind::Phrase) || peek_is(TokenKind::Word))) {
          throw Error(ErrorKind::UnexpectedToken, "field '" + tok.text + ":' has no value");
        }
        const Token& value = tokens_[pos_++];
        return make_term(tok.text, value.text, value.kind == TokenKind::Phrase);
      }
      case TokenKind::Phrase:
        ++pos_;
        return make_term("", tok.text, true);
      case TokenKind::Word:
        ++pos_;
        return make_term("", tok.text, false);
      default:
        throw Error(ErrorKind::UnexpectedToken,
                    "unexpected '" + tok.text + "' at offset " + std::to_string(tok.offset));
    }
  }

  void expect_close(const Token& open) {
    if (!peek_is(TokenKind::RParen)) {
      throw Error(ErrorKind::UnbalancedParentheses,
                  "'(' at offset " + std::to_string(open.offset) + " is never closed");
    }
    ++pos_;
  }

  static void append_flat(std::vector<QueryNode>& items, QueryNode node, NodeKind kind) {
    if (node.kind == kind) {
      for (auto& child : node.children) items.push_back(std::move(child));
    } else {
      items.push_back(std::move(node));
    }
  }

  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;
};

void print(const QueryNode& n, std::string& out);

void print_grouped(const QueryNode& n, std::string& out) {
  bool group = n.kind == NodeKind::And || n.kind == NodeKind::Or;
  if (group) out.push_back('(');
  print(n, out);
  if (group) out.push_back(')');
}

void print(const QueryNode& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::Term:
      if (!n.field.empty()) out += n.field + ":";
      switch (n.match) {
        case MatchKind::Token: out += n.value; break;
        case MatchKind::Phrase: out += "\"" + n.value + "\""; break;
        case MatchKind::Prefix: out += "\"" + n.value + "*\""; break;
        case MatchKind::FirstAuthor: out += "\"^" + n.value + "\""; break;
      }
      break;
    case NodeKind::YearRange:
      out += "year:" + std::to_string(n.lo) + "-" + std::to_string(n.hi);
      break;
    case NodeKind::And:
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out.push_back(' ');
        if (n.children[i].kind == NodeKind::Or) print_grouped(n.children[i], out);
        else print(n.children[i], out);
      }
      break;
    case NodeKind::Or:
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += " OR ";
        print(n.children[i], out);
      }
      break;
    case NodeKind::Not:
      out.push_back('-');
      print_grouped(n.children.front(), out);
      break;
    case NodeKind::Func:
      out += std::string(to_string(n.op)) + "(";
      print(n.children.front(), out);
      out.push_back(')');
      break;
  }
}

nlohmann::ordered_json dump(const QueryNode& n) {
  nlohmann::ordered_json j;
  j["node"] = to_string(n.kind);
  switch (n.kind) {
    case NodeKind::Term:
      j["field"] = n.field.empty() ? "default" : n.field;
      j["value"] = n.value;
      j["match"] = to_string(n.match);
      break;
    case NodeKind::YearRange:
      j["lo"] = n.lo;
      j["hi"] = n.hi;
      break;
    case NodeKind::And:
    case NodeKind::Or: {
      auto children = nlohmann::ordered_json::array();
      for (const auto& c : n.children) children.push_back(dump(c));
      j["children"] = std::move(children);
      break;
    }
    case NodeKind::Not:
      j["child"] = dump(n.children.front());
      break;
    case NodeKind::Func:
      j["op"] = to_string(n.op);
      j["child"] = dump(n.children.front());
      break;
  }
  return j;
}

}  // namespace

QueryAst parse(const std::vector<Token>& tokens) { return Parser(tokens).run(); }

QueryAst parse(std::string_view query) {
  auto tokens = tokenize(query);
  return parse(tokens);
}

std::string print_canonical(const QueryAst& ast) {
  std::string out;
  print(ast, out);
  return out;
}

std::string explain(const QueryAst& ast, int indent) { return dump(ast).dump(indent); }

std::string_view grammar_help() {
  return R"(Query grammar
  term            bare word or "quoted phrase"; searches title, abstract and body
  field:value     fields: title abs author bibstem page year property database
  a b             both (juxtaposition is AND)
  a OR b          either; AND binds tighter than OR
  -a              exclude records matching a (needs a positive term alongside)
  ( ... )         grouping
  year:2013       exact year;  year:2000-2013 inclusive range
  "L*"            trailing wildcard inside quotes (prefix match)
  author:"^Name"  Name must be the first author
  citations(q)    records citing any record matching q
  references(q)   records referenced by any record matching q

Examples
  database:"astronomy" year:2013 property:"refereed"
  citations(bibstem:"MNRAS" year:2013) property:"refereed"
  "weak lensing" bibstem:"ApJ" -page:"L*" year:2013
  (title:"weak lensing" OR abs:"weak lensing") bibstem:"ApJ" -page:"L*" year:2013
  references("weak lensing" year:2013) bibstem:"ApJ" -page:"L*"
  author:"^Riess, Adam G." year:2000-2013 property:"refereed"
)";
}

}  // namespace adsm
