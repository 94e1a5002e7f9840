#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace adsm {

// ---------------------------------------------------------------------------
// Tokens
// ---------------------------------------------------------------------------

enum class TokenKind {
  Field,   // `name:` prefix; text = name
  Phrase,  // "..." ; text = raw contents without quotes
  Word,    // bare word
  Minus,   // `-` before a term or group
  Or,      // bare `OR`
  LParen,
  RParen,
  Func,    // `citations(` / `references(`; text = function name
};

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t offset = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Throws Error(EmptyQuery) for blank input, Error(UnterminatedQuote) for an
/// unbalanced double quote.
std::vector<Token> tokenize(std::string_view input);

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

enum class MatchKind { Token, Phrase, Prefix, FirstAuthor };
enum class NodeKind { Term, YearRange, And, Or, Not, Func };
enum class FuncOp { Citations, References };

/// One node of a parsed query. Only the members relevant to `kind` carry
/// meaning; the rest stay default so structural equality is exact.
///
/// Term:      field ("" for the default field), value (folded), match
/// YearRange: lo <= hi, both inclusive
/// And / Or:  two or more children, never directly nested in a node of
///            the same kind
/// Not:       exactly one child
/// Func:      op plus exactly one child (a complete query)
struct QueryNode {
  NodeKind kind = NodeKind::Term;
  std::string field;
  std::string value;
  MatchKind match = MatchKind::Token;
  int lo = 0;
  int hi = 0;
  FuncOp op = FuncOp::Citations;
  std::vector<QueryNode> children;

  static QueryNode term(std::string field, std::string value, MatchKind match = MatchKind::Token);
  static QueryNode year_range(int lo, int hi);
  static QueryNode all_of(std::vector<QueryNode> children);
  static QueryNode any_of(std::vector<QueryNode> children);
  static QueryNode negate(QueryNode child);
  static QueryNode func(FuncOp op, QueryNode child);

  friend bool operator==(const QueryNode&, const QueryNode&) = default;
};

using QueryAst = QueryNode;

/// Field names the evaluator understands ("" is the default field).
bool is_known_field(std::string_view field);

std::string_view to_string(MatchKind m);
std::string_view to_string(NodeKind k);
std::string_view to_string(FuncOp op);

/// Implicit AND binds tighter than OR; `-` negates the next term or group.
/// And/Or nodes come out flattened and single-child groups collapse.
QueryAst parse(const std::vector<Token>& tokens);
QueryAst parse(std::string_view query);

/// Deterministic text form; parse(print_canonical(ast)) == ast for any
/// valid AST.
std::string print_canonical(const QueryAst& ast);

/// Structured AST dump (JSON), pretty-printed with the given indent.
std::string explain(const QueryAst& ast, int indent = 2);

/// Short reference text listing the grammar with worked examples.
std::string_view grammar_help();

}  // namespace adsm
