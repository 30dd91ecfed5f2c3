#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cctree/ast.hpp"

namespace cctree {

// Lexical token categories for the supported Java subset.
enum class LexKind {
  Identifier,
  IntegerLiteral,
  StringLiteral,
  CharLiteral,
  BooleanLiteral,
  NullLiteral,
  Keyword,
  Symbol,
  EndOfInput,
};

struct LexToken {
  LexKind kind = LexKind::EndOfInput;
  std::string text;        // literal tokens carry their unquoted, unescaped value
  std::size_t offset = 0;  // byte offset into the source
  int line = 1;            // 1-based
  int column = 1;          // 1-based, in bytes
};

struct ParseDiagnostic {
  int line = 0;
  int column = 0;
  std::string message;
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(ParseDiagnostic diagnostic)
      : std::runtime_error(std::to_string(diagnostic.line) + ":" +
                           std::to_string(diagnostic.column) + ": " + diagnostic.message),
        diagnostic_(std::move(diagnostic)) {}

  const ParseDiagnostic& diagnostic() const { return diagnostic_; }

 private:
  ParseDiagnostic diagnostic_;
};

// A method pulled out of a compilation unit, with its AST re-rooted at the
// method_declaration node and the exact source slice it was parsed from.
struct MethodUnit {
  std::string qualified_name;  // "ClassName.methodName(arity)"
  Ast ast;
  std::string source_text;
};

// Tokenizes the full source. Throws ParseError on malformed input
// (unterminated literals or comments, stray characters).
std::vector<LexToken> lex(std::string_view source);

// Parses a compilation unit containing exactly one top-level class
// declaration. The resulting tree satisfies the Ast invariants: every leaf
// carries a token and interior nodes do not.
Ast parse_compilation_unit(std::string_view source);

// Extracts every method of the unit's class, in declaration order. `source`
// must be the text `ast` was parsed from; spans are used to slice out each
// method body, so an AST without spans is rejected.
std::vector<MethodUnit> extract_methods(const Ast& ast, std::string_view source);

}  // namespace cctree
