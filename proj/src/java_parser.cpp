#include "cctree/java_parser.hpp"

#include <array>
#include <cstdint>
#include <unordered_set>
#include <utility>

namespace cctree {

namespace {

const std::unordered_set<std::string_view> kKeywords = {
    "class", "if", "else", "while", "for", "return",
    "public", "private", "protected", "static", "final",
};

const std::unordered_set<std::string_view> kModifiers = {
    "public", "private", "protected", "static", "final",
};

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$';
}

bool is_ident_part(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

bool is_digit(char c) { return c >= '0' && c <= '9'; }

[[noreturn]] void fail(int line, int column, std::string message) {
  throw ParseError(ParseDiagnostic{line, column, std::move(message)});
}

class Lexer {
 public:
  explicit Lexer(std::string_view source) : src_(source) {}

  std::vector<LexToken> run() {
    std::vector<LexToken> out;
    for (;;) {
      skip_trivia();
      LexToken tok = next_token();
      bool done = tok.kind == LexKind::EndOfInput;
      out.push_back(std::move(tok));
      if (done) break;
    }
    return out;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;

  bool eof() const { return pos_ >= src_.size(); }
  char cur() const { return src_[pos_]; }
  char ahead(std::size_t n) const {
    return pos_ + n < src_.size() ? src_[pos_ + n] : '\0';
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_trivia() {
    for (;;) {
      if (eof()) return;
      char c = cur();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
        bump();
        continue;
      }
      if (c == '/' && ahead(1) == '/') {
        while (!eof() && cur() != '\n') bump();
        continue;
      }
      if (c == '/' && ahead(1) == '*') {
        int open_line = line_, open_col = column_;
        bump();
        bump();
        for (;;) {
          if (eof()) fail(open_line, open_col, "unterminated block comment");
          if (cur() == '*' && ahead(1) == '/') {
            bump();
            bump();
            break;
          }
          bump();
        }
        continue;
      }
      return;
    }
  }

  LexToken start_token(LexKind kind) const {
    LexToken tok;
    tok.kind = kind;
    tok.offset = pos_;
    tok.line = line_;
    tok.column = column_;
    return tok;
  }

  char read_escape(int line, int col) {
    bump();  // consume backslash
    if (eof()) fail(line, col, "unterminated escape sequence");
    char e = cur();
    bump();
    switch (e) {
      case 'n': return '\n';
      case 't': return '\t';
      case 'r': return '\r';
      case 'b': return '\b';
      case 'f': return '\f';
      case '0': return '\0';
      case '\\': return '\\';
      case '"': return '"';
      case '\'': return '\'';
      default:
        fail(line, col, std::string("unsupported escape sequence '\\") + e + "'");
    }
  }

  LexToken next_token() {
    if (eof()) return start_token(LexKind::EndOfInput);
    char c = cur();

    if (is_ident_start(c)) {
      LexToken tok = start_token(LexKind::Identifier);
      std::size_t begin = pos_;
      while (!eof() && is_ident_part(cur())) bump();
      tok.text = std::string(src_.substr(begin, pos_ - begin));
      if (tok.text == "true" || tok.text == "false")
        tok.kind = LexKind::BooleanLiteral;
      else if (tok.text == "null")
        tok.kind = LexKind::NullLiteral;
      else if (kKeywords.count(tok.text))
        tok.kind = LexKind::Keyword;
      return tok;
    }

    if (is_digit(c)) {
      LexToken tok = start_token(LexKind::IntegerLiteral);
      std::size_t begin = pos_;
      while (!eof() && is_digit(cur())) bump();
      if (!eof() && is_ident_start(cur()))
        fail(tok.line, tok.column, "malformed numeric literal");
      tok.text = std::string(src_.substr(begin, pos_ - begin));
      return tok;
    }

    if (c == '"') {
      LexToken tok = start_token(LexKind::StringLiteral);
      bump();
      std::string value;
      for (;;) {
        if (eof() || cur() == '\n')
          fail(tok.line, tok.column, "unterminated string literal");
        if (cur() == '"') {
          bump();
          break;
        }
        if (cur() == '\\') {
          value.push_back(read_escape(tok.line, tok.column));
        } else {
          value.push_back(cur());
          bump();
        }
      }
      tok.text = std::move(value);
      return tok;
    }

    if (c == '\'') {
      LexToken tok = start_token(LexKind::CharLiteral);
      bump();
      if (eof() || cur() == '\n')
        fail(tok.line, tok.column, "unterminated character literal");
      char value;
      if (cur() == '\\') {
        value = read_escape(tok.line, tok.column);
      } else {
        value = cur();
        bump();
      }
      if (eof() || cur() != '\'')
        fail(tok.line, tok.column, "unterminated character literal");
      bump();
      tok.text = std::string(1, value);
      return tok;
    }

    LexToken tok = start_token(LexKind::Symbol);
    auto two = [&](char a, char b) { return c == a && ahead(1) == b; };
    if (two('=', '=') || two('!', '=') || two('<', '=') || two('>', '=') ||
        two('&', '&') || two('|', '|')) {
      tok.text = std::string(src_.substr(pos_, 2));
      bump();
      bump();
      return tok;
    }
    switch (c) {
      case '(': case ')': case '{': case '}': case '[': case ']':
      case ';': case ',': case '.': case '=': case '<': case '>':
      case '+': case '-': case '*': case '/': case '%': case '!':
        tok.text = std::string(1, c);
        bump();
        return tok;
      default:
        fail(tok.line, tok.column, std::string("unexpected character '") + c + "'");
    }
  }
};

// Statement-level node builder: spans cover the byte range [first token,
// one past last token] so method bodies can be sliced back out of the source.
class Parser {
 public:
  Parser(std::vector<LexToken> tokens, std::string_view source)
      : tokens_(std::move(tokens)), source_(source) {}

  AstNode compilation_unit() {
    AstNode cls = class_declaration();
    if (!at_end())
      error("expected end of input after the class declaration (one top-level class per unit)");
    return cls;
  }

 private:
  std::vector<LexToken> tokens_;
  std::string_view source_;
  std::size_t pos_ = 0;

  const LexToken& peek(std::size_t n = 0) const {
    std::size_t i = pos_ + n;
    if (i >= tokens_.size()) i = tokens_.size() - 1;  // EndOfInput sentinel
    return tokens_[i];
  }

  bool at_end() const { return peek().kind == LexKind::EndOfInput; }

  const LexToken& advance() {
    const LexToken& tok = tokens_[pos_];
    if (tok.kind != LexKind::EndOfInput) ++pos_;
    return tok;
  }

  [[noreturn]] void error(const std::string& message) const {
    const LexToken& tok = peek();
    fail(tok.line, tok.column, message);
  }

  bool at_symbol(std::string_view text) const {
    return peek().kind == LexKind::Symbol && peek().text == text;
  }

  bool at_keyword(std::string_view text) const {
    return peek().kind == LexKind::Keyword && peek().text == text;
  }

  const LexToken& expect_symbol(std::string_view text) {
    if (!at_symbol(text)) error("expected '" + std::string(text) + "'");
    return advance();
  }

  const LexToken& expect_identifier(const std::string& what) {
    if (peek().kind != LexKind::Identifier) error("expected " + what);
    return advance();
  }

  std::size_t token_end(const LexToken& tok) const {
    switch (tok.kind) {
      case LexKind::Identifier:
      case LexKind::Keyword:
      case LexKind::IntegerLiteral:
      case LexKind::BooleanLiteral:
      case LexKind::NullLiteral:
      case LexKind::Symbol:
        return tok.offset + tok.text.size();
      default:
        break;
    }
    // Quoted literals: scan to the closing quote (escapes may shrink text).
    std::size_t i = tok.offset + 1;
    char quote = source_[tok.offset];
    while (i < source_.size()) {
      if (source_[i] == '\\')
        i += 2;
      else if (source_[i] == quote)
        return i + 1;
      else
        ++i;
    }
    return source_.size();
  }

  std::size_t prev_end() const { return token_end(tokens_[pos_ - 1]); }

  static AstNode terminal(std::string kind, const LexToken& tok, std::size_t end) {
    AstNode node = make_terminal(std::move(kind), tok.text);
    node.span = SourceSpan{tok.offset, end};
    return node;
  }

  AstNode terminal(std::string kind, const LexToken& tok) const {
    return terminal(std::move(kind), tok, token_end(tok));
  }

  static AstNode interior(std::string kind, std::vector<AstNode> children,
                          std::size_t begin, std::size_t end) {
    AstNode node = make_node(std::move(kind), std::move(children));
    node.span = SourceSpan{begin, end};
    return node;
  }

  std::vector<AstNode> modifiers() {
    std::vector<AstNode> out;
    while (peek().kind == LexKind::Keyword && kModifiers.count(peek().text))
      out.push_back(terminal("modifier", advance()));
    return out;
  }

  AstNode class_declaration() {
    std::size_t begin = peek().offset;
    std::vector<AstNode> children = modifiers();
    if (!at_keyword("class")) error("expected 'class'");
    advance();
    children.push_back(terminal("identifier", expect_identifier("class name")));
    expect_symbol("{");
    std::vector<AstNode> members;
    while (!at_symbol("}")) {
      if (at_end()) error("expected '}' to close the class body");
      members.push_back(method_declaration());
    }
    if (!members.empty()) {
      std::size_t mb = members.front().span->begin;
      std::size_t me = members.back().span->end;
      children.push_back(interior("class_body", std::move(members), mb, me));
    }
    expect_symbol("}");
    return interior("class_declaration", std::move(children), begin, prev_end());
  }

  AstNode type_node() {
    const LexToken& name = expect_identifier("a type name");
    AstNode node = terminal("type_identifier", name);
    while (at_symbol("[")) {
      advance();
      expect_symbol("]");
      std::vector<AstNode> child;
      child.push_back(std::move(node));
      node = interior("array_type", std::move(child), name.offset, prev_end());
    }
    return node;
  }

  AstNode method_declaration() {
    std::size_t begin = peek().offset;
    std::vector<AstNode> children = modifiers();
    children.push_back(type_node());
    children.push_back(terminal("identifier", expect_identifier("a method name")));
    expect_symbol("(");
    std::vector<AstNode> params;
    if (!at_symbol(")")) {
      for (;;) {
        params.push_back(formal_parameter());
        if (at_symbol(",")) {
          advance();
          continue;
        }
        break;
      }
    }
    if (!params.empty()) {
      std::size_t pb = params.front().span->begin;
      std::size_t pe = params.back().span->end;
      children.push_back(interior("formal_parameters", std::move(params), pb, pe));
    }
    expect_symbol(")");
    std::optional<AstNode> body = block_braces();
    if (body) children.push_back(std::move(*body));
    return interior("method_declaration", std::move(children), begin, prev_end());
  }

  AstNode formal_parameter() {
    std::size_t begin = peek().offset;
    std::vector<AstNode> children;
    children.push_back(type_node());
    children.push_back(terminal("identifier", expect_identifier("a parameter name")));
    return interior("formal_parameter", std::move(children), begin, prev_end());
  }

  // '{' statement* '}'. Returns nothing when the braces contain no
  // statements: empty constructs are elided so leaves always carry tokens.
  std::optional<AstNode> block_braces() {
    std::size_t begin = peek().offset;
    expect_symbol("{");
    std::vector<AstNode> stmts;
    while (!at_symbol("}")) {
      if (at_end()) error("expected '}' to close the block");
      append_statement(stmts);
    }
    expect_symbol("}");
    if (stmts.empty()) return std::nullopt;
    return interior("block", std::move(stmts), begin, prev_end());
  }

  // Parses one statement into `out`. Statements that reduce to nothing
  // (bare ';', empty '{}') append nothing.
  void append_statement(std::vector<AstNode>& out) {
    std::optional<AstNode> stmt = statement();
    if (stmt) out.push_back(std::move(*stmt));
  }

  std::optional<AstNode> statement() {
    if (at_symbol(";")) {
      advance();
      return std::nullopt;
    }
    if (at_symbol("{")) return block_braces();
    if (at_keyword("if")) return if_statement();
    if (at_keyword("while")) return while_statement();
    if (at_keyword("for")) return for_statement();
    if (at_keyword("return")) return return_statement();
    if (looks_like_declaration()) {
      AstNode decl = local_variable_declaration();
      expect_symbol(";");
      decl.span->end = prev_end();
      return decl;
    }
    std::size_t begin = peek().offset;
    AstNode expr = expression();
    expect_symbol(";");
    std::vector<AstNode> child;
    child.push_back(std::move(expr));
    return interior("expression_statement", std::move(child), begin, prev_end());
  }

  // IDENT IDENT ... or IDENT ('[' ']')+ IDENT introduces a declaration.
  bool looks_like_declaration() const {
    if (peek().kind != LexKind::Identifier) return false;
    std::size_t n = 1;
    while (peek(n).kind == LexKind::Symbol && peek(n).text == "[" &&
           peek(n + 1).kind == LexKind::Symbol && peek(n + 1).text == "]")
      n += 2;
    return peek(n).kind == LexKind::Identifier;
  }

  AstNode local_variable_declaration() {
    std::size_t begin = peek().offset;
    std::vector<AstNode> children;
    children.push_back(type_node());
    std::size_t decl_begin = peek().offset;
    std::vector<AstNode> decl_children;
    decl_children.push_back(terminal("identifier", expect_identifier("a variable name")));
    if (at_symbol("=")) {
      advance();
      decl_children.push_back(expression());
    }
    children.push_back(
        interior("variable_declarator", std::move(decl_children), decl_begin, prev_end()));
    return interior("local_variable_declaration", std::move(children), begin, prev_end());
  }

  AstNode if_statement() {
    std::size_t begin = peek().offset;
    advance();  // 'if'
    expect_symbol("(");
    std::vector<AstNode> children;
    children.push_back(expression());
    expect_symbol(")");
    std::optional<AstNode> then_branch = statement();
    if (then_branch) children.push_back(std::move(*then_branch));
    if (at_keyword("else")) {
      std::size_t else_begin = peek().offset;
      advance();
      std::optional<AstNode> else_branch = statement();
      if (else_branch) {
        std::vector<AstNode> clause;
        clause.push_back(std::move(*else_branch));
        children.push_back(interior("else_clause", std::move(clause), else_begin, prev_end()));
      }
    }
    return interior("if_statement", std::move(children), begin, prev_end());
  }

  AstNode while_statement() {
    std::size_t begin = peek().offset;
    advance();  // 'while'
    expect_symbol("(");
    std::vector<AstNode> children;
    children.push_back(expression());
    expect_symbol(")");
    std::optional<AstNode> body = statement();
    if (body) children.push_back(std::move(*body));
    return interior("while_statement", std::move(children), begin, prev_end());
  }

  AstNode for_statement() {
    std::size_t begin = peek().offset;
    advance();  // 'for'
    expect_symbol("(");
    std::vector<AstNode> children;
    if (looks_like_declaration())
      children.push_back(local_variable_declaration());
    else
      children.push_back(expression());
    expect_symbol(";");
    children.push_back(expression());
    expect_symbol(";");
    children.push_back(expression());
    expect_symbol(")");
    std::optional<AstNode> body = statement();
    if (body) children.push_back(std::move(*body));
    return interior("for_statement", std::move(children), begin, prev_end());
  }

  std::optional<AstNode> return_statement() {
    const LexToken& kw = peek();
    advance();  // 'return'
    if (at_symbol(";")) {
      advance();
      AstNode node = make_terminal("return_statement", "return");
      node.span = SourceSpan{kw.offset, prev_end()};
      return node;
    }
    std::vector<AstNode> child;
    child.push_back(expression());
    expect_symbol(";");
    return interior("return_statement", std::move(child), kw.offset, prev_end());
  }

  AstNode expression() { return assignment(); }

  AstNode assignment() {
    AstNode lhs = binary(0);
    if (!at_symbol("=")) return lhs;
    if (lhs.kind != "identifier" && lhs.kind != "field_access")
      fail(peek().line, peek().column, "invalid assignment target");
    std::size_t begin = lhs.span->begin;
    AstNode op = terminal("operator", advance());
    AstNode rhs = assignment();
    std::vector<AstNode> children;
    children.push_back(std::move(lhs));
    children.push_back(std::move(op));
    children.push_back(std::move(rhs));
    return interior("assignment_expression", std::move(children), begin, prev_end());
  }

  static int binary_level(const LexToken& tok) {
    if (tok.kind != LexKind::Symbol) return -1;
    const std::string& t = tok.text;
    if (t == "||") return 0;
    if (t == "&&") return 1;
    if (t == "==" || t == "!=") return 2;
    if (t == "<" || t == ">" || t == "<=" || t == ">=") return 3;
    if (t == "+" || t == "-") return 4;
    if (t == "*" || t == "/" || t == "%") return 5;
    return -1;
  }

  AstNode binary(int level) {
    if (level > 5) return unary();
    AstNode lhs = binary(level + 1);
    while (binary_level(peek()) == level) {
      AstNode op = terminal("operator", advance());
      AstNode rhs = binary(level + 1);
      std::size_t begin = lhs.span->begin;
      std::vector<AstNode> children;
      children.push_back(std::move(lhs));
      children.push_back(std::move(op));
      children.push_back(std::move(rhs));
      lhs = interior("binary_expression", std::move(children), begin, prev_end());
    }
    return lhs;
  }

  AstNode unary() {
    if (at_symbol("!") || at_symbol("-")) {
      const LexToken& op_tok = peek();
      AstNode op = terminal("operator", advance());
      AstNode operand = unary();
      std::vector<AstNode> children;
      children.push_back(std::move(op));
      children.push_back(std::move(operand));
      return interior("unary_expression", std::move(children), op_tok.offset, prev_end());
    }
    return postfix();
  }

  AstNode postfix() {
    AstNode node = primary();
    for (;;) {
      if (at_symbol(".")) {
        advance();
        AstNode member = terminal("identifier", expect_identifier("a member name"));
        if (at_symbol("(")) {
          node = invocation(std::move(node), std::move(member));
        } else {
          std::size_t begin = node.span->begin;
          std::vector<AstNode> children;
          children.push_back(std::move(node));
          children.push_back(std::move(member));
          node = interior("field_access", std::move(children), begin, prev_end());
        }
        continue;
      }
      if (at_symbol("(") && node.kind == "identifier") {
        AstNode name = std::move(node);
        node = invocation(std::nullopt, std::move(name));
        continue;
      }
      break;
    }
    return node;
  }

  AstNode invocation(std::optional<AstNode> receiver, AstNode name) {
    std::size_t begin = receiver ? receiver->span->begin : name.span->begin;
    std::vector<AstNode> children;
    if (receiver) children.push_back(std::move(*receiver));
    children.push_back(std::move(name));
    expect_symbol("(");
    std::vector<AstNode> args;
    if (!at_symbol(")")) {
      for (;;) {
        args.push_back(expression());
        if (at_symbol(",")) {
          advance();
          continue;
        }
        break;
      }
    }
    if (!args.empty()) {
      std::size_t ab = args.front().span->begin;
      std::size_t ae = args.back().span->end;
      children.push_back(interior("argument_list", std::move(args), ab, ae));
    }
    expect_symbol(")");
    return interior("method_invocation", std::move(children), begin, prev_end());
  }

  AstNode primary() {
    const LexToken& tok = peek();
    switch (tok.kind) {
      case LexKind::Identifier:
        return terminal("identifier", advance());
      case LexKind::IntegerLiteral:
        return terminal("decimal_integer_literal", advance());
      case LexKind::StringLiteral:
        return terminal("string_literal", advance());
      case LexKind::CharLiteral:
        return terminal("character_literal", advance());
      case LexKind::BooleanLiteral:
        return terminal("boolean_literal", advance());
      case LexKind::NullLiteral:
        return terminal("null_literal", advance());
      case LexKind::Symbol:
        if (tok.text == "(") {
          std::size_t begin = tok.offset;
          advance();
          AstNode inner = expression();
          expect_symbol(")");
          std::vector<AstNode> child;
          child.push_back(std::move(inner));
          return interior("parenthesized_expression", std::move(child), begin, prev_end());
        }
        [[fallthrough]];
      default:
        error("expected an expression");
    }
  }
};

void rebase_spans(AstNode& node, std::size_t offset) {
  if (node.span) node.span = SourceSpan{node.span->begin - offset, node.span->end - offset};
  for (AstNode& child : node.children) rebase_spans(child, offset);
}

int line_of_offset(std::string_view source, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < source.size(); ++i)
    if (source[i] == '\n') ++line;
  return line;
}

}  // namespace

std::vector<LexToken> lex(std::string_view source) { return Lexer(source).run(); }

Ast parse_compilation_unit(std::string_view source) {
  Parser parser(lex(source), source);
  AstNode root = parser.compilation_unit();
  return Ast::from_root(std::move(root), SourceSpan{0, source.size()});
}

std::vector<MethodUnit> extract_methods(const Ast& ast, std::string_view source) {
  const AstNode& cls = ast.root();
  if (cls.kind != "class_declaration")
    throw SchemaError("extract_methods: root must be a class_declaration");

  std::string class_name;
  const AstNode* body = nullptr;
  for (const AstNode& child : cls.children) {
    if (child.kind == "identifier" && child.token) class_name = *child.token;
    if (child.kind == "class_body") body = &child;
  }
  if (class_name.empty())
    throw SchemaError("extract_methods: class_declaration has no name");

  std::vector<MethodUnit> out;
  std::unordered_set<std::string> seen;
  if (!body) return out;
  for (const AstNode& member : body->children) {
    if (member.kind != "method_declaration") continue;
    if (!member.span)
      throw SchemaError("extract_methods: method_declaration is missing its source span");

    std::string method_name;
    std::size_t arity = 0;
    for (const AstNode& child : member.children) {
      if (child.kind == "identifier" && child.token) method_name = *child.token;
      if (child.kind == "formal_parameters") arity = child.children.size();
    }
    std::string qualified =
        class_name + "." + method_name + "(" + std::to_string(arity) + ")";
    if (!seen.insert(qualified).second) {
      int line = line_of_offset(source, member.span->begin);
      fail(line, 1, "duplicate method " + qualified);
    }

    SourceSpan span = *member.span;
    if (span.end > source.size())
      throw SchemaError("extract_methods: span exceeds the provided source");
    AstNode root = member;
    rebase_spans(root, span.begin);
    std::string text(source.substr(span.begin, span.end - span.begin));
    out.push_back(MethodUnit{std::move(qualified),
                             Ast::from_root(std::move(root), SourceSpan{0, text.size()}),
                             std::move(text)});
  }
  return out;
}

}  // namespace cctree
