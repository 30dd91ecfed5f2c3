#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace cctree {

struct SourceSpan {
  std::size_t begin = 0;  // byte offsets into the original text
  std::size_t end = 0;
};

// Raised when a tree document (or an in-memory tree) violates the node
// invariants: leaves carry a token, inner nodes do not, child ranks are
// consecutive from zero.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One parse-tree node. Terminals (leaves) carry the source token text;
// non-terminals only a kind.
struct AstNode {
  std::string kind;
  std::optional<std::string> token;
  std::vector<AstNode> children;
  std::size_t child_rank = 0;
  std::optional<SourceSpan> span;  // parser bookkeeping, not part of identity

  bool is_terminal() const { return children.empty(); }
};

AstNode make_node(std::string kind, std::vector<AstNode> children);
AstNode make_terminal(std::string kind, std::string token);

// Equality on (kind, token, children) only; spans and cached data ignored.
bool structurally_equal(const AstNode& a, const AstNode& b);

std::size_t count_nodes(const AstNode& node);

// Whole tree with a cached node count. Immutable after construction.
class Ast {
 public:
  // Validates the node invariants and caches the node count.
  static Ast from_root(AstNode root, std::optional<SourceSpan> span = std::nullopt);

  const AstNode& root() const { return root_; }
  std::size_t node_count() const { return node_count_; }
  const std::optional<SourceSpan>& source_span() const { return span_; }

 private:
  Ast(AstNode root, std::size_t count, std::optional<SourceSpan> span)
      : root_(std::move(root)), node_count_(count), span_(span) {}

  AstNode root_;
  std::size_t node_count_;
  std::optional<SourceSpan> span_;
};

bool structurally_equal(const Ast& a, const Ast& b);

using TokenSequence = std::vector<std::string>;

// Flattened item format: "<kind>" for inner nodes, "<kind>|<token>" for
// leaves. Inside the token part, '|' becomes "\|" and '\' becomes "\\" so
// items stay unambiguous.
std::string escape_flat_token(std::string_view raw);
std::string unescape_flat_token(std::string_view escaped);
std::string flat_item(const AstNode& node);

struct FlatItem {
  std::string kind;
  std::optional<std::string> token_escaped;  // still escaped; see unescape_flat_token
};
FlatItem split_flat_item(std::string_view item);

// Pre-order DFS serialization; output length equals the node count.
TokenSequence flatten(const Ast& ast);

// Generic tree JSON schema: {"kind": str, "token": str (leaves only),
// "children": [node...] (inner nodes only, never empty)}.
Ast import_tree(const nlohmann::json& doc);
Ast import_tree_text(std::string_view json_text);
nlohmann::json export_tree(const Ast& ast);

}  // namespace cctree
