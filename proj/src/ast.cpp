#include "cctree/ast.hpp"

namespace cctree {

namespace {

void validate_node(const AstNode& node, const std::string& path) {
  if (node.kind.empty())
    throw SchemaError(path + ": node kind must be a non-empty string");
  if (node.kind.find('|') != std::string::npos)
    throw SchemaError(path + ": node kind must not contain '|'");
  if (node.children.empty()) {
    if (!node.token.has_value())
      throw SchemaError(path + ": leaf node is missing a token");
  } else {
    if (node.token.has_value())
      throw SchemaError(path + ": token present on a non-leaf node");
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      const AstNode& child = node.children[i];
      std::string child_path = path + "/children/" + std::to_string(i);
      if (child.child_rank != i)
        throw SchemaError(child_path + ": child_rank " +
                          std::to_string(child.child_rank) + " does not match position " +
                          std::to_string(i));
      validate_node(child, child_path);
    }
  }
}

void flatten_node(const AstNode& node, TokenSequence& out) {
  out.push_back(flat_item(node));
  for (const AstNode& child : node.children) flatten_node(child, out);
}

AstNode import_node(const nlohmann::json& doc, const std::string& path, std::size_t rank) {
  if (!doc.is_object())
    throw SchemaError(path + ": node must be a JSON object");
  auto kind_it = doc.find("kind");
  if (kind_it == doc.end())
    throw SchemaError(path + ": missing required \"kind\"");
  if (!kind_it->is_string())
    throw SchemaError(path + ": \"kind\" must be a string");

  AstNode node;
  node.kind = kind_it->get<std::string>();
  node.child_rank = rank;

  auto children_it = doc.find("children");
  bool has_children = children_it != doc.end() && !children_it->is_null();
  if (has_children) {
    if (!children_it->is_array())
      throw SchemaError(path + ": \"children\" must be an array");
    std::size_t i = 0;
    for (const auto& child : *children_it) {
      node.children.push_back(import_node(child, path + "/children/" + std::to_string(i), i));
      ++i;
    }
  }

  auto token_it = doc.find("token");
  if (token_it != doc.end() && !token_it->is_null()) {
    if (!token_it->is_string())
      throw SchemaError(path + ": \"token\" must be a string");
    if (!node.children.empty())
      throw SchemaError(path + ": token present on a non-leaf node");
    node.token = token_it->get<std::string>();
  }
  return node;
}

nlohmann::json export_node(const AstNode& node) {
  nlohmann::json doc;
  doc["kind"] = node.kind;
  if (node.token) doc["token"] = *node.token;
  if (!node.children.empty()) {
    nlohmann::json kids = nlohmann::json::array();
    for (const AstNode& child : node.children) kids.push_back(export_node(child));
    doc["children"] = std::move(kids);
  }
  return doc;
}

}  // namespace

AstNode make_node(std::string kind, std::vector<AstNode> children) {
  AstNode node;
  node.kind = std::move(kind);
  node.children = std::move(children);
  for (std::size_t i = 0; i < node.children.size(); ++i) node.children[i].child_rank = i;
  return node;
}

AstNode make_terminal(std::string kind, std::string token) {
  AstNode node;
  node.kind = std::move(kind);
  node.token = std::move(token);
  return node;
}

bool structurally_equal(const AstNode& a, const AstNode& b) {
  if (a.kind != b.kind || a.token != b.token) return false;
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!structurally_equal(a.children[i], b.children[i])) return false;
  return true;
}

std::size_t count_nodes(const AstNode& node) {
  std::size_t n = 1;
  for (const AstNode& child : node.children) n += count_nodes(child);
  return n;
}

Ast Ast::from_root(AstNode root, std::optional<SourceSpan> span) {
  root.child_rank = 0;
  validate_node(root, "$");
  std::size_t count = count_nodes(root);
  return Ast(std::move(root), count, span);
}

bool structurally_equal(const Ast& a, const Ast& b) {
  return structurally_equal(a.root(), b.root());
}

std::string escape_flat_token(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (c == '\\' || c == '|') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string unescape_flat_token(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    if (escaped[i] == '\\' && i + 1 < escaped.size()) ++i;
    out.push_back(escaped[i]);
  }
  return out;
}

std::string flat_item(const AstNode& node) {
  if (!node.token) return node.kind;
  return node.kind + "|" + escape_flat_token(*node.token);
}

FlatItem split_flat_item(std::string_view item) {
  for (std::size_t i = 0; i < item.size(); ++i) {
    if (item[i] == '\\') {
      ++i;  // escaped character, skip
      continue;
    }
    if (item[i] == '|') {
      return FlatItem{std::string(item.substr(0, i)),
                      std::string(item.substr(i + 1))};
    }
  }
  return FlatItem{std::string(item), std::nullopt};
}

TokenSequence flatten(const Ast& ast) {
  TokenSequence out;
  out.reserve(ast.node_count());
  flatten_node(ast.root(), out);
  return out;
}

Ast import_tree(const nlohmann::json& doc) {
  AstNode root = import_node(doc, "$", 0);
  return Ast::from_root(std::move(root));  // re-validates leaf/token pairing
}

Ast import_tree_text(std::string_view json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw SchemaError("$: document is not valid JSON");
  return import_tree(doc);
}

nlohmann::json export_tree(const Ast& ast) { return export_node(ast.root()); }

}  // namespace cctree
