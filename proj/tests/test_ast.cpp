#include <random>
#include <string>
#include <utility>

#include "doctest.h"

#include "cctree/ast.hpp"
#include "cctree/rng.hpp"

using namespace cctree;

namespace {
AstNode t(const char* kind, const char* token) { return make_terminal(kind, token); }
}  // namespace

TEST_CASE("make_node assigns consecutive child ranks") {
  AstNode n = make_node("a", {t("x", "1"), t("y", "2"), t("z", "3")});
  REQUIRE(n.children.size() == 3);
  CHECK(n.children[0].child_rank == 0);
  CHECK(n.children[1].child_rank == 1);
  CHECK(n.children[2].child_rank == 2);
  CHECK(!n.is_terminal());
  CHECK(n.children[0].is_terminal());
}

TEST_CASE("from_root validates the node invariants") {
  CHECK_NOTHROW(Ast::from_root(make_node("a", {t("b", "tok")})));

  CHECK_THROWS_AS(Ast::from_root(make_terminal("", "tok")), SchemaError);
  CHECK_THROWS_AS(Ast::from_root(make_terminal("has|pipe", "tok")), SchemaError);

  AstNode tokenless_leaf;
  tokenless_leaf.kind = "leaf";
  CHECK_THROWS_AS(Ast::from_root(std::move(tokenless_leaf)), SchemaError);

  AstNode inner_with_token = make_node("a", {t("b", "tok")});
  inner_with_token.token = "oops";
  CHECK_THROWS_AS(Ast::from_root(std::move(inner_with_token)), SchemaError);

  AstNode bad_rank = make_node("a", {t("b", "1"), t("c", "2")});
  bad_rank.children[1].child_rank = 7;
  CHECK_THROWS_AS(Ast::from_root(std::move(bad_rank)), SchemaError);
}

TEST_CASE("from_root normalizes the root rank and caches the count") {
  AstNode root = make_node("a", {t("b", "1"), make_node("c", {t("d", "2")})});
  root.child_rank = 9;
  Ast ast = Ast::from_root(std::move(root));
  CHECK(ast.root().child_rank == 0);
  CHECK(ast.node_count() == 4);
  CHECK(count_nodes(ast.root()) == 4);
}

TEST_CASE("structural equality ignores spans") {
  AstNode a = make_node("s", {t("id", "x")});
  AstNode b = make_node("s", {t("id", "x")});
  b.span = SourceSpan{3, 9};
  b.children[0].span = SourceSpan{3, 4};
  CHECK(structurally_equal(a, b));
  AstNode c = make_node("s", {t("id", "y")});
  CHECK(!structurally_equal(a, c));
  AstNode d = make_node("s2", {t("id", "x")});
  CHECK(!structurally_equal(a, d));
}

TEST_CASE("flatten is pre-order and escapes token separators") {
  AstNode root = make_node(
      "s", {make_node("a", {t("id", "x"), t("lit", "a|b\\c")}), t("id", "y")});
  Ast ast = Ast::from_root(std::move(root));
  TokenSequence seq = flatten(ast);
  REQUIRE(seq.size() == ast.node_count());
  CHECK(seq == TokenSequence{"s", "a", "id|x", "lit|a\\|b\\\\c", "id|y"});
}

TEST_CASE("flat items split back into kind and token") {
  FlatItem inner = split_flat_item("block");
  CHECK(inner.kind == "block");
  CHECK(!inner.token_escaped.has_value());

  FlatItem leaf = split_flat_item("lit|a\\|b\\\\c");
  CHECK(leaf.kind == "lit");
  REQUIRE(leaf.token_escaped.has_value());
  CHECK(unescape_flat_token(*leaf.token_escaped) == "a|b\\c");

  FlatItem empty_token = split_flat_item("lit|");
  REQUIRE(empty_token.token_escaped.has_value());
  CHECK(empty_token.token_escaped->empty());
}

TEST_CASE("token escaping round-trips arbitrary content") {
  std::mt19937_64 rng(7);
  const std::string alphabet = "ab|\\/=@ \t";
  for (int iter = 0; iter < 300; ++iter) {
    std::string raw;
    std::size_t len = rand_below(rng, 12);
    for (std::size_t i = 0; i < len; ++i) raw.push_back(alphabet[rand_below(rng, alphabet.size())]);
    std::string escaped = escape_flat_token(raw);
    CHECK(unescape_flat_token(escaped) == raw);

    FlatItem item = split_flat_item("string_literal|" + escaped);
    CHECK(item.kind == "string_literal");
    REQUIRE(item.token_escaped.has_value());
    CHECK(unescape_flat_token(*item.token_escaped) == raw);
  }
}

TEST_CASE("tree JSON round-trips") {
  Ast ast = Ast::from_root(
      make_node("s", {make_node("a", {t("id", "x")}), t("lit", "1"), t("lit", "with|pipe")}));
  Ast back = import_tree(export_tree(ast));
  CHECK(structurally_equal(ast, back));
  CHECK(back.node_count() == ast.node_count());

  nlohmann::json doc = export_tree(ast);
  CHECK(doc["kind"] == "s");
  CHECK(!doc.contains("token"));
  CHECK(doc["children"].size() == 3);
  CHECK(doc["children"][1]["token"] == "1");
  CHECK(!doc["children"][1].contains("children"));
}

TEST_CASE("import_tree rejects malformed documents") {
  CHECK_THROWS_AS(import_tree_text("not json"), SchemaError);
  CHECK_THROWS_AS(import_tree_text(R"([1,2])"), SchemaError);
  CHECK_THROWS_AS(import_tree_text(R"({"token":"t"})"), SchemaError);
  CHECK_THROWS_AS(import_tree_text(R"({"kind":7})"), SchemaError);
  CHECK_THROWS_AS(import_tree_text(R"({"kind":"a"})"), SchemaError);
  CHECK_THROWS_AS(import_tree_text(R"({"kind":"a","children":[]})"), SchemaError);
  CHECK_THROWS_AS(import_tree_text(R"({"kind":"a","children":7})"), SchemaError);
  CHECK_THROWS_AS(
      import_tree_text(R"({"kind":"a","token":"t","children":[{"kind":"b","token":"u"}]})"),
      SchemaError);
  CHECK_THROWS_AS(import_tree_text(R"({"kind":"a","children":[{"kind":"b"}]})"), SchemaError);
  CHECK_NOTHROW(import_tree_text(R"({"kind":"a","children":[{"kind":"b","token":"u"}]})"));
}
