#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "cctree/ast.hpp"
#include "cctree/change_tree.hpp"
#include "cctree/demo.hpp"
#include "cctree/java_parser.hpp"
#include "cctree/synth.hpp"

using namespace cctree;

namespace {

AstNode t(const char* kind, const char* token) { return make_terminal(kind, token); }

std::vector<std::string> sorted_keys(const RootPathSet& set) {
  std::vector<std::string> keys;
  for (const RootPath& p : set.paths()) keys.push_back(p.key.value);
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace

TEST_CASE("node_id encodes the full ancestor chain") {
  std::vector<PathStep> steps = {{"a", 0, std::nullopt}, {"b", 1, std::nullopt}, {"c", 2, "t=x"}};
  CHECK(node_id(steps, RankMode::none).value == "/a/b/c=t\\=x");
  CHECK(node_id(steps, RankMode::positional).value == "/a@0/b@1/c@2=t\\=x");

  std::vector<PathStep> special = {{"k/e@y", 0, "a\\b"}};
  CHECK(node_id(special, RankMode::none).value == "/k\\/e\\@y=a\\\\b");
}

TEST_CASE("node_id is injective across step boundaries and payloads") {
  auto id = [](std::vector<PathStep> steps, RankMode mode) { return node_id(steps, mode); };

  NodeIdentifier ab_c = id({{"ab", 0, std::nullopt}, {"c", 0, std::nullopt}}, RankMode::none);
  NodeIdentifier a_bc = id({{"a", 0, std::nullopt}, {"bc", 0, std::nullopt}}, RankMode::none);
  CHECK(!(ab_c == a_bc));
  CHECK(ab_c.value != a_bc.value);

  NodeIdentifier with_token = id({{"a", 0, ""}}, RankMode::none);
  NodeIdentifier without_token = id({{"a", 0, std::nullopt}}, RankMode::none);
  CHECK(!(with_token == without_token));

  NodeIdentifier ranked = id({{"a", 0, std::nullopt}}, RankMode::positional);
  CHECK(!(ranked == without_token));
  CHECK(ranked.value == "/a@0");

  NodeIdentifier again = id({{"a", 0, std::nullopt}}, RankMode::none);
  CHECK(again == without_token);
  CHECK(again.hash == without_token.hash);
}

TEST_CASE("root_paths emits one path per terminal, collapsing duplicates without ranks") {
  AstNode root = make_node("s", {make_node("p", {t("a", "x")}), make_node("p", {t("a", "x")})});
  Ast ast = Ast::from_root(std::move(root));

  RootPathSet none = root_paths(ast, RankMode::none);
  REQUIRE(none.size() == 1);
  CHECK(none.mode() == RankMode::none);
  REQUIRE(none.paths()[0].steps.size() == 3);
  CHECK(none.paths()[0].steps[0].kind == "s");
  CHECK(none.paths()[0].steps[1].kind == "p");
  CHECK(none.paths()[0].steps[2].kind == "a");
  CHECK(none.paths()[0].steps[2].token == "x");
  CHECK(none.paths()[0].key.value == "/s/p/a=x");

  RootPathSet positional = root_paths(ast, RankMode::positional);
  CHECK(positional.size() == 2);
  CHECK(positional.paths()[0].key.value == "/s@0/p@0/a@0=x");
  CHECK(positional.paths()[1].key.value == "/s@0/p@1/a@0=x");
}

TEST_CASE("RootPathSet ignores duplicate keys") {
  RootPathSet set(RankMode::none);
  RootPath p;
  p.steps = {{"a", 0, std::nullopt}, {"b", 0, "t"}};
  p.key = node_id(p.steps, RankMode::none);
  CHECK(set.insert(p));
  CHECK(!set.insert(p));
  CHECK(set.size() == 1);
  CHECK(set.contains(p.key));
  CHECK(!set.contains(node_id({{"a", 0, "t"}}, RankMode::none)));
}

TEST_CASE("path_difference subtracts by key and checks modes") {
  AstNode small = make_node("s", {make_node("p", {t("a", "x")})});
  AstNode big = make_node("s", {make_node("p", {t("a", "x")}), t("b", "y")});
  Ast small_ast = Ast::from_root(std::move(small));
  Ast big_ast = Ast::from_root(std::move(big));

  RootPathSet sp = root_paths(small_ast, RankMode::none);
  RootPathSet bp = root_paths(big_ast, RankMode::none);
  CHECK(path_difference(sp, bp).empty());
  RootPathSet extra = path_difference(bp, sp);
  REQUIRE(extra.size() == 1);
  CHECK(extra.paths()[0].key.value == "/s/b=y");

  CHECK(path_difference(sp, sp).empty());
  CHECK_THROWS_AS(path_difference(sp, root_paths(small_ast, RankMode::positional)), ModeMismatch);
}

TEST_CASE("build_change_tree prefix-merges paths and records source ranks") {
  AstNode root = make_node("root", {make_node("x", {t("leaf1", "a"), t("leaf2", "b")}), t("y", "c")});
  RootPathSet set = root_paths(Ast::from_root(std::move(root)), RankMode::none);
  REQUIRE(set.size() == 3);

  ChangeTree tree = build_change_tree(set);
  CHECK(!tree.empty());
  CHECK(tree.node_count() == 5);
  REQUIRE(tree.root.has_value());
  CHECK(tree.root->kind == "root");
  CHECK(tree.root->source_rank == 0);
  REQUIRE(tree.root->children.size() == 2);
  CHECK(tree.root->children[0].kind == "x");
  CHECK(tree.root->children[0].children.size() == 2);
  CHECK(tree.root->children[1].kind == "y");
  CHECK(tree.root->children[1].token == "c");
  CHECK(tree.root->children[1].source_rank == 1);
}

TEST_CASE("build_change_tree rejects paths with different roots") {
  RootPathSet set(RankMode::none);
  RootPath p1;
  p1.steps = {{"a", 0, "x"}};
  p1.key = node_id(p1.steps, RankMode::none);
  RootPath p2;
  p2.steps = {{"b", 0, "y"}};
  p2.key = node_id(p2.steps, RankMode::none);
  set.insert(p1);
  set.insert(p2);
  CHECK_THROWS_AS(build_change_tree(set), InconsistentRoots);
}

TEST_CASE("empty sets give empty trees and empty flattenings") {
  RootPathSet set(RankMode::positional);
  ChangeTree tree = build_change_tree(set);
  CHECK(tree.empty());
  CHECK(tree.node_count() == 0);
  CHECK(flatten_change_tree(tree).empty());
  CHECK(export_change_tree(tree).is_null());
  CHECK(enumerate_paths(tree).empty());
}

TEST_CASE("enumerate_paths inverts build_change_tree on random trees") {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 60; ++iter) {
    Ast ast = Ast::from_root(synth::random_tree(rng, 40));
    for (RankMode mode : {RankMode::none, RankMode::positional}) {
      RootPathSet original = root_paths(ast, mode);
      RootPathSet back = enumerate_paths(build_change_tree(original));
      CHECK(back.mode() == mode);
      CHECK(sorted_keys(back) == sorted_keys(original));
    }
  }
}

TEST_CASE("path_difference agrees with element-wise membership on random pairs") {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 40; ++iter) {
    Ast a = Ast::from_root(synth::random_tree(rng, 30));
    Ast b = Ast::from_root(synth::random_tree(rng, 30));
    for (RankMode mode : {RankMode::none, RankMode::positional}) {
      RootPathSet pa = root_paths(a, mode);
      RootPathSet pb = root_paths(b, mode);
      RootPathSet diff = path_difference(pa, pb);
      for (const RootPath& p : diff.paths()) {
        CHECK(pa.contains(p.key));
        CHECK(!pb.contains(p.key));
      }
      std::size_t survivors = 0;
      for (const RootPath& p : pa.paths())
        if (!pb.contains(p.key)) ++survivors;
      CHECK(diff.size() == survivors);

      RootPathSet rebuilt = enumerate_paths(build_change_tree(diff));
      CHECK(sorted_keys(rebuilt) == sorted_keys(diff));
    }
  }
}

TEST_CASE("worked example: sets, trees, and the flattened change representation") {
  Ast pre = parse_compilation_unit(demo::kBeforeSource);
  Ast post = parse_compilation_unit(demo::kAfterSource);

  RootPathSet pre_paths = root_paths(pre, RankMode::none);
  RootPathSet post_paths = root_paths(post, RankMode::none);
  CHECK(pre_paths.size() == 11);
  CHECK(post_paths.size() == 17);
  CHECK(path_difference(pre_paths, post_paths).empty());
  CHECK(path_difference(post_paths, pre_paths).size() == 6);

  auto [pre_tree, post_tree] = change_trees(pre, post, RankMode::none);
  CHECK(pre_tree.empty());
  CHECK(pre_tree.node_count() == 0);
  CHECK(post_tree.node_count() == 16);

  TokenSequence expected = {
      "class_declaration",
      "class_body",
      "method_declaration",
      "block",
      "local_variable_declaration",
      "type_identifier|String",
      "variable_declarator",
      "identifier|msg",
      "string_literal|World!",
      "expression_statement",
      "method_invocation",
      "argument_list",
      "binary_expression",
      "string_literal|Hello, ",
      "operator|+",
      "identifier|msg",
  };
  CHECK(flatten_change_tree(post_tree) == expected);

  const ChangeTreeNode& cd = *post_tree.root;
  CHECK(cd.source_rank == 0);
  REQUIRE(cd.children.size() == 1);
  CHECK(cd.children[0].kind == "class_body");
  CHECK(cd.children[0].source_rank == 1);
  const ChangeTreeNode& blk = cd.children[0].children[0].children[0];
  CHECK(blk.kind == "block");
  CHECK(blk.source_rank == 5);
  REQUIRE(blk.children.size() == 2);
  CHECK(blk.children[0].kind == "local_variable_declaration");
  CHECK(blk.children[0].source_rank == 0);
  CHECK(blk.children[1].kind == "expression_statement");
  CHECK(blk.children[1].source_rank == 2);

  RootPathSet diff = path_difference(post_paths, pre_paths);
  CHECK(sorted_keys(enumerate_paths(post_tree)) == sorted_keys(diff));

  nlohmann::json doc = export_change_tree(post_tree);
  CHECK(doc["kind"] == "class_declaration");
  CHECK(export_change_tree(pre_tree).is_null());
}

TEST_CASE("positional ranks make insertions disturb later siblings") {
  Ast pre = parse_compilation_unit(demo::kBeforeSource);
  Ast post = parse_compilation_unit(demo::kAfterSource);
  auto [pre_tree, post_tree] = change_trees(pre, post, RankMode::positional);
  CHECK(!pre_tree.empty());  // the old print call moved from slot 0 to slot 1
  CHECK(!post_tree.empty());
  CHECK(pre_tree.mode == RankMode::positional);
}

TEST_CASE("identical inputs always produce two empty trees") {
  Ast pre = parse_compilation_unit(demo::kBeforeSource);
  Ast again = parse_compilation_unit(demo::kBeforeSource);
  for (RankMode mode : {RankMode::none, RankMode::positional}) {
    auto [a, b] = change_trees(pre, again, mode);
    CHECK(a.empty());
    CHECK(b.empty());
  }
}
