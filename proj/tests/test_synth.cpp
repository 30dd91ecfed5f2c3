#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"

#include "cctree/change_tree.hpp"
#include "cctree/features.hpp"
#include "cctree/java_parser.hpp"
#include "cctree/synth.hpp"

using namespace cctree;

namespace {

bool record_ok(const ChangeRecord& rec) {
  return rec.pre_source.has_value() && rec.post_source.has_value();
}

bool same_sources(const std::vector<ChangeRecord>& a, const std::vector<ChangeRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].id != b[i].id || a[i].label != b[i].label || a[i].pre_source != b[i].pre_source ||
        a[i].post_source != b[i].post_source)
      return false;
  return true;
}

}  // namespace

TEST_CASE("random trees are valid and stay within the node budget") {
  std::mt19937_64 rng(5);
  std::size_t multi = 0;
  for (int i = 0; i < 100; ++i) {
    Ast ast = Ast::from_root(synth::random_tree(rng, 40));
    CHECK(ast.node_count() >= 1);
    CHECK(ast.node_count() <= 40);
    if (ast.node_count() > 1) ++multi;
  }
  CHECK(multi > 50);

  std::mt19937_64 a(9), b(9);
  for (int i = 0; i < 20; ++i)
    CHECK(structurally_equal(synth::random_tree(a, 30), synth::random_tree(b, 30)));
}

TEST_CASE("method corpus parses within the advertised size band") {
  auto corpus = synth::method_corpus(7, 25);
  REQUIRE(corpus.size() == 25);
  for (const std::string& source : corpus) {
    MethodUnit unit = parse_method_source(source);
    CHECK(unit.ast.node_count() >= 30);
    CHECK(unit.ast.node_count() <= 80);
  }
  CHECK(synth::method_corpus(7, 25) == corpus);
  CHECK(synth::method_corpus(8, 25) != corpus);
}

TEST_CASE("generated statement shapes have the node counts generation assumes") {
  // Generation sizes method bodies by per-statement node costs instead of
  // re-parsing; this pins those constants to the real parser. The empty
  // signature contributes 11 nodes.
  auto method_nodes = [](const std::string& stmt) {
    MethodUnit unit = parse_method_source("int m(int a0, int a1) {\n  " + stmt + "\n}");
    return unit.ast.node_count();
  };

  CHECK(method_nodes("int v1 = 42;") == 11 + 5);
  CHECK(method_nodes("v1 = v2 + 7;") == 11 + 8);
  CHECK(method_nodes("obj1.run2(v3);") == 11 + 6);
  CHECK(method_nodes("log1(v2);") == 11 + 5);
  CHECK(method_nodes("if (v1 < 42) { v2 = v2 + 1; }") == 11 + 14);
  CHECK(method_nodes("while (v1 > 0) { v1 = v1 - 1; }") == 11 + 14);
  CHECK(method_nodes("if (gv1 != null) { recv2.act3(v4); }") == 11 + 12);
  CHECK(method_nodes("recv2.act3(v4);") == 11 + 6);
  CHECK(method_nodes("if (gv1 != null) { y2 = v3; }") == 11 + 11);
  CHECK(method_nodes("y2 = v3;") == 11 + 5);
}

TEST_CASE("single edit records change by one small step") {
  auto records = synth::single_edit_dataset(13, 30);
  REQUIRE(records.size() == 30);
  CHECK(same_sources(synth::single_edit_dataset(13, 30), records));

  std::size_t visible = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ChangeRecord& rec = records[i];
    CHECK(rec.id == "e" + std::to_string(i));
    CHECK(!rec.label);
    REQUIRE(record_ok(rec));

    Ast pre = parse_method_source(*rec.pre_source).ast;
    Ast post = parse_method_source(*rec.post_source).ast;
    auto pre_paths = root_paths(pre, RankMode::none);
    auto post_paths = root_paths(post, RankMode::none);
    auto gone = path_difference(pre_paths, post_paths);
    auto added = path_difference(post_paths, pre_paths);
    if (gone.size() + added.size() >= 1) ++visible;
    CHECK(build_change_tree(gone).node_count() <= 20);
    CHECK(build_change_tree(added).node_count() <= 20);
  }
  // Inserting an exact duplicate of an existing statement collapses under
  // rank-mode none, so a few records may legitimately show no path change.
  CHECK(visible >= 25);
}

TEST_CASE("planted dataset composition") {
  auto records = synth::planted_dataset(3, 50);
  REQUIRE(records.size() == 50);
  CHECK(same_sources(synth::planted_dataset(3, 50), records));

  std::size_t positives = 0, guards = 0;
  std::set<std::string> ids;
  for (const ChangeRecord& rec : records) {
    REQUIRE(record_ok(rec));
    ids.insert(rec.id);
    bool guarded_pre = rec.pre_source->find("!= null") != std::string::npos;
    bool guarded_post = rec.post_source->find("!= null") != std::string::npos;
    CHECK(!guarded_post);
    if (guarded_pre) ++guards;
    if (rec.label) {
      ++positives;
      CHECK(guarded_pre);
      CHECK(rec.pre_source->find(".act") != std::string::npos);
    }
    parse_method_source(*rec.pre_source);
    parse_method_source(*rec.post_source);
  }
  CHECK(positives == 10);
  CHECK(guards == 26);  // positives plus the guard-around-assignment negatives
  CHECK(ids.size() == 50);
}

TEST_CASE("positives always lose an if wrapper around a call") {
  for (const ChangeRecord& rec : synth::planted_dataset(11, 40)) {
    if (!rec.label) continue;
    Ast pre = parse_method_source(*rec.pre_source).ast;
    Ast post = parse_method_source(*rec.post_source).ast;
    auto [gone, added] = change_trees(pre, post, RankMode::none);
    REQUIRE(!gone.empty());
    REQUIRE(!added.empty());
    TokenSequence items = flatten_change_tree(gone);
    CHECK(std::find(items.begin(), items.end(), "if_statement") != items.end());
    CHECK(std::find(items.begin(), items.end(), "method_invocation") != items.end());
  }
}

TEST_CASE("two cluster corpus keeps its vocabularies disjoint") {
  auto docs = synth::two_cluster_corpus(17, 8, 10, 20);
  REQUIRE(docs.size() == 16);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    CHECK(docs[i].size() >= 10);
    CHECK(docs[i].size() <= 20);
    const std::string prefix = i < 8 ? "alpha" : "beta";
    for (const std::string& term : docs[i]) CHECK(term.substr(0, prefix.size()) == prefix);
  }
  CHECK(synth::two_cluster_corpus(17, 8, 10, 20) == docs);
  CHECK(synth::two_cluster_corpus(18, 8, 10, 20) != docs);
}
