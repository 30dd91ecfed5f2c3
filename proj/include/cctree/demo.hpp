#pragma once

#include <cstddef>

#include "cctree/change_tree.hpp"

namespace cctree::demo {

// The HelloWorld before/after pair used throughout the docs. The after state
// introduces a local variable and a second print call.
extern const char* kBeforeSource;
extern const char* kAfterSource;

struct DemoResult {
  std::size_t pre_ast_nodes = 0;
  std::size_t post_ast_nodes = 0;
  std::size_t pre_root_paths = 0;
  std::size_t post_root_paths = 0;
  bool pre_change_tree_empty = true;
  bool post_change_tree_empty = true;
  std::size_t pre_change_tree_nodes = 0;
  std::size_t post_change_tree_nodes = 0;
  // Token counts for the flattened "simple" representation (both full ASTs)
  // versus the flattened change trees.
  std::size_t simple_total_tokens = 0;
  std::size_t change_tree_total_tokens = 0;
  double post_reduction_percent = 0.0;
};

DemoResult run(RankMode mode);

}  // namespace cctree::demo
