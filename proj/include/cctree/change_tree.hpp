#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cctree/ast.hpp"

namespace cctree {

// Whether sibling position participates in node identity. `positional`
// follows the id mapping pseudo-code literally (ancestor chain + child rank);
// `none` drops the ranks so that inserting a statement does not invalidate
// the paths of its unchanged later siblings. `none` is the diffing default.
enum class RankMode { positional, none };

struct PathStep {
  std::string kind;
  std::size_t child_rank = 0;
  std::optional<std::string> token;
};

// Canonical identity of a node given its root path. `value` is an injective
// encoding of (ancestor kinds, ranks when positional, leaf token); `hash` is
// a 64-bit digest of the same data used for set indexing.
struct NodeIdentifier {
  std::string value;
  std::uint64_t hash = 0;

  friend bool operator==(const NodeIdentifier& a, const NodeIdentifier& b) {
    return a.hash == b.hash && a.value == b.value;
  }
};

// One root-to-terminal path, keyed by the terminal's identifier (which
// already encodes every ancestor).
struct RootPath {
  std::vector<PathStep> steps;
  NodeIdentifier key;
};

class ModeMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class InconsistentRoots : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Set of unique root paths in first-insertion (DFS) order. Lookup is by
// identifier hash with a full-value comparison to break collisions.
class RootPathSet {
 public:
  explicit RootPathSet(RankMode mode) : mode_(mode) {}

  RankMode mode() const { return mode_; }
  std::size_t size() const { return paths_.size(); }
  bool empty() const { return paths_.empty(); }
  const std::vector<RootPath>& paths() const { return paths_; }

  bool contains(const NodeIdentifier& key) const;

  // Returns false (and leaves the set unchanged) when the key is already
  // present, collapsing duplicate paths.
  bool insert(RootPath path);

 private:
  RankMode mode_;
  std::vector<RootPath> paths_;
  std::unordered_multimap<std::uint64_t, std::size_t> index_;
};

// Node of a Code Change Tree. Children appear in first-insertion order;
// `source_rank` preserves the child_rank each step had in the AST it came
// from, so enumeration can reconstruct the original path keys.
struct ChangeTreeNode {
  std::string kind;
  std::optional<std::string> token;
  std::size_t source_rank = 0;
  std::vector<ChangeTreeNode> children;

  bool is_terminal() const { return children.empty(); }
};

struct ChangeTree {
  RankMode mode = RankMode::none;
  std::optional<ChangeTreeNode> root;

  bool empty() const { return !root.has_value(); }
  std::size_t node_count() const;
};

// Identifier of the last element of `path_to_node` (root-first, nonempty).
NodeIdentifier node_id(const std::vector<PathStep>& path_to_node, RankMode mode);

// One path per terminal of `ast`; under mode=none duplicate keyed paths
// collapse to a single member.
RootPathSet root_paths(const Ast& ast, RankMode mode);

// reference \ target by key. Throws ModeMismatch when the sets were built
// under different rank modes.
RootPathSet path_difference(const RootPathSet& reference, const RootPathSet& target);

// Prefix-merges the paths into a tree. Throws InconsistentRoots when the
// paths do not share a common first element.
ChangeTree build_change_tree(const RootPathSet& paths);

// Reconstructs the root-path set of a change tree; inverse of
// build_change_tree for any set with consistent roots.
RootPathSet enumerate_paths(const ChangeTree& tree);

// (build(pre \ post), build(post \ pre)).
std::pair<ChangeTree, ChangeTree> change_trees(const Ast& pre, const Ast& post, RankMode mode);

// Pre-order DFS under the same item format as ast-core flatten; empty tree
// yields the empty sequence.
TokenSequence flatten_change_tree(const ChangeTree& tree);

// Same generic tree schema as export_tree; an empty tree serializes as null.
nlohmann::json export_change_tree(const ChangeTree& tree);

}  // namespace cctree
