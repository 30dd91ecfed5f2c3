#include "cctree/change_tree.hpp"

#include "cctree/hash.hpp"

namespace cctree {

namespace {

// Value encoding: "/" kind ["@" rank] ["=" token], with {\, /, @, =} escaped.
// The four markers make the concatenation of steps injective.
void append_escaped(std::string& out, const std::string& raw) {
  for (char c : raw) {
    if (c == '\\' || c == '/' || c == '@' || c == '=') out.push_back('\\');
    out.push_back(c);
  }
}

void append_step_value(std::string& out, const PathStep& step, RankMode mode) {
  out.push_back('/');
  append_escaped(out, step.kind);
  if (mode == RankMode::positional) {
    out.push_back('@');
    out += std::to_string(step.child_rank);
  }
  if (step.token) {
    out.push_back('=');
    append_escaped(out, *step.token);
  }
}

// Hash framing mirrors the value encoding: length-prefixed kind, rank+1 or 0,
// token length+1 or 0 so "no token" differs from an empty token.
void feed_step(Fnv64& fnv, const PathStep& step, RankMode mode) {
  fnv.feed_u64(step.kind.size());
  fnv.feed(step.kind);
  fnv.feed_u64(mode == RankMode::positional ? step.child_rank + 1 : 0);
  if (step.token) {
    fnv.feed_u64(step.token->size() + 1);
    fnv.feed(*step.token);
  } else {
    fnv.feed_u64(0);
  }
}

// Step equality as seen by the id mapping: kind, token, and rank only under
// positional mode.
bool steps_match(const PathStep& a, const PathStep& b, RankMode mode) {
  if (a.kind != b.kind || a.token != b.token) return false;
  if (mode == RankMode::positional && a.child_rank != b.child_rank) return false;
  return true;
}

PathStep step_of(const AstNode& node) {
  return PathStep{node.kind, node.child_rank, node.token};
}

void collect_paths(const AstNode& node, RankMode mode, std::vector<PathStep>& steps,
                   Fnv64 fnv, std::string& value, RootPathSet& out) {
  steps.push_back(step_of(node));
  feed_step(fnv, steps.back(), mode);
  std::size_t value_mark = value.size();
  append_step_value(value, steps.back(), mode);

  if (node.is_terminal()) {
    RootPath path;
    path.steps = steps;
    path.key = NodeIdentifier{value, fnv.value()};
    out.insert(std::move(path));
  } else {
    for (const AstNode& child : node.children)
      collect_paths(child, mode, steps, fnv, value, out);
  }

  value.resize(value_mark);
  steps.pop_back();
}

std::size_t count_change_nodes(const ChangeTreeNode& node) {
  std::size_t n = 1;
  for (const ChangeTreeNode& child : node.children) n += count_change_nodes(child);
  return n;
}

void flatten_change_node(const ChangeTreeNode& node, TokenSequence& out) {
  if (node.token)
    out.push_back(node.kind + "|" + escape_flat_token(*node.token));
  else
    out.push_back(node.kind);
  for (const ChangeTreeNode& child : node.children) flatten_change_node(child, out);
}

void enumerate_node(const ChangeTreeNode& node, RankMode mode,
                    std::vector<PathStep>& steps, RootPathSet& out) {
  steps.push_back(PathStep{node.kind, node.source_rank, node.token});
  if (node.children.empty()) {
    RootPath path;
    path.steps = steps;
    path.key = node_id(steps, mode);
    out.insert(std::move(path));
  } else {
    for (const ChangeTreeNode& child : node.children)
      enumerate_node(child, mode, steps, out);
  }
  steps.pop_back();
}

nlohmann::json export_change_node(const ChangeTreeNode& node) {
  nlohmann::json doc;
  doc["kind"] = node.kind;
  if (node.token) doc["token"] = *node.token;
  if (!node.children.empty()) {
    nlohmann::json kids = nlohmann::json::array();
    for (const ChangeTreeNode& child : node.children)
      kids.push_back(export_change_node(child));
    doc["children"] = std::move(kids);
  }
  return doc;
}

}  // namespace

bool RootPathSet::contains(const NodeIdentifier& key) const {
  auto range = index_.equal_range(key.hash);
  for (auto it = range.first; it != range.second; ++it)
    if (paths_[it->second].key.value == key.value) return true;
  return false;
}

bool RootPathSet::insert(RootPath path) {
  if (contains(path.key)) return false;
  index_.emplace(path.key.hash, paths_.size());
  paths_.push_back(std::move(path));
  return true;
}

std::size_t ChangeTree::node_count() const {
  return root ? count_change_nodes(*root) : 0;
}

NodeIdentifier node_id(const std::vector<PathStep>& path_to_node, RankMode mode) {
  NodeIdentifier id;
  Fnv64 fnv;
  for (const PathStep& step : path_to_node) {
    feed_step(fnv, step, mode);
    append_step_value(id.value, step, mode);
  }
  id.hash = fnv.value();
  return id;
}

RootPathSet root_paths(const Ast& ast, RankMode mode) {
  RootPathSet out(mode);
  std::vector<PathStep> steps;
  std::string value;
  collect_paths(ast.root(), mode, steps, Fnv64{}, value, out);
  return out;
}

RootPathSet path_difference(const RootPathSet& reference, const RootPathSet& target) {
  if (reference.mode() != target.mode())
    throw ModeMismatch("path_difference: rank modes differ");
  RootPathSet out(reference.mode());
  for (const RootPath& path : reference.paths())
    if (!target.contains(path.key)) out.insert(path);
  return out;
}

ChangeTree build_change_tree(const RootPathSet& paths) {
  ChangeTree tree;
  tree.mode = paths.mode();
  if (paths.empty()) return tree;

  const RankMode mode = paths.mode();
  const PathStep& first_root = paths.paths().front().steps.front();
  tree.root = ChangeTreeNode{first_root.kind, first_root.token, first_root.child_rank, {}};

  for (const RootPath& path : paths.paths()) {
    const PathStep& root_step = path.steps.front();
    if (!steps_match(root_step, first_root, mode))
      throw InconsistentRoots("build_change_tree: paths do not share a root id");
    ChangeTreeNode* cursor = &*tree.root;
    for (std::size_t i = 1; i < path.steps.size(); ++i) {
      const PathStep& step = path.steps[i];
      ChangeTreeNode* next = nullptr;
      for (ChangeTreeNode& child : cursor->children) {
        // Ancestors already match, so matching the step projection here is
        // exactly matching the full node id.
        if (steps_match(PathStep{child.kind, child.source_rank, child.token}, step, mode)) {
          next = &child;
          break;
        }
      }
      if (!next) {
        cursor->children.push_back(ChangeTreeNode{step.kind, step.token, step.child_rank, {}});
        next = &cursor->children.back();
      }
      cursor = next;
    }
  }
  return tree;
}

RootPathSet enumerate_paths(const ChangeTree& tree) {
  RootPathSet out(tree.mode);
  if (tree.empty()) return out;
  std::vector<PathStep> steps;
  enumerate_node(*tree.root, tree.mode, steps, out);
  return out;
}

std::pair<ChangeTree, ChangeTree> change_trees(const Ast& pre, const Ast& post, RankMode mode) {
  RootPathSet pre_paths = root_paths(pre, mode);
  RootPathSet post_paths = root_paths(post, mode);
  return {build_change_tree(path_difference(pre_paths, post_paths)),
          build_change_tree(path_difference(post_paths, pre_paths))};
}

TokenSequence flatten_change_tree(const ChangeTree& tree) {
  TokenSequence out;
  if (tree.empty()) return out;
  flatten_change_node(*tree.root, out);
  return out;
}

nlohmann::json export_change_tree(const ChangeTree& tree) {
  if (tree.empty()) return nlohmann::json(nullptr);
  return export_change_node(*tree.root);
}

}  // namespace cctree
