#include "cctree/demo.hpp"

#include "cctree/ast.hpp"
#include "cctree/java_parser.hpp"

namespace cctree::demo {

const char* kBeforeSource =
    "class HelloWorld {\n"
    "    public static void main(String[] args) {\n"
    "        System.out.println(\"Hello, World!\");\n"
    "    }\n"
    "}\n";

const char* kAfterSource =
    "class HelloWorld {\n"
    "    public static void main(String[] args) {\n"
    "        String msg = \"World!\";\n"
    "        System.out.println(\"Hello, World!\");\n"
    "        System.out.println(\"Hello, \" + msg );\n"
    "    }\n"
    "}\n";

DemoResult run(RankMode mode) {
  Ast pre = parse_compilation_unit(kBeforeSource);
  Ast post = parse_compilation_unit(kAfterSource);

  RootPathSet pre_paths = root_paths(pre, mode);
  RootPathSet post_paths = root_paths(post, mode);
  auto [pre_tree, post_tree] = change_trees(pre, post, mode);

  DemoResult r;
  r.pre_ast_nodes = pre.node_count();
  r.post_ast_nodes = post.node_count();
  r.pre_root_paths = pre_paths.size();
  r.post_root_paths = post_paths.size();
  r.pre_change_tree_empty = pre_tree.empty();
  r.post_change_tree_empty = post_tree.empty();
  r.pre_change_tree_nodes = pre_tree.node_count();
  r.post_change_tree_nodes = post_tree.node_count();
  r.simple_total_tokens = flatten(pre).size() + flatten(post).size();
  r.change_tree_total_tokens =
      flatten_change_tree(pre_tree).size() + flatten_change_tree(post_tree).size();
  if (r.post_ast_nodes > 0) {
    r.post_reduction_percent =
        100.0 * (1.0 - static_cast<double>(r.post_change_tree_nodes) /
                           static_cast<double>(r.post_ast_nodes));
  }
  return r;
}

}  // namespace cctree::demo
