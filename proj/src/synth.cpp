#include "cctree/synth.hpp"

#include <algorithm>

#include "cctree/hash.hpp"
#include "cctree/rng.hpp"

namespace cctree::synth {

namespace {

AstNode random_tree_node(std::mt19937_64& rng, std::size_t budget) {
  static const char* kInteriorKinds[] = {"n0", "n1", "n2", "n3", "n4"};
  static const char* kLeafKinds[] = {"t0", "t1", "t2"};
  static const char* kLeafTokens[] = {"a", "b", "c", "d"};

  if (budget <= 1)
    return make_terminal(kLeafKinds[rand_below(rng, 3)], kLeafTokens[rand_below(rng, 4)]);

  std::size_t child_count = 1 + rand_below(rng, std::min<std::size_t>(4, budget - 1));
  std::size_t remaining = budget - 1;
  std::vector<AstNode> children;
  children.reserve(child_count);
  for (std::size_t i = 0; i < child_count; ++i) {
    std::size_t slots_left = child_count - i - 1;
    std::size_t max_take = remaining - slots_left;
    std::size_t take = 1 + rand_below(rng, max_take);
    if (i + 1 == child_count) take = remaining;
    children.push_back(random_tree_node(rng, take));
    remaining -= take;
  }
  return make_node(kInteriorKinds[rand_below(rng, 5)], std::move(children));
}

// One generated statement; keeping the parameters rather than the text lets
// edits re-render a statement with a different literal.
struct Stmt {
  enum Kind { decl, assign, call, bare_call, guard_if, count_loop,
              guarded_call, unguarded_call, guarded_assign, unguarded_assign };
  Kind kind = decl;
  int a = 0, b = 0, c = 0, d = 0, lit = 0;

  std::string render() const {
    auto v = [](int i) { return "v" + std::to_string(i); };
    switch (kind) {
      case decl:
        return "int " + v(a) + " = " + std::to_string(lit) + ";";
      case assign:
        return v(a) + " = " + v(b) + " + " + std::to_string(lit) + ";";
      case call:
        return "obj" + std::to_string(a) + ".run" + std::to_string(b) + "(" + v(c) + ");";
      case bare_call:
        return "log" + std::to_string(a) + "(" + v(b) + ");";
      case guard_if:
        return "if (" + v(a) + " < " + std::to_string(lit) + ") { " + v(b) + " = " + v(b) +
               " + 1; }";
      case count_loop:
        return "while (" + v(a) + " > 0) { " + v(a) + " = " + v(a) + " - 1; }";
      case guarded_call:
        return "if (gv" + std::to_string(a) + " != null) { recv" + std::to_string(b) + ".act" +
               std::to_string(c) + "(" + v(d) + "); }";
      case unguarded_call:
        return "recv" + std::to_string(b) + ".act" + std::to_string(c) + "(" + v(d) + ");";
      case guarded_assign:
        return "if (gv" + std::to_string(a) + " != null) { y" + std::to_string(b) + " = " +
               v(c) + "; }";
      case unguarded_assign:
        return "y" + std::to_string(b) + " = " + v(c) + ";";
    }
    return ";";
  }

  // Method-AST nodes the statement contributes; keeps generation free of
  // repeated re-parses and is pinned against the parser by tests.
  std::size_t node_cost() const {
    switch (kind) {
      case decl: return 5;
      case assign: return 8;
      case call: return 6;
      case bare_call: return 5;
      case guard_if: return 14;
      case count_loop: return 14;
      case guarded_call: return 12;
      case unguarded_call: return 6;
      case guarded_assign: return 11;
      case unguarded_assign: return 5;
    }
    return 0;
  }
};

Stmt random_stmt(std::mt19937_64& rng) {
  Stmt s;
  s.kind = static_cast<Stmt::Kind>(rand_below(rng, 6));
  s.a = static_cast<int>(rand_below(rng, 10));
  s.b = static_cast<int>(rand_below(rng, 10));
  s.c = static_cast<int>(rand_below(rng, 10));
  s.lit = static_cast<int>(rand_below(rng, 100));
  return s;
}

// Base method body: a decl first (so literal edits always have a target),
// then random statements until the method AST reaches `target` nodes.
// The signature contributes 11 nodes; every statement adds at most 14, so
// targets drawn from [30, 66] keep methods within [30, 80] nodes.
std::vector<Stmt> random_body(std::mt19937_64& rng) {
  std::size_t target = 30 + rand_below(rng, 37);
  std::vector<Stmt> body;
  Stmt first;
  first.kind = Stmt::decl;
  first.a = static_cast<int>(rand_below(rng, 10));
  first.lit = static_cast<int>(rand_below(rng, 100));
  body.push_back(first);
  std::size_t nodes = 11 + first.node_cost();
  while (nodes < target) {
    body.push_back(random_stmt(rng));
    nodes += body.back().node_cost();
  }
  return body;
}

std::string render_method(const std::vector<Stmt>& body, const std::string& name) {
  std::string out = "int " + name + "(int a0, int a1) {\n";
  for (const Stmt& s : body) out += "  " + s.render() + "\n";
  out += "}";
  return out;
}

ChangeRecord make_record(const std::vector<Stmt>& pre_body, const std::vector<Stmt>& post_body,
                         bool label) {
  ChangeRecord rec;
  rec.pre_source = render_method(pre_body, "m");
  rec.post_source = render_method(post_body, "m");
  rec.label = label;
  return rec;
}

ChangeRecord guard_removal_record(std::mt19937_64& rng, bool around_call) {
  std::vector<Stmt> base = random_body(rng);
  Stmt guarded;
  guarded.kind = around_call ? Stmt::guarded_call : Stmt::guarded_assign;
  guarded.a = static_cast<int>(rand_below(rng, 10));
  guarded.b = static_cast<int>(rand_below(rng, 10));
  guarded.c = static_cast<int>(rand_below(rng, 10));
  guarded.d = static_cast<int>(rand_below(rng, 10));
  Stmt bare = guarded;
  bare.kind = around_call ? Stmt::unguarded_call : Stmt::unguarded_assign;

  std::size_t at = rand_below(rng, base.size() + 1);
  std::vector<Stmt> pre = base, post = base;
  pre.insert(pre.begin() + static_cast<long>(at), guarded);
  post.insert(post.begin() + static_cast<long>(at), bare);
  return make_record(pre, post, around_call);
}

ChangeRecord insertion_record(std::mt19937_64& rng, bool label) {
  std::vector<Stmt> base = random_body(rng);
  std::vector<Stmt> post = base;
  std::size_t at = rand_below(rng, base.size() + 1);
  post.insert(post.begin() + static_cast<long>(at), random_stmt(rng));
  return make_record(base, post, label);
}

ChangeRecord literal_edit_record(std::mt19937_64& rng, bool label) {
  std::vector<Stmt> base = random_body(rng);
  std::vector<std::size_t> decls;
  for (std::size_t i = 0; i < base.size(); ++i)
    if (base[i].kind == Stmt::decl || base[i].kind == Stmt::assign ||
        base[i].kind == Stmt::guard_if)
      decls.push_back(i);
  std::vector<Stmt> post = base;
  Stmt& target = post[pick(decls, rng)];
  target.lit = (target.lit + 1 + static_cast<int>(rand_below(rng, 98))) % 100;
  return make_record(base, post, label);
}

}  // namespace

AstNode random_tree(std::mt19937_64& rng, std::size_t max_nodes) {
  std::size_t budget = 1 + rand_below(rng, max_nodes);
  return random_tree_node(rng, budget);
}

std::vector<std::string> method_corpus(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(derive_seed(seed, "method-corpus"));
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(render_method(random_body(rng), "m" + std::to_string(i)));
  return out;
}

std::vector<ChangeRecord> single_edit_dataset(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(derive_seed(seed, "single-edit"));
  std::vector<ChangeRecord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ChangeRecord rec = rand_below(rng, 2) == 0 ? insertion_record(rng, false)
                                               : literal_edit_record(rng, false);
    rec.id = "e" + std::to_string(i);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<ChangeRecord> planted_dataset(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(derive_seed(seed, "planted"));
  std::size_t positives = count / 5;
  std::size_t negatives = count - positives;
  std::size_t guard_negs = (negatives * 2) / 5;
  std::size_t insert_negs = (negatives - guard_negs) / 2;
  std::size_t literal_negs = negatives - guard_negs - insert_negs;

  std::vector<ChangeRecord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < positives; ++i) out.push_back(guard_removal_record(rng, true));
  for (std::size_t i = 0; i < guard_negs; ++i) out.push_back(guard_removal_record(rng, false));
  for (std::size_t i = 0; i < insert_negs; ++i) out.push_back(insertion_record(rng, false));
  for (std::size_t i = 0; i < literal_negs; ++i) out.push_back(literal_edit_record(rng, false));

  shuffle_vec(out, rng);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = "r" + std::to_string(i);
  return out;
}

std::vector<TokenSequence> two_cluster_corpus(std::uint64_t seed, std::size_t per_cluster,
                                              std::size_t min_len, std::size_t max_len) {
  std::mt19937_64 rng(derive_seed(seed, "two-cluster"));
  auto pool = [](const std::string& prefix) {
    std::vector<std::string> terms;
    for (int i = 0; i < 20; ++i) {
      std::string n = std::to_string(i);
      terms.push_back(prefix + std::string(2 - n.size(), '0') + n);
    }
    return terms;
  };
  std::vector<std::string> alpha = pool("alpha");
  std::vector<std::string> beta = pool("beta");

  std::vector<TokenSequence> docs;
  docs.reserve(2 * per_cluster);
  for (std::size_t c = 0; c < 2; ++c) {
    const std::vector<std::string>& terms = c == 0 ? alpha : beta;
    for (std::size_t i = 0; i < per_cluster; ++i) {
      std::size_t len = min_len + rand_below(rng, max_len - min_len + 1);
      TokenSequence doc;
      doc.reserve(len);
      for (std::size_t t = 0; t < len; ++t) doc.push_back(pick(terms, rng));
      docs.push_back(std::move(doc));
    }
  }
  return docs;
}

}  // namespace cctree::synth
