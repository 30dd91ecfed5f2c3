#include <atomic>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cctree/ast.hpp"
#include "cctree/change_tree.hpp"
#include "cctree/demo.hpp"
#include "cctree/embed.hpp"
#include "cctree/eval.hpp"
#include "cctree/features.hpp"
#include "cctree/hash.hpp"
#include "cctree/java_parser.hpp"
#include "cctree/synth.hpp"
#include "cctree/tokens.hpp"
#include "cctree/version.hpp"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << data;
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::string iso_utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Everything needed to reproduce one invocation; serialized next to each
// file output as <output>.manifest.json.
struct RunContext {
  std::string subcommand;
  std::vector<std::string> inputs;
  json config = json::object();
  std::optional<std::uint64_t> seed;
  std::string started_at = iso_utc_now();
};

void write_manifest(const RunContext& ctx, const std::string& primary,
                    const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = "cctree";
  m["tool_version"] = cctree::kToolVersion;
  m["subcommand"] = ctx.subcommand;
  m["inputs"] = ctx.inputs;
  m["output"] = primary;
  m["outputs"] = outputs;
  m["config"] = ctx.config;
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(cctree::fnv1a64(ctx.config.dump())));
  m["config_hash"] = std::string("fnv1a64:") + hex;
  if (ctx.seed) {
    m["seed"] = *ctx.seed;
  } else {
    m["seed"] = nullptr;
  }
  m["started_at"] = ctx.started_at;
  m["finished_at"] = iso_utc_now();
  write_file(primary + ".manifest.json", m.dump(2) + "\n");
}

// Writes `payload` to `path` (plus manifest) or to stdout when no -o was
// given. `extra` lists sibling files already written by the caller.
void emit_output(const RunContext& ctx, const std::string& path, const std::string& payload,
                 std::vector<std::string> extra = {}) {
  if (path.empty()) {
    std::cout << payload;
    if (payload.empty() || payload.back() != '\n') std::cout << '\n';
    return;
  }
  write_file(path, payload);
  std::vector<std::string> outputs{path};
  outputs.insert(outputs.end(), extra.begin(), extra.end());
  write_manifest(ctx, path, outputs);
}

cctree::RankMode rank_mode_from_name(const std::string& name) {
  return name == "positional" ? cctree::RankMode::positional : cctree::RankMode::none;
}

cctree::TokenSequence sequence_of_source(const std::string& record_id, const std::string& source) {
  try {
    cctree::MethodUnit method = cctree::parse_method_source(source);
    return cctree::normalize_sequence(cctree::flatten(method.ast));
  } catch (const cctree::ParseError& e) {
    throw cctree::RecordError(record_id, e.what());
  }
}

// A corpus file is JSONL where each line is either {"tokens": [...]} or a
// change record; records contribute one sequence per present side. All
// sequences come back whitespace-normalized.
std::vector<cctree::TokenSequence> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<cctree::TokenSequence> corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (doc.is_object() && doc.contains("tokens")) {
      const json& toks = doc["tokens"];
      if (!toks.is_array()) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": tokens must be an array");
      }
      cctree::TokenSequence seq;
      for (const json& t : toks) {
        if (!t.is_string()) {
          throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                   ": tokens must be strings");
        }
        seq.push_back(t.get<std::string>());
      }
      corpus.push_back(cctree::normalize_sequence(seq));
    } else {
      cctree::ChangeRecord rec = cctree::record_from_json(doc);
      if (rec.pre_source) corpus.push_back(sequence_of_source(rec.id, *rec.pre_source));
      if (rec.post_source) corpus.push_back(sequence_of_source(rec.id, *rec.post_source));
    }
  }
  return corpus;
}

std::vector<cctree::TokenSequence> corpus_of_records(const std::vector<cctree::ChangeRecord>& records) {
  std::vector<cctree::TokenSequence> corpus;
  for (const cctree::ChangeRecord& rec : records) {
    if (rec.pre_source) corpus.push_back(sequence_of_source(rec.id, *rec.pre_source));
    if (rec.post_source) corpus.push_back(sequence_of_source(rec.id, *rec.post_source));
  }
  return corpus;
}

cctree::EmbeddingModel train_model(std::vector<cctree::TokenSequence> corpus, double min_df,
                                   const cctree::EmbedConfig& config) {
  cctree::Vocabulary vocab = cctree::build_vocabulary(corpus, min_df);
  for (cctree::TokenSequence& seq : corpus) seq = cctree::apply_oov(seq, vocab);
  return cctree::EmbeddingModel::train(corpus, config);
}

// Accepts what record files hold: either a bare method declaration or a full
// compilation unit.
std::vector<cctree::MethodUnit> load_methods(const std::string& text) {
  try {
    cctree::Ast unit = cctree::parse_compilation_unit(text);
    return cctree::extract_methods(unit, text);
  } catch (const cctree::ParseError&) {
    std::vector<cctree::MethodUnit> single;
    single.push_back(cctree::parse_method_source(text));
    return single;
  }
}

// Picks the method to diff: by qualified or simple name when --method was
// given, otherwise the file must contain exactly one method.
const cctree::MethodUnit& pick_method(const std::vector<cctree::MethodUnit>& units,
                                      const std::string& wanted, const std::string& label) {
  if (units.empty()) throw std::runtime_error(label + ": no methods found");
  if (wanted.empty()) {
    if (units.size() == 1) return units.front();
    std::string msg = label + ": multiple methods, pass --method; candidates:";
    for (const auto& u : units) msg += " " + u.qualified_name;
    throw std::runtime_error(msg);
  }
  const cctree::MethodUnit* found = nullptr;
  for (const auto& u : units) {
    std::string simple = u.qualified_name;
    if (std::size_t dot = simple.find('.'); dot != std::string::npos) simple = simple.substr(dot + 1);
    if (std::size_t paren = simple.find('('); paren != std::string::npos)
      simple = simple.substr(0, paren);
    if (u.qualified_name == wanted || simple == wanted) {
      if (found) throw std::runtime_error(label + ": method name is ambiguous: " + wanted);
      found = &u;
    }
  }
  if (!found) throw std::runtime_error(label + ": method not found: " + wanted);
  return *found;
}

double reduction_percent(std::size_t full_nodes, std::size_t tree_nodes) {
  if (full_nodes == 0) return 0.0;
  return 100.0 * (1.0 - static_cast<double>(tree_nodes) / static_cast<double>(full_nodes));
}

std::vector<cctree::ReprMode> parse_modes(const std::string& names) {
  if (names == "all") {
    return {cctree::ReprMode::metrics, cctree::ReprMode::simple, cctree::ReprMode::change_tree};
  }
  std::vector<cctree::ReprMode> modes;
  std::stringstream ss(names);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    try {
      modes.push_back(cctree::repr_mode_from_name(part));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--modes", "unknown mode: " + part);
    }
  }
  if (modes.empty()) throw CLI::ValidationError("--modes", "no modes selected");
  return modes;
}

std::string markdown_sibling(const std::string& json_path) {
  const std::string suffix = ".json";
  if (json_path.size() > suffix.size() &&
      json_path.compare(json_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return json_path.substr(0, json_path.size() - suffix.size()) + ".md";
  }
  return json_path + ".md";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cctree: tree-structured diffs of Java method ASTs for change representation"};
  app.set_version_flag("-V,--version", std::string("cctree ") + cctree::kToolVersion);
  app.require_subcommand(1);

  // parse ----------------------------------------------------------------
  struct {
    std::string input;
    bool compact = false;
    std::string output;
  } parse_opt;
  {
    auto* sc = app.add_subcommand("parse", "Parse a Java source file and print its AST as JSON");
    sc->add_option("file", parse_opt.input, "Java source file")->required();
    sc->add_flag("--json", parse_opt.compact, "Compact single-line JSON")->envname("CCTREE_JSON");
    sc->add_option("-o,--output", parse_opt.output, "Write to a file instead of stdout")
        ->envname("CCTREE_OUTPUT");
    sc->callback([&] {
      RunContext ctx;
      ctx.subcommand = "parse";
      ctx.inputs = {parse_opt.input};
      ctx.config = {{"json", parse_opt.compact}};
      cctree::Ast ast = cctree::parse_compilation_unit(read_file(parse_opt.input));
      json doc = cctree::export_tree(ast);
      emit_output(ctx, parse_opt.output, parse_opt.compact ? doc.dump() : doc.dump(2));
    });
  }

  // diff -----------------------------------------------------------------
  struct {
    std::string pre_file;
    std::string post_file;
    std::string method;
    std::string rank = "none";
    std::string emit = "tree";
    std::string output;
  } diff_opt;
  {
    auto* sc = app.add_subcommand("diff", "Compute the code change trees between two method states");
    sc->add_option("pre", diff_opt.pre_file, "Before-state Java file")->required();
    sc->add_option("post", diff_opt.post_file, "After-state Java file")->required();
    sc->add_option("--method", diff_opt.method, "Method to diff (simple or qualified name)")
        ->envname("CCTREE_METHOD");
    sc->add_option("--rank-mode", diff_opt.rank, "Sibling-rank handling in node identity")
        ->check(CLI::IsMember({"none", "positional"}))
        ->envname("CCTREE_RANK_MODE");
    sc->add_option("--emit", diff_opt.emit, "What to print")
        ->check(CLI::IsMember({"tree", "tokens", "stats"}))
        ->envname("CCTREE_EMIT");
    sc->add_option("-o,--output", diff_opt.output, "Write to a file instead of stdout")
        ->envname("CCTREE_OUTPUT");
    sc->callback([&] {
      RunContext ctx;
      ctx.subcommand = "diff";
      ctx.inputs = {diff_opt.pre_file, diff_opt.post_file};
      ctx.config = {{"method", diff_opt.method},
                    {"rank_mode", diff_opt.rank},
                    {"emit", diff_opt.emit}};
      std::string pre_text = read_file(diff_opt.pre_file);
      std::string post_text = read_file(diff_opt.post_file);
      auto pre_methods = load_methods(pre_text);
      auto post_methods = load_methods(post_text);
      const auto& pre_m = pick_method(pre_methods, diff_opt.method, diff_opt.pre_file);
      const auto& post_m = pick_method(post_methods, diff_opt.method, diff_opt.post_file);
      cctree::RankMode rm = rank_mode_from_name(diff_opt.rank);
      auto [pre_tree, post_tree] = cctree::change_trees(pre_m.ast, post_m.ast, rm);

      json out;
      if (diff_opt.emit == "tree") {
        out = {{"rank_mode", diff_opt.rank},
               {"pre", cctree::export_change_tree(pre_tree)},
               {"post", cctree::export_change_tree(post_tree)}};
      } else if (diff_opt.emit == "tokens") {
        out = {{"pre", cctree::flatten_change_tree(pre_tree)},
               {"post", cctree::flatten_change_tree(post_tree)}};
      } else {
        std::size_t pre_full = pre_m.ast.node_count();
        std::size_t post_full = post_m.ast.node_count();
        out = {{"pre_ast_nodes", pre_full},
               {"post_ast_nodes", post_full},
               {"pre_change_tree_nodes", pre_tree.node_count()},
               {"post_change_tree_nodes", post_tree.node_count()},
               {"pre_reduction_percent", reduction_percent(pre_full, pre_tree.node_count())},
               {"post_reduction_percent", reduction_percent(post_full, post_tree.node_count())}};
      }
      emit_output(ctx, diff_opt.output, out.dump(2));
    });
  }

  // stats ----------------------------------------------------------------
  struct {
    std::string input;
    std::string rank = "none";
    std::string output;
  } stats_opt;
  {
    auto* sc = app.add_subcommand("stats", "Size statistics of change trees over a record file");
    sc->add_option("records", stats_opt.input, "Change records (JSONL)")->required();
    sc->add_option("--rank-mode", stats_opt.rank, "Sibling-rank handling in node identity")
        ->check(CLI::IsMember({"none", "positional"}))
        ->envname("CCTREE_RANK_MODE");
    sc->add_option("-o,--output", stats_opt.output, "Write to a file instead of stdout")
        ->envname("CCTREE_OUTPUT");
    sc->callback([&] {
      RunContext ctx;
      ctx.subcommand = "stats";
      ctx.inputs = {stats_opt.input};
      ctx.config = {{"rank_mode", stats_opt.rank}};
      cctree::RankMode rm = rank_mode_from_name(stats_opt.rank);
      auto records = cctree::load_records_jsonl(stats_opt.input);

      std::size_t sides = 0, full_nodes = 0, tree_nodes = 0, empty_trees = 0;
      for (const cctree::ChangeRecord& rec : records) {
        std::optional<cctree::Ast> pre_ast, post_ast;
        try {
          if (rec.pre_source) pre_ast = cctree::parse_method_source(*rec.pre_source).ast;
          if (rec.post_source) post_ast = cctree::parse_method_source(*rec.post_source).ast;
        } catch (const cctree::ParseError& e) {
          throw cctree::RecordError(rec.id, e.what());
        }
        cctree::RootPathSet pre_paths =
            pre_ast ? cctree::root_paths(*pre_ast, rm) : cctree::RootPathSet(rm);
        cctree::RootPathSet post_paths =
            post_ast ? cctree::root_paths(*post_ast, rm) : cctree::RootPathSet(rm);
        cctree::ChangeTree pre_tree =
            cctree::build_change_tree(cctree::path_difference(pre_paths, post_paths));
        cctree::ChangeTree post_tree =
            cctree::build_change_tree(cctree::path_difference(post_paths, pre_paths));
        if (pre_ast) {
          ++sides;
          full_nodes += pre_ast->node_count();
          tree_nodes += pre_tree.node_count();
          if (pre_tree.empty()) ++empty_trees;
        }
        if (post_ast) {
          ++sides;
          full_nodes += post_ast->node_count();
          tree_nodes += post_tree.node_count();
          if (post_tree.empty()) ++empty_trees;
        }
      }
      json out = {{"records", records.size()},
                  {"sides", sides},
                  {"total_full_ast_nodes", full_nodes},
                  {"total_change_tree_nodes", tree_nodes},
                  {"empty_change_trees", empty_trees},
                  {"reduction_percent", reduction_percent(full_nodes, tree_nodes)}};
      emit_output(ctx, stats_opt.output, out.dump(2));
    });
  }

  // vocab build ----------------------------------------------------------
  struct {
    std::string input;
    double min_df = 0.01;
    std::string output;
  } vocab_opt;
  {
    auto* vc = app.add_subcommand("vocab", "Vocabulary operations");
    vc->require_subcommand(1);
    auto* sc = vc->add_subcommand("build", "Build a document-frequency vocabulary from a corpus");
    sc->add_option("corpus", vocab_opt.input, "Corpus (JSONL of token arrays or change records)")
        ->required();
    sc->add_option("--min-df", vocab_opt.min_df, "Minimum document-frequency fraction")
        ->envname("CCTREE_MIN_DF");
    sc->add_option("-o,--output", vocab_opt.output, "Vocabulary TSV path")
        ->required()
        ->envname("CCTREE_OUTPUT");
    sc->callback([&] {
      RunContext ctx;
      ctx.subcommand = "vocab build";
      ctx.inputs = {vocab_opt.input};
      ctx.config = {{"min_df", vocab_opt.min_df}};
      auto corpus = load_corpus(vocab_opt.input);
      cctree::Vocabulary vocab = cctree::build_vocabulary(corpus, vocab_opt.min_df);
      cctree::save_vocabulary(vocab, vocab_opt.output);
      write_manifest(ctx, vocab_opt.output, {vocab_opt.output});
    });
  }

  // embed train ----------------------------------------------------------
  struct {
    std::string input;
    std::uint32_t dim = 100;
    std::uint32_t epochs = 20;
    std::uint32_t negative = 5;
    double lr = 0.025;
    std::uint32_t infer_epochs = 50;
    double min_df = 0.01;
    std::uint64_t seed = 1;
    std::string output;
  } embed_opt;
  {
    auto* ec = app.add_subcommand("embed", "Embedding operations");
    ec->require_subcommand(1);
    auto* sc = ec->add_subcommand("train", "Train a document-embedding model on a corpus");
    sc->add_option("corpus", embed_opt.input, "Corpus (JSONL of token arrays or change records)")
        ->required();
    sc->add_option("--dim", embed_opt.dim, "Vector dimensionality")->envname("CCTREE_DIM");
    sc->add_option("--epochs", embed_opt.epochs, "Training epochs")->envname("CCTREE_EPOCHS");
    sc->add_option("--negative", embed_opt.negative, "Negative samples per token")
        ->envname("CCTREE_NEGATIVE");
    sc->add_option("--lr", embed_opt.lr, "Initial learning rate")->envname("CCTREE_LR");
    sc->add_option("--infer-epochs", embed_opt.infer_epochs, "Inference gradient passes")
        ->envname("CCTREE_INFER_EPOCHS");
    sc->add_option("--min-df", embed_opt.min_df, "Minimum document-frequency fraction")
        ->envname("CCTREE_MIN_DF");
    sc->add_option("--seed", embed_opt.seed, "Random seed")->envname("CCTREE_SEED");
    sc->add_option("-o,--output", embed_opt.output, "Model file path")
        ->required()
        ->envname("CCTREE_OUTPUT");
    sc->callback([&] {
      RunContext ctx;
      ctx.subcommand = "embed train";
      ctx.inputs = {embed_opt.input};
      ctx.seed = embed_opt.seed;
      ctx.config = {{"dim", embed_opt.dim},
                    {"epochs", embed_opt.epochs},
                    {"negative", embed_opt.negative},
                    {"lr", embed_opt.lr},
                    {"infer_epochs", embed_opt.infer_epochs},
                    {"min_df", embed_opt.min_df},
                    {"seed", embed_opt.seed}};
      cctree::EmbedConfig config;
      config.dim = embed_opt.dim;
      config.epochs = embed_opt.epochs;
      config.negative_samples = embed_opt.negative;
      config.learning_rate = static_cast<float>(embed_opt.lr);
      config.infer_epochs = embed_opt.infer_epochs;
      config.seed = embed_opt.seed;
      cctree::EmbeddingModel model =
          train_model(load_corpus(embed_opt.input), embed_opt.min_df, config);
      model.save(embed_opt.output);
      write_manifest(ctx, embed_opt.output, {embed_opt.output});
    });
  }

  // featurize ------------------------------------------------------------
  struct {
    std::string input;
    std::string mode = "metrics";
    std::string model_path;
    std::string rank = "none";
    unsigned threads = 1;
    std::string output;
  } feat_opt;
  {
    auto* sc = app.add_subcommand("featurize", "Turn change records into feature vectors (CSV)");
    sc->add_option("records", feat_opt.input, "Change records (JSONL)")->required();
    sc->add_option("--mode", feat_opt.mode, "Representation mode")
        ->required()
        ->check(CLI::IsMember({"metrics", "simple", "change_tree"}))
        ->envname("CCTREE_MODE");
    sc->add_option("--model", feat_opt.model_path, "Embedding model (required unless metrics)")
        ->envname("CCTREE_MODEL");
    sc->add_option("--rank-mode", feat_opt.rank, "Sibling-rank handling in node identity")
        ->check(CLI::IsMember({"none", "positional"}))
        ->envname("CCTREE_RANK_MODE");
    sc->add_option("--threads", feat_opt.threads, "Worker threads (records are independent)")
        ->envname("CCTREE_THREADS");
    sc->add_option("-o,--output", feat_opt.output, "CSV path instead of stdout")
        ->envname("CCTREE_OUTPUT");
    sc->callback([&] {
      RunContext ctx;
      ctx.subcommand = "featurize";
      ctx.inputs = {feat_opt.input};
      ctx.config = {{"mode", feat_opt.mode},
                    {"model", feat_opt.model_path},
                    {"rank_mode", feat_opt.rank},
                    {"threads", feat_opt.threads}};
      cctree::ReprMode mode = cctree::repr_mode_from_name(feat_opt.mode);
      if (mode != cctree::ReprMode::metrics && feat_opt.model_path.empty()) {
        throw CLI::ValidationError("--model", "required for mode " + feat_opt.mode);
      }
      std::optional<cctree::EmbeddingModel> model;
      if (mode != cctree::ReprMode::metrics) {
        model = cctree::EmbeddingModel::load(feat_opt.model_path);
        ctx.inputs.push_back(feat_opt.model_path);
      }
      const cctree::EmbeddingModel* model_ptr = model ? &*model : nullptr;
      cctree::RankMode rm = rank_mode_from_name(feat_opt.rank);

      auto records = cctree::load_records_jsonl(feat_opt.input);
      std::vector<cctree::FeatureVector> vectors(records.size());
      unsigned workers = feat_opt.threads == 0 ? 1 : feat_opt.threads;
      if (workers <= 1 || records.size() <= 1) {
        for (std::size_t i = 0; i < records.size(); ++i) {
          vectors[i] = cctree::represent(records[i], mode, model_ptr, rm);
        }
      } else {
        std::atomic<std::size_t> next{0};
        std::mutex err_mutex;
        std::exception_ptr first_error;
        auto work = [&] {
          for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= records.size()) return;
            try {
              vectors[i] = cctree::represent(records[i], mode, model_ptr, rm);
            } catch (...) {
              std::lock_guard<std::mutex> lock(err_mutex);
              if (!first_error) first_error = std::current_exception();
              next.store(records.size());
              return;
            }
          }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
      }
      emit_output(ctx, feat_opt.output, cctree::features_csv(records, vectors));
    });
  }

  // evaluate ---------------------------------------------------------------
  struct {
    std::string input;
    std::string modes = "all";
    std::size_t folds = 10;
    std::uint64_t seed = 1;
    std::string model_path;
    std::string rank = "none";
    double baseline_rate = 0.2;
    bool no_upsample = false;
    double min_df = 0.01;
    std::string output;
  } eval_opt;
  {
    auto* sc = app.add_subcommand(
        "evaluate", "Cross-validated comparison of change representations and classifiers");
    sc->add_option("records", eval_opt.input, "Labeled change records (JSONL)")->required();
    sc->add_option("--modes", eval_opt.modes, "all or comma list of metrics,simple,change_tree")
        ->envname("CCTREE_MODES");
    sc->add_option("--folds", eval_opt.folds, "Cross-validation folds")->envname("CCTREE_FOLDS");
    sc->add_option("--seed", eval_opt.seed, "Random seed")->envname("CCTREE_SEED");
    sc->add_option("--model", eval_opt.model_path,
                   "Embedding model; omitted, one is trained on the records")
        ->envname("CCTREE_MODEL");
    sc->add_option("--rank-mode", eval_opt.rank, "Sibling-rank handling in node identity")
        ->check(CLI::IsMember({"none", "positional"}))
        ->envname("CCTREE_RANK_MODE");
    sc->add_option("--baseline-rate", eval_opt.baseline_rate,
                   "Positive rate assumed for the random-guess baseline")
        ->envname("CCTREE_BASELINE_RATE");
    sc->add_flag("--no-upsample", eval_opt.no_upsample, "Skip train-fold class balancing")
        ->envname("CCTREE_NO_UPSAMPLE");
    sc->add_option("--min-df", eval_opt.min_df,
                   "Minimum document-frequency fraction for the internally trained model")
        ->envname("CCTREE_MIN_DF");
    sc->add_option("-o,--output", eval_opt.output, "Report JSON path (a .md sibling is written too)")
        ->envname("CCTREE_OUTPUT");
    sc->callback([&] {
      RunContext ctx;
      ctx.subcommand = "evaluate";
      ctx.inputs = {eval_opt.input};
      ctx.seed = eval_opt.seed;
      ctx.config = {{"modes", eval_opt.modes},         {"folds", eval_opt.folds},
                    {"seed", eval_opt.seed},           {"model", eval_opt.model_path},
                    {"rank_mode", eval_opt.rank},      {"baseline_rate", eval_opt.baseline_rate},
                    {"upsample", !eval_opt.no_upsample}, {"min_df", eval_opt.min_df}};
      std::vector<cctree::ReprMode> modes = parse_modes(eval_opt.modes);
      auto records = cctree::load_records_jsonl(eval_opt.input);

      bool needs_model = false;
      for (cctree::ReprMode m : modes) {
        if (m != cctree::ReprMode::metrics) needs_model = true;
      }
      std::optional<cctree::EmbeddingModel> model;
      if (needs_model) {
        if (!eval_opt.model_path.empty()) {
          model = cctree::EmbeddingModel::load(eval_opt.model_path);
          ctx.inputs.push_back(eval_opt.model_path);
        } else {
          cctree::EmbedConfig config;
          config.seed = eval_opt.seed;
          model = train_model(corpus_of_records(records), eval_opt.min_df, config);
        }
      }

      cctree::EvalConfig config;
      config.folds = eval_opt.folds;
      config.upsample_to_balance = !eval_opt.no_upsample;
      config.seed = eval_opt.seed;
      config.positive_rate_for_baseline = eval_opt.baseline_rate;
      cctree::RankMode rm = rank_mode_from_name(eval_opt.rank);
      cctree::EvalReport report =
          cctree::run_experiment(records, modes, config, model ? &*model : nullptr, rm);

      if (eval_opt.output.empty()) {
        std::cout << cctree::report_to_markdown(report);
        return;
      }
      std::string md_path = markdown_sibling(eval_opt.output);
      write_file(md_path, cctree::report_to_markdown(report));
      emit_output(ctx, eval_opt.output, cctree::report_to_json(report).dump(2), {md_path});
    });
  }

  // demo-example -----------------------------------------------------------
  struct {
    std::string rank = "none";
  } demo_opt;
  {
    auto* sc = app.add_subcommand("demo-example",
                                  "Run the bundled HelloWorld worked example end to end");
    sc->add_option("--rank-mode", demo_opt.rank, "Sibling-rank handling in node identity")
        ->check(CLI::IsMember({"none", "positional"}))
        ->envname("CCTREE_RANK_MODE");
    sc->callback([&] {
      cctree::demo::DemoResult r = cctree::demo::run(rank_mode_from_name(demo_opt.rank));
      std::ostringstream out;
      out << "pre_ast_nodes=" << r.pre_ast_nodes << '\n'
          << "post_ast_nodes=" << r.post_ast_nodes << '\n'
          << "pre_root_paths=" << r.pre_root_paths << '\n'
          << "post_root_paths=" << r.post_root_paths << '\n'
          << "pre_change_tree_empty=" << (r.pre_change_tree_empty ? "true" : "false") << '\n'
          << "post_change_tree_empty=" << (r.post_change_tree_empty ? "true" : "false") << '\n'
          << "pre_change_tree_nodes=" << r.pre_change_tree_nodes << '\n'
          << "post_change_tree_nodes=" << r.post_change_tree_nodes << '\n'
          << "simple_total_tokens=" << r.simple_total_tokens << '\n'
          << "change_tree_total_tokens=" << r.change_tree_total_tokens << '\n';
      char pct[32];
      std::snprintf(pct, sizeof pct, "%.2f", r.post_reduction_percent);
      out << "post_reduction_percent=" << pct << '\n';
      std::cout << out.str();
    });
  }

  // synth ------------------------------------------------------------------
  struct {
    std::string kind = "planted";
    std::size_t count = 500;
    std::uint64_t seed = 1;
    std::string output;
  } synth_opt;
  {
    auto* sc = app.add_subcommand("synth", "Generate deterministic synthetic corpora");
    sc->add_option("--kind", synth_opt.kind, "Corpus family")
        ->check(CLI::IsMember({"methods", "single-edit", "planted", "two-cluster"}))
        ->envname("CCTREE_KIND");
    sc->add_option("--count", synth_opt.count, "Records (or sequences per cluster)")
        ->envname("CCTREE_COUNT");
    sc->add_option("--seed", synth_opt.seed, "Random seed")->envname("CCTREE_SEED");
    sc->add_option("-o,--output", synth_opt.output, "JSONL path instead of stdout")
        ->envname("CCTREE_OUTPUT");
    sc->callback([&] {
      RunContext ctx;
      ctx.subcommand = "synth";
      ctx.inputs = {};
      ctx.seed = synth_opt.seed;
      ctx.config = {{"kind", synth_opt.kind}, {"count", synth_opt.count}, {"seed", synth_opt.seed}};
      std::ostringstream out;
      if (synth_opt.kind == "methods") {
        auto sources = cctree::synth::method_corpus(synth_opt.seed, synth_opt.count);
        for (std::size_t i = 0; i < sources.size(); ++i) {
          cctree::ChangeRecord rec;
          rec.id = "m" + std::to_string(i);
          rec.post_source = sources[i];
          out << cctree::record_to_json(rec).dump() << '\n';
        }
      } else if (synth_opt.kind == "two-cluster") {
        auto sequences = cctree::synth::two_cluster_corpus(synth_opt.seed, synth_opt.count);
        for (const cctree::TokenSequence& seq : sequences) {
          out << json{{"tokens", seq}}.dump() << '\n';
        }
      } else {
        auto records = synth_opt.kind == "planted"
                           ? cctree::synth::planted_dataset(synth_opt.seed, synth_opt.count)
                           : cctree::synth::single_edit_dataset(synth_opt.seed, synth_opt.count);
        for (const cctree::ChangeRecord& rec : records) {
          out << cctree::record_to_json(rec).dump() << '\n';
        }
      }
      emit_output(ctx, synth_opt.output, out.str());
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
