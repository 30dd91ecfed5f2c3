#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cctree/change_tree.hpp"
#include "cctree/demo.hpp"
#include "cctree/embed.hpp"
#include "cctree/eval.hpp"
#include "cctree/features.hpp"
#include "cctree/java_parser.hpp"
#include "cctree/synth.hpp"
#include "cctree/tokens.hpp"
#include "cctree/version.hpp"

namespace py = pybind11;

namespace {

py::object json_to_py(const nlohmann::json& value) {
  using nlohmann::json;
  switch (value.type()) {
    case json::value_t::null:
      return py::none();
    case json::value_t::boolean:
      return py::bool_(value.get<bool>());
    case json::value_t::number_integer:
      return py::int_(value.get<long long>());
    case json::value_t::number_unsigned:
      return py::int_(value.get<unsigned long long>());
    case json::value_t::number_float:
      return py::float_(value.get<double>());
    case json::value_t::string:
      return py::str(value.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const auto& item : value) out.append(json_to_py(item));
      return out;
    }
    case json::value_t::object: {
      py::dict out;
      for (auto it = value.begin(); it != value.end(); ++it)
        out[py::str(it.key())] = json_to_py(it.value());
      return out;
    }
    default:
      return py::none();
  }
}

nlohmann::json py_to_json(const py::handle& obj) {
  if (obj.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
  if (py::isinstance<py::int_>(obj)) return obj.cast<long long>();
  if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
  if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
  if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& item : obj) arr.push_back(py_to_json(item));
    return arr;
  }
  if (py::isinstance<py::dict>(obj)) {
    nlohmann::json out = nlohmann::json::object();
    for (auto item : obj.cast<py::dict>())
      out[item.first.cast<std::string>()] = py_to_json(item.second);
    return out;
  }
  throw std::invalid_argument("unsupported value while converting to JSON");
}

cctree::RankMode rank_mode_of(const std::string& name) {
  if (name == "none") return cctree::RankMode::none;
  if (name == "positional") return cctree::RankMode::positional;
  throw std::invalid_argument("rank_mode must be 'none' or 'positional'");
}

cctree::ChangeRecord record_of(const py::handle& obj) {
  return cctree::record_from_json(py_to_json(obj));
}

py::list records_to_py(const std::vector<cctree::ChangeRecord>& records) {
  py::list out;
  for (const cctree::ChangeRecord& rec : records) out.append(json_to_py(record_to_json(rec)));
  return out;
}

cctree::EmbeddingModel train_embedding(const std::vector<cctree::TokenSequence>& raw,
                                       double min_df, std::uint32_t dim, std::uint32_t epochs,
                                       std::uint32_t negative, float learning_rate,
                                       std::uint32_t infer_epochs, std::uint64_t seed) {
  std::vector<cctree::TokenSequence> corpus;
  corpus.reserve(raw.size());
  for (const cctree::TokenSequence& seq : raw) corpus.push_back(cctree::normalize_sequence(seq));
  cctree::Vocabulary vocab = cctree::build_vocabulary(corpus, min_df);
  for (cctree::TokenSequence& seq : corpus) seq = cctree::apply_oov(seq, vocab);

  cctree::EmbedConfig config;
  config.dim = dim;
  config.epochs = epochs;
  config.negative_samples = negative;
  config.learning_rate = learning_rate;
  config.infer_epochs = infer_epochs;
  config.seed = seed;
  return cctree::EmbeddingModel::train(corpus, config);
}

}  // namespace

PYBIND11_MODULE(_cctree, m) {
  m.doc() = "Code Change Trees: structural diffs of Java methods";
  m.attr("__version__") = cctree::kToolVersion;

  m.def(
      "parse_source",
      [](const std::string& source) {
        return json_to_py(cctree::export_tree(cctree::parse_compilation_unit(source)));
      },
      py::arg("source"), "Parse a compilation unit and return its tree as nested dicts.");

  m.def(
      "methods",
      [](const std::string& source) {
        cctree::Ast unit = cctree::parse_compilation_unit(source);
        py::list out;
        for (const cctree::MethodUnit& method : cctree::extract_methods(unit, source)) {
          py::dict entry;
          entry["qualified_name"] = method.qualified_name;
          entry["node_count"] = method.ast.node_count();
          entry["source_text"] = method.source_text;
          out.append(entry);
        }
        return out;
      },
      py::arg("source"), "List the methods of a compilation unit.");

  m.def(
      "flatten_method",
      [](const std::string& source) {
        return cctree::flatten(cctree::parse_method_source(source).ast);
      },
      py::arg("source"), "Pre-order token sequence of a method's tree.");

  m.def("normalize", &cctree::normalize_sequence, py::arg("sequence"),
        "Replace whitespace inside string-literal tokens with underscores.");

  m.def(
      "root_path_values",
      [](const std::string& source, const std::string& rank_mode) {
        cctree::Ast ast = cctree::parse_method_source(source).ast;
        cctree::RootPathSet set = cctree::root_paths(ast, rank_mode_of(rank_mode));
        std::vector<std::string> out;
        out.reserve(set.size());
        for (const cctree::RootPath& path : set.paths()) out.push_back(path.key.value);
        return out;
      },
      py::arg("source"), py::arg("rank_mode") = "none",
      "Unique root-path identifiers of a method's tree.");

  m.def(
      "change_trees",
      [](const std::string& pre_source, const std::string& post_source,
         const std::string& rank_mode) {
        cctree::RankMode mode = rank_mode_of(rank_mode);
        cctree::Ast pre = cctree::parse_method_source(pre_source).ast;
        cctree::Ast post = cctree::parse_method_source(post_source).ast;
        auto [gone, added] = cctree::change_trees(pre, post, mode);
        py::dict out;
        out["pre"] = json_to_py(cctree::export_change_tree(gone));
        out["post"] = json_to_py(cctree::export_change_tree(added));
        out["pre_nodes"] = gone.node_count();
        out["post_nodes"] = added.node_count();
        out["pre_tokens"] = cctree::flatten_change_tree(gone);
        out["post_tokens"] = cctree::flatten_change_tree(added);
        return out;
      },
      py::arg("pre_source"), py::arg("post_source"), py::arg("rank_mode") = "none",
      "Both change trees between two method sources (None when empty).");

  m.def(
      "metrics",
      [](const std::string& source) {
        cctree::MetricSet values = cctree::compute_metrics(cctree::parse_method_source(source));
        auto array = values.as_array();
        py::dict out;
        for (std::size_t i = 0; i < array.size(); ++i)
          out[py::str(cctree::kMetricNames[i])] = array[i];
        return out;
      },
      py::arg("source"), "Static source metrics of one method.");

  m.def(
      "demo",
      [](const std::string& rank_mode) {
        cctree::demo::DemoResult r = cctree::demo::run(rank_mode_of(rank_mode));
        py::dict out;
        out["pre_ast_nodes"] = r.pre_ast_nodes;
        out["post_ast_nodes"] = r.post_ast_nodes;
        out["pre_root_paths"] = r.pre_root_paths;
        out["post_root_paths"] = r.post_root_paths;
        out["pre_change_tree_empty"] = r.pre_change_tree_empty;
        out["post_change_tree_empty"] = r.post_change_tree_empty;
        out["pre_change_tree_nodes"] = r.pre_change_tree_nodes;
        out["post_change_tree_nodes"] = r.post_change_tree_nodes;
        out["simple_total_tokens"] = r.simple_total_tokens;
        out["change_tree_total_tokens"] = r.change_tree_total_tokens;
        out["post_reduction_percent"] = r.post_reduction_percent;
        return out;
      },
      py::arg("rank_mode") = "none", "Run the bundled worked example.");

  py::class_<cctree::EmbeddingModel>(m, "EmbeddingModel")
      .def_static("load", &cctree::EmbeddingModel::load, py::arg("path"))
      .def("save", &cctree::EmbeddingModel::save, py::arg("path"))
      .def("infer", &cctree::EmbeddingModel::infer, py::arg("sequence"))
      .def_property_readonly("dim", &cctree::EmbeddingModel::dim)
      .def_property_readonly("vocab_size", &cctree::EmbeddingModel::vocab_size)
      .def_property_readonly("terms", &cctree::EmbeddingModel::terms)
      .def("has_term", &cctree::EmbeddingModel::has_term, py::arg("term"));

  m.def("train_embedding", &train_embedding, py::arg("corpus"), py::arg("min_df") = 0.01,
        py::arg("dim") = 100, py::arg("epochs") = 20, py::arg("negative") = 5,
        py::arg("learning_rate") = 0.025f, py::arg("infer_epochs") = 50, py::arg("seed") = 1,
        "Normalize a token corpus, build its vocabulary, and train document vectors.");

  m.def(
      "represent",
      [](const py::dict& record, const std::string& mode, const cctree::EmbeddingModel* model,
         const std::string& rank_mode) {
        cctree::FeatureVector vec =
            cctree::represent(record_of(record), cctree::repr_mode_from_name(mode), model,
                              rank_mode_of(rank_mode));
        return vec.values;
      },
      py::arg("record"), py::arg("mode"), py::arg("model").none(true) = nullptr,
      py::arg("rank_mode") = "none",
      "Feature vector of one change record under the given representation.");

  m.def(
      "evaluate",
      [](const py::list& records, const std::vector<std::string>& modes, std::size_t folds,
         std::uint64_t seed, const cctree::EmbeddingModel* model, const std::string& rank_mode,
         bool upsample, double baseline_rate) {
        std::vector<cctree::ChangeRecord> parsed;
        parsed.reserve(records.size());
        for (const auto& item : records) parsed.push_back(record_of(item));
        std::vector<cctree::ReprMode> parsed_modes;
        parsed_modes.reserve(modes.size());
        for (const std::string& name : modes)
          parsed_modes.push_back(cctree::repr_mode_from_name(name));

        cctree::EvalConfig config;
        config.folds = folds;
        config.seed = seed;
        config.upsample_to_balance = upsample;
        config.positive_rate_for_baseline = baseline_rate;
        cctree::EvalReport report = cctree::run_experiment(parsed, parsed_modes, config, model,
                                                           rank_mode_of(rank_mode));
        return json_to_py(cctree::report_to_json(report));
      },
      py::arg("records"), py::arg("modes"), py::arg("folds") = 10, py::arg("seed") = 1,
      py::arg("model").none(true) = nullptr, py::arg("rank_mode") = "none",
      py::arg("upsample") = true, py::arg("baseline_rate") = 0.2,
      "Cross-validated classification report as nested dicts.");

  m.def(
      "method_corpus",
      [](std::uint64_t seed, std::size_t count) { return cctree::synth::method_corpus(seed, count); },
      py::arg("seed"), py::arg("count"), "Deterministic corpus of method sources.");

  m.def(
      "single_edit_dataset",
      [](std::uint64_t seed, std::size_t count) {
        return records_to_py(cctree::synth::single_edit_dataset(seed, count));
      },
      py::arg("seed"), py::arg("count"), "Deterministic one-edit change records.");

  m.def(
      "planted_dataset",
      [](std::uint64_t seed, std::size_t count) {
        return records_to_py(cctree::synth::planted_dataset(seed, count));
      },
      py::arg("seed"), py::arg("count"),
      "Labelled change records with a planted structural pattern.");

  m.def(
      "two_cluster_corpus",
      [](std::uint64_t seed, std::size_t per_cluster, std::size_t min_len, std::size_t max_len) {
        return cctree::synth::two_cluster_corpus(seed, per_cluster, min_len, max_len);
      },
      py::arg("seed"), py::arg("per_cluster"), py::arg("min_len") = 30,
      py::arg("max_len") = 60, "Token documents over two disjoint vocabularies.");
}
