#include "cctree/features.hpp"

#include <fstream>
#include <set>

#include "cctree/format.hpp"

namespace cctree {

namespace {

bool is_statement_kind(const std::string& kind) {
  return kind == "local_variable_declaration" || kind == "expression_statement" ||
         kind == "if_statement" || kind == "while_statement" ||
         kind == "for_statement" || kind == "return_statement";
}

bool is_control_kind(const std::string& kind) {
  return kind == "if_statement" || kind == "while_statement" || kind == "for_statement";
}

int line_of(const std::string& text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

struct MetricWalk {
  const std::string& source;
  std::set<int> statement_lines;
  bool lines_usable = true;
  std::size_t statements = 0;
  std::size_t ifs = 0;
  std::size_t whiles = 0;
  std::size_t fors = 0;
  std::size_t short_circuits = 0;
  double max_nl = 0;
  double max_nle = 0;
  std::set<std::string> invoked;

  void visit(const AstNode& node, const std::string& parent_kind, bool in_for_header,
             int nl, int nle) {
    if (is_statement_kind(node.kind)) {
      if (!in_for_header) ++statements;
      if (node.span)
        statement_lines.insert(line_of(source, node.span->begin));
      else
        lines_usable = false;
      if (nl > max_nl) max_nl = nl;
      if (nle > max_nle) max_nle = nle;
    }
    if (node.kind == "if_statement") ++ifs;
    if (node.kind == "while_statement") ++whiles;
    if (node.kind == "for_statement") ++fors;
    if (node.kind == "operator" && node.token && (*node.token == "&&" || *node.token == "||"))
      ++short_circuits;
    if (node.kind == "method_invocation") {
      const AstNode* name = nullptr;
      for (const AstNode& child : node.children)
        if (child.kind == "identifier" && child.token) name = &child;
      if (name) invoked.insert(*name->token);
    }

    int child_nl = nl;
    int child_nle = nle;
    if (is_control_kind(node.kind)) {
      ++child_nl;
      // An if hanging directly off an else continues the same decision
      // ladder rather than nesting deeper.
      if (!(node.kind == "if_statement" && parent_kind == "else_clause")) ++child_nle;
    }
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      bool header = node.kind == "for_statement" && i < 3;
      visit(node.children[i], node.kind, header, child_nl, child_nle);
    }
  }
};

std::vector<double> zero_half(std::size_t width) { return std::vector<double>(width, 0.0); }

std::vector<double> metrics_half(const MethodUnit& method) {
  auto arr = compute_metrics(method).as_array();
  return std::vector<double>(arr.begin(), arr.end());
}

std::vector<double> infer_half(const EmbeddingModel& model, const TokenSequence& seq) {
  return model.infer(preprocess_for_model(seq, model));
}

std::string csv_field(const std::string& raw) {
  bool needs_quote = raw.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quote) return raw;
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string repr_mode_name(ReprMode mode) {
  switch (mode) {
    case ReprMode::metrics: return "metrics";
    case ReprMode::simple: return "simple";
    case ReprMode::change_tree: return "change_tree";
  }
  return "?";
}

ReprMode repr_mode_from_name(const std::string& name) {
  if (name == "metrics") return ReprMode::metrics;
  if (name == "simple") return ReprMode::simple;
  if (name == "change_tree") return ReprMode::change_tree;
  throw std::invalid_argument("unknown representation mode: " + name);
}

MetricSet compute_metrics(const MethodUnit& method) {
  MetricSet m;
  const AstNode& root = method.ast.root();

  m.loc = 1;
  for (char c : method.source_text)
    if (c == '\n') ++m.loc;

  MetricWalk walk{method.source_text};
  walk.visit(root, "", false, 0, 0);

  m.nos = static_cast<double>(walk.statements);
  m.lloc = walk.lines_usable ? static_cast<double>(walk.statement_lines.size()) : m.nos;
  m.mccc = 1.0 + static_cast<double>(walk.ifs + walk.whiles + walk.fors + walk.short_circuits);
  m.nl = walk.max_nl;
  m.nle = walk.max_nle;
  m.noc = static_cast<double>(walk.ifs);
  m.nol = static_cast<double>(walk.whiles + walk.fors);
  m.noi = static_cast<double>(walk.invoked.size());

  for (const AstNode& child : root.children)
    if (child.kind == "formal_parameters") m.numpar = static_cast<double>(child.children.size());
  return m;
}

MethodUnit parse_method_source(const std::string& source) {
  std::vector<LexToken> tokens = lex(source);
  std::size_t i = 0;
  auto is_modifier = [](const LexToken& tok) {
    return tok.kind == LexKind::Keyword &&
           (tok.text == "public" || tok.text == "private" || tok.text == "protected" ||
            tok.text == "static" || tok.text == "final");
  };
  while (i + 1 < tokens.size() && is_modifier(tokens[i])) ++i;
  bool is_unit = tokens[i].kind == LexKind::Keyword && tokens[i].text == "class";

  std::string unit_text = is_unit ? source : "class RecordUnit {\n" + source + "\n}";
  Ast unit = parse_compilation_unit(unit_text);
  std::vector<MethodUnit> methods = extract_methods(unit, unit_text);
  if (methods.empty())
    throw ParseError(ParseDiagnostic{1, 1, "source contains no method declaration"});
  return std::move(methods.front());
}

TokenSequence preprocess_for_model(const TokenSequence& seq, const EmbeddingModel& model) {
  TokenSequence normalized = normalize_sequence(seq);
  for (std::string& item : normalized)
    if (!model.has_term(item)) item = OovPolicy{}.oov_symbol;
  return normalized;
}

FeatureVector represent(const ChangeRecord& record, ReprMode mode,
                        const EmbeddingModel* model, RankMode rank_mode) {
  if (!record.pre_source && !record.post_source)
    throw RecordError(record.id, "both states are absent");
  if (mode != ReprMode::metrics && model == nullptr)
    throw std::invalid_argument("an embedding model is required for mode " +
                                repr_mode_name(mode));

  std::optional<MethodUnit> pre, post;
  try {
    if (record.pre_source) pre = parse_method_source(*record.pre_source);
    if (record.post_source) post = parse_method_source(*record.post_source);
  } catch (const ParseError& e) {
    throw RecordError(record.id, e.what());
  }

  std::size_t width = mode == ReprMode::metrics ? kMetricNames.size() : model->dim();
  std::vector<double> pre_half, post_half;

  switch (mode) {
    case ReprMode::metrics:
      pre_half = pre ? metrics_half(*pre) : zero_half(width);
      post_half = post ? metrics_half(*post) : zero_half(width);
      break;
    case ReprMode::simple:
      pre_half = pre ? infer_half(*model, flatten(pre->ast)) : zero_half(width);
      post_half = post ? infer_half(*model, flatten(post->ast)) : zero_half(width);
      break;
    case ReprMode::change_tree: {
      RootPathSet empty(rank_mode);
      RootPathSet pre_paths = pre ? root_paths(pre->ast, rank_mode) : empty;
      RootPathSet post_paths = post ? root_paths(post->ast, rank_mode) : empty;
      if (pre) {
        ChangeTree tree = build_change_tree(path_difference(pre_paths, post_paths));
        pre_half = infer_half(*model, flatten_change_tree(tree));
      } else {
        pre_half = zero_half(width);
      }
      if (post) {
        ChangeTree tree = build_change_tree(path_difference(post_paths, pre_paths));
        post_half = infer_half(*model, flatten_change_tree(tree));
      } else {
        post_half = zero_half(width);
      }
      break;
    }
  }

  FeatureVector out;
  out.mode = mode;
  out.values = std::move(pre_half);
  out.values.insert(out.values.end(), post_half.begin(), post_half.end());
  return out;
}

ChangeRecord record_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("record must be a JSON object");
  ChangeRecord rec;
  auto id_it = doc.find("id");
  if (id_it == doc.end() || !id_it->is_string())
    throw SchemaError("record is missing a string \"id\"");
  rec.id = id_it->get<std::string>();

  auto read_side = [&](const char* key) -> std::optional<std::string> {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return std::nullopt;
    if (!it->is_string())
      throw RecordError(rec.id, std::string("\"") + key + "\" must be a string or null");
    return it->get<std::string>();
  };
  rec.pre_source = read_side("pre_source");
  rec.post_source = read_side("post_source");
  if (!rec.pre_source && !rec.post_source)
    throw RecordError(rec.id, "at least one of pre_source/post_source is required");

  auto label_it = doc.find("label");
  if (label_it == doc.end() || !label_it->is_boolean())
    throw RecordError(rec.id, "record is missing a boolean \"label\"");
  rec.label = label_it->get<bool>();
  return rec;
}

nlohmann::json record_to_json(const ChangeRecord& record) {
  nlohmann::json doc;
  doc["id"] = record.id;
  doc["pre_source"] = record.pre_source ? nlohmann::json(*record.pre_source)
                                        : nlohmann::json(nullptr);
  doc["post_source"] = record.post_source ? nlohmann::json(*record.post_source)
                                          : nlohmann::json(nullptr);
  doc["label"] = record.label;
  return doc;
}

std::vector<ChangeRecord> load_records_jsonl(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open: " + path);
  std::vector<ChangeRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded())
      throw RecordError("line " + std::to_string(line_no), "invalid JSON");
    out.push_back(record_from_json(doc));
  }
  return out;
}

void save_records_jsonl(const std::vector<ChangeRecord>& records, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open for writing: " + path);
  for (const ChangeRecord& rec : records)
    file << record_to_json(rec).dump() << "\n";
  if (!file.flush()) throw std::runtime_error("write failed: " + path);
}

std::string features_csv(const std::vector<ChangeRecord>& records,
                         const std::vector<FeatureVector>& vectors) {
  if (records.size() != vectors.size())
    throw std::invalid_argument("features_csv: records/vectors size mismatch");
  std::string out = "id,label";
  std::size_t width = vectors.empty() ? 0 : vectors.front().dim();
  for (std::size_t i = 0; i < width; ++i) out += ",f" + std::to_string(i);
  out += "\n";
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (vectors[r].dim() != width)
      throw std::invalid_argument("features_csv: inconsistent vector widths");
    out += csv_field(records[r].id);
    out += records[r].label ? ",1" : ",0";
    for (double v : vectors[r].values) {
      out.push_back(',');
      out += format_double(v);
    }
    out += "\n";
  }
  return out;
}

}  // namespace cctree
