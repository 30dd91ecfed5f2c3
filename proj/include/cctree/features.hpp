#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cctree/change_tree.hpp"
#include "cctree/embed.hpp"
#include "cctree/java_parser.hpp"

namespace cctree {

// One function-level change: the state before and after a commit touched
// the function. A missing side means the function was added or deleted.
struct ChangeRecord {
  std::string id;
  std::optional<std::string> pre_source;
  std::optional<std::string> post_source;
  bool label = false;
};

enum class ReprMode { metrics, simple, change_tree };

std::string repr_mode_name(ReprMode mode);
ReprMode repr_mode_from_name(const std::string& name);

// Per-function metric values, ordered alphabetically by metric code.
inline constexpr std::array<const char*, 10> kMetricNames = {
    "LLOC", "LOC", "McCC", "NL", "NLE", "NOC", "NOI", "NOL", "NOS", "NUMPAR"};

struct MetricSet {
  double lloc = 0;    // distinct source lines starting a statement
  double loc = 0;     // physical lines of the method text
  double mccc = 0;    // 1 + decisions (if, while, for, &&, ||)
  double nl = 0;      // deepest control-structure nesting of any statement
  double nle = 0;     // like NL, but an if directly under an else counts once
  double noc = 0;     // conditionals
  double noi = 0;     // distinct invoked method names
  double nol = 0;     // loops
  double nos = 0;     // statements (for-header clauses excluded)
  double numpar = 0;  // declared parameters

  std::array<double, 10> as_array() const {
    return {lloc, loc, mccc, nl, nle, noc, noi, nol, nos, numpar};
  }
};

struct FeatureVector {
  std::vector<double> values;  // pre-state half followed by post-state half
  ReprMode mode = ReprMode::metrics;

  std::size_t dim() const { return values.size(); }
};

// A data error tied to one change record, so batch runs can report which
// input line is at fault.
class RecordError : public std::runtime_error {
 public:
  RecordError(std::string record_id, const std::string& message)
      : std::runtime_error("record " + record_id + ": " + message),
        record_id_(std::move(record_id)) {}

  const std::string& record_id() const { return record_id_; }

 private:
  std::string record_id_;
};

MetricSet compute_metrics(const MethodUnit& method);

// Accepts either a full compilation unit or a bare method (which gets
// wrapped in a synthetic class). Returns the first method of the unit.
MethodUnit parse_method_source(const std::string& source);

// normalize_sequence + replacement of terms outside the model vocabulary
// with the OOV symbol.
TokenSequence preprocess_for_model(const TokenSequence& seq, const EmbeddingModel& model);

// Builds the concatenated pre/post vector for one record. `model` may be
// null only for metrics mode. An absent state contributes an all-zero half;
// for change_tree mode the present side is then diffed against the empty
// path set, i.e. the full tree. Parse failures surface as RecordError.
FeatureVector represent(const ChangeRecord& record, ReprMode mode,
                        const EmbeddingModel* model, RankMode rank_mode);

ChangeRecord record_from_json(const nlohmann::json& doc);
nlohmann::json record_to_json(const ChangeRecord& record);

// One JSON object per line; blank lines are skipped.
std::vector<ChangeRecord> load_records_jsonl(const std::string& path);
void save_records_jsonl(const std::vector<ChangeRecord>& records, const std::string& path);

// Header id,label,f0..f{n-1}; floats in shortest round-trip form.
std::string features_csv(const std::vector<ChangeRecord>& records,
                         const std::vector<FeatureVector>& vectors);

}  // namespace cctree
