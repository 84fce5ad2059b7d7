#pragma once

// JSON / JSONL / CSV file formats.

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "auq/categorical.hpp"
#include "auq/corpus.hpp"
#include "auq/estimators.hpp"
#include "auq/metrics.hpp"
#include "auq/simlab.hpp"

namespace auq::io {

using json = nlohmann::json;

json to_json(const Categorical& c);
/// {"classes": [...], "probs": [...]}; a bare array of numbers is also accepted.
Categorical categorical_from_json(const json& j);

json to_json(const corpus::GroundTruthRecord& r);
corpus::GroundTruthRecord ground_truth_from_json(const json& j);

json to_json(const metrics::EvalRecord& r);
metrics::EvalRecord eval_record_from_json(const json& j);

corpus::QuestionSpec question_spec_from_json(const json& j);
corpus::Document document_from_json(const json& j);

/// {"question_id", "samples": [{"text", "seq_prob", "cluster"?}],
///  "best_answer_prob"?, "ensemble"?: [Categorical]}
estimators::PredictionInput prediction_from_json(const json& j);

simlab::SimConfig sim_config_from_json(const json& j);
json to_json(const simlab::SimConfig& c);
json to_json(const simlab::SimReport& r);

struct LineError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

/// Parses every non-blank line with `parse`. Lines that fail are reported and
/// skipped. Throws IoError when the file cannot be opened.
template <class T>
std::vector<T> read_jsonl(const std::filesystem::path& path, const std::function<T(const json&)>& parse,
                          std::vector<LineError>& errors);

/// Line-level callback form used by read_jsonl.
void for_each_jsonl_line(const std::filesystem::path& path,
                         const std::function<void(std::size_t line, const json&)>& visit,
                         std::vector<LineError>& errors);

json read_json_file(const std::filesystem::path& path);

/// Throws IoError when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Shortest round-trippable decimal text for a double.
std::string format_double(double v);

/// One compact JSON object per line (keys sorted), newline-terminated.
std::string to_jsonl(const std::vector<json>& rows);

template <class T>
std::vector<T> read_jsonl(const std::filesystem::path& path, const std::function<T(const json&)>& parse,
                          std::vector<LineError>& errors) {
  std::vector<T> out;
  for_each_jsonl_line(
      path, [&](std::size_t, const json& j) { out.push_back(parse(j)); }, errors);
  return out;
}

}  // namespace auq::io
