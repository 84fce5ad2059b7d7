#pragma once

// Entailment filters backed by external resources.

#include <filesystem>
#include <map>
#include <string>
#include <tuple>

#include "auq/corpus.hpp"

namespace auq::corpus {

/// Runs a shell command once per build. The command reads one JSON object per
/// line on stdin ({"question_id","question","answer","chunk_id","text"}) and
/// must print one decision per line, in order: true/false, 1/0, accept/reject,
/// or a JSON object with a boolean "accept" field.
class CommandFilter final : public EntailmentFilter {
 public:
  explicit CommandFilter(std::string command) : command_(std::move(command)) {}
  std::vector<bool> decide(std::span<const FilterQuery> queries) const override;

 private:
  std::string command_;
};

/// Pre-computed decisions keyed by (question_id, answer, chunk_id), read from
/// JSONL lines {"question_id","answer","chunk_id","accept"}. Chunks without a
/// decision are rejected and counted in missing().
class DecisionTableFilter final : public EntailmentFilter {
 public:
  explicit DecisionTableFilter(const std::filesystem::path& path);
  std::vector<bool> decide(std::span<const FilterQuery> queries) const override;
  std::size_t missing() const noexcept { return missing_; }

 private:
  std::map<std::tuple<std::string, std::string, std::string>, bool> table_;
  mutable std::size_t missing_ = 0;
};

/// Parses one decision line; throws ValidationError on anything else.
bool parse_decision(const std::string& line);

}  // namespace auq::corpus
