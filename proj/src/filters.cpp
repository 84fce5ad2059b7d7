#include "auq/filters.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <random>

#include "auq/error.hpp"
#include "auq/io.hpp"

namespace auq::corpus {

namespace {

std::string lower_trimmed(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  std::string out = s.substr(b, e - b + 1);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Shell-quoting for paths we generate ourselves.
std::string quote(const std::filesystem::path& p) {
  std::string s = p.string();
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  return out + "'";
}

}  // namespace

bool parse_decision(const std::string& line) {
  const auto v = lower_trimmed(line);
  if (v == "1" || v == "true" || v == "accept" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "reject" || v == "no") return false;
  if (!v.empty() && v.front() == '{') {
    auto j = io::json::parse(line, nullptr, false);
    if (!j.is_discarded() && j.contains("accept") && j["accept"].is_boolean()) return j["accept"].get<bool>();
  }
  throw ValidationError("filter: unrecognized decision '" + line + "'");
}

std::vector<bool> CommandFilter::decide(std::span<const FilterQuery> queries) const {
  namespace fs = std::filesystem;
  std::random_device rd;
  const auto dir = fs::temp_directory_path() / ("auq-filter-" + std::to_string(rd()));
  fs::create_directories(dir);
  const auto in_path = dir / "queries.jsonl";
  const auto out_path = dir / "decisions.txt";
  struct Cleanup {
    fs::path dir;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(dir, ec);
    }
  } cleanup{dir};

  {
    std::ofstream in(in_path);
    if (!in) throw IoError("filter: cannot write '" + in_path.string() + "'");
    for (const auto& q : queries) {
      io::json j{{"question_id", q.question_id}, {"question", q.question}, {"answer", q.answer},
                 {"chunk_id", q.chunk_id},       {"text", q.chunk_text}};
      in << j.dump() << '\n';
    }
  }
  const std::string cmd = "(" + command_ + ") < " + quote(in_path) + " > " + quote(out_path);
  const int status = std::system(cmd.c_str());
  if (status != 0) throw IoError("filter command failed with status " + std::to_string(status) + ": " + command_);

  std::ifstream out(out_path);
  if (!out) throw IoError("filter: no output from command");
  std::vector<bool> decisions;
  decisions.reserve(queries.size());
  std::string line;
  while (std::getline(out, line)) {
    if (lower_trimmed(line).empty()) continue;
    decisions.push_back(parse_decision(line));
  }
  if (decisions.size() != queries.size()) {
    throw ValidationError("filter command returned " + std::to_string(decisions.size()) + " decisions for " +
                          std::to_string(queries.size()) + " queries");
  }
  return decisions;
}

DecisionTableFilter::DecisionTableFilter(const std::filesystem::path& path) {
  std::vector<io::LineError> errors;
  io::for_each_jsonl_line(
      path,
      [&](std::size_t, const io::json& j) {
        if (!j.contains("question_id") || !j.contains("answer") || !j.contains("chunk_id") || !j.contains("accept")) {
          throw ValidationError("decision needs question_id, answer, chunk_id and accept");
        }
        table_[{j["question_id"].get<std::string>(), j["answer"].get<std::string>(), j["chunk_id"].get<std::string>()}] =
            j["accept"].get<bool>();
      },
      errors);
  if (!errors.empty()) {
    throw ValidationError("decision file '" + path.string() + "' line " + std::to_string(errors.front().line) + ": " +
                          errors.front().message);
  }
}

std::vector<bool> DecisionTableFilter::decide(std::span<const FilterQuery> queries) const {
  std::vector<bool> out;
  out.reserve(queries.size());
  for (const auto& q : queries) {
    auto it = table_.find({std::string(q.question_id), std::string(q.answer), std::string(q.chunk_id)});
    if (it == table_.end()) {
      ++missing_;
      out.push_back(false);
    } else {
      out.push_back(it->second);
    }
  }
  return out;
}

}  // namespace auq::corpus
