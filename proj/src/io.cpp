#include "auq/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "auq/error.hpp"

namespace auq::io {

namespace {

template <class T>
T get_required(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("field '") + key + "': " + e.what());
  }
}

bool has(const json& j, const char* key) { return j.is_object() && j.contains(key) && !j.at(key).is_null(); }

std::vector<std::string> string_list(const json& j, const char* key) {
  return get_required<std::vector<std::string>>(j, key);
}

}  // namespace

json to_json(const Categorical& c) {
  return json{{"classes", c.classes()}, {"probs", std::vector<double>(c.probs().begin(), c.probs().end())}};
}

Categorical categorical_from_json(const json& j) {
  if (j.is_array()) {
    try {
      return Categorical::from_probs(j.get<std::vector<double>>());
    } catch (const json::exception& e) {
      throw ValidationError(std::string("categorical: ") + e.what());
    }
  }
  return Categorical(string_list(j, "classes"), get_required<std::vector<double>>(j, "probs"));
}

json to_json(const corpus::GroundTruthRecord& r) {
  json j{{"question_id", r.question_id},
         {"question", r.question},
         {"answers", r.answers},
         {"counts", r.counts},
         {"raw_matches", r.raw_matches},
         {"discarded", r.discarded}};
  j["p_star"] = r.p_star ? to_json(*r.p_star) : json(nullptr);
  j["discard_reason"] = r.discarded ? json(r.discard_reason) : json(nullptr);
  return j;
}

corpus::GroundTruthRecord ground_truth_from_json(const json& j) {
  corpus::GroundTruthRecord r;
  r.question_id = get_required<std::string>(j, "question_id");
  if (has(j, "question")) r.question = j.at("question").get<std::string>();
  r.answers = string_list(j, "answers");
  if (has(j, "counts")) r.counts = j.at("counts").get<std::vector<std::int64_t>>();
  if (has(j, "raw_matches")) r.raw_matches = j.at("raw_matches").get<std::vector<std::int64_t>>();
  if (has(j, "discarded")) r.discarded = j.at("discarded").get<bool>();
  if (has(j, "discard_reason")) r.discard_reason = j.at("discard_reason").get<std::string>();
  if (!r.counts.empty() && r.counts.size() != r.answers.size()) {
    throw ValidationError("ground truth '" + r.question_id + "': counts and answers differ in length");
  }
  if (r.discarded) return r;
  if (has(j, "p_star")) {
    r.p_star = categorical_from_json(j.at("p_star"));
  } else if (!r.counts.empty()) {
    std::vector<double> c(r.counts.begin(), r.counts.end());
    r.p_star = normalize(c, r.answers);
  } else {
    throw ValidationError("ground truth '" + r.question_id + "': needs p_star or counts");
  }
  return r;
}

json to_json(const metrics::EvalRecord& r) {
  return json{{"question_id", r.question_id}, {"true_eu", r.true_eu}, {"scores", r.scores}};
}

metrics::EvalRecord eval_record_from_json(const json& j) {
  metrics::EvalRecord r;
  r.question_id = get_required<std::string>(j, "question_id");
  r.true_eu = get_required<double>(j, "true_eu");
  if (!(r.true_eu >= 0.0)) throw ValidationError("eval record '" + r.question_id + "': true_eu must be >= 0");
  if (has(j, "scores")) {
    for (const auto& [name, v] : j.at("scores").items()) {
      if (v.is_number()) r.scores[name] = v.get<double>();
    }
  }
  return r;
}

corpus::QuestionSpec question_spec_from_json(const json& j) {
  corpus::QuestionSpec s;
  s.question_id = get_required<std::string>(j, "question_id");
  if (has(j, "question")) s.question = j.at("question").get<std::string>();
  s.keywords = string_list(j, "keywords");
  s.answers = string_list(j, "answers");
  return s;
}

corpus::Document document_from_json(const json& j) {
  return {get_required<std::string>(j, "doc_id"), string_list(j, "sections")};
}

estimators::PredictionInput prediction_from_json(const json& j) {
  estimators::PredictionInput in;
  in.samples.question_id = get_required<std::string>(j, "question_id");
  const auto samples = get_required<json>(j, "samples");
  if (!samples.is_array() || samples.empty()) {
    throw ValidationError("prediction '" + in.samples.question_id + "': samples must be a non-empty array");
  }
  for (const auto& s : samples) {
    estimators::AnswerSample a;
    a.text = get_required<std::string>(s, "text");
    a.seq_prob = get_required<double>(s, "seq_prob");
    if (has(s, "cluster")) a.cluster = s.at("cluster").get<std::string>();
    in.samples.samples.push_back(std::move(a));
  }
  if (has(j, "best_answer_prob")) in.samples.best_answer_prob = j.at("best_answer_prob").get<double>();
  if (has(j, "ensemble")) {
    for (const auto& m : j.at("ensemble")) in.ensemble.push_back(categorical_from_json(m));
  }
  return in;
}

simlab::SimConfig sim_config_from_json(const json& j) {
  simlab::SimConfig c;
  if (!j.is_object()) throw ValidationError("simulation config must be a JSON object");
  try {
    if (has(j, "k")) c.k = j.at("k").get<int>();
    if (has(j, "n")) c.n = j.at("n").get<std::size_t>();
    if (has(j, "seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (has(j, "regime")) c.regime = simlab::parse_regime(j.at("regime").get<std::string>());
    if (has(j, "noise")) c.noise = j.at("noise").get<double>();
    if (has(j, "deltas")) c.deltas = j.at("deltas").get<std::vector<double>>();
    if (has(j, "ensemble")) c.ensemble = j.at("ensemble").get<bool>();
    if (has(j, "ensemble_size")) c.ensemble_size = j.at("ensemble_size").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("simulation config: ") + e.what());
  }
  simlab::validate(c);
  return c;
}

json to_json(const simlab::SimConfig& c) {
  return json{{"k", c.k},           {"n", c.n},
              {"seed", c.seed},     {"regime", simlab::to_string(c.regime)},
              {"noise", c.noise},   {"deltas", c.deltas},
              {"ensemble", c.ensemble}, {"ensemble_size", c.ensemble_size}};
}

json to_json(const simlab::SimReport& r) {
  json j;
  j["config"] = to_json(r.config);
  j["concordance"] = json::object();
  for (const auto& [name, v] : r.concordance) j["concordance"][name] = v;
  j["aucroc"] = json::array();
  for (const auto& a : r.aucroc) {
    j["aucroc"].push_back(
        {{"estimator", a.estimator}, {"delta", a.delta}, {"value", a.value ? json(*a.value) : json(nullptr)}});
  }
  j["thm1"] = json::array();
  for (const auto& t : r.thm1) {
    j["thm1"].push_back({{"delta", t.delta},
                         {"applicable", t.applicable},
                         {"eu_lower_bound", t.eu_lower_bound},
                         {"checked", t.checked},
                         {"violations", t.violations},
                         {"min_margin", t.min_margin ? json(*t.min_margin) : json(nullptr)}});
  }
  j["thm2"] = json::array();
  for (const auto& t : r.thm2) {
    json e{{"delta", t.delta}, {"applicable", t.applicable}};
    if (t.applicable) {
      e.update({{"gamma_delta", t.gamma_delta},
                {"eu_cap", t.eu_cap},
                {"avg_loss", t.avg_loss},
                {"p_low_entropy", t.p_low_entropy},
                {"prob_lower_bound", t.prob_lower_bound},
                {"sharp_prob_lower_bound", t.sharp_prob_lower_bound},
                {"observed", t.observed},
                {"holds", t.holds},
                {"sharp_holds", t.sharp_holds}});
    }
    j["thm2"].push_back(std::move(e));
  }
  j["max_eu_spread_same_cell"] = r.max_eu_spread_same_cell;
  j["ok"] = r.ok;
  return j;
}

void for_each_jsonl_line(const std::filesystem::path& path,
                         const std::function<void(std::size_t line, const json&)>& visit,
                         std::vector<LineError>& errors) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      visit(number, json::parse(line));
    } catch (const json::exception& e) {
      errors.push_back({number, std::string("invalid JSON: ") + e.what()});
    } catch (const Error& e) {
      errors.push_back({number, e.what()});
    }
  }
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("'" + path.string() + "': invalid JSON: " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  out.flush();
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return std::to_string(v);
  return std::string(buf, end);
}

std::string to_jsonl(const std::vector<json>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += r.dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace auq::io
