#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "auq/cli.hpp"
#include "auq/io.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run auq_run(std::vector<std::string> args) {
  args.insert(args.begin(), "auq");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = auq::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("auq-cli-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name, const std::string& content = {}) const {
    const auto p = path / name;
    if (!content.empty()) std::ofstream(p) << content;
    return p.string();
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<json> read_lines(const std::string& path) {
  std::vector<json> out;
  std::istringstream in(slurp(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

const std::string kFixtures = AUQ_FIXTURES;

// Ground truth with varied counts and predictions of varied quality.
void write_eval_inputs(const TempDir& dir, bool perfect, std::string& gt, std::string& preds) {
  std::mt19937 rng(12);
  std::uniform_int_distribution<int> cnt(1, 200);
  std::ostringstream g;
  std::ostringstream p;
  for (int q = 0; q < 12; ++q) {
    const std::vector<std::string> answers{"alpha", "beta", "gamma"};
    std::vector<int> counts{cnt(rng), cnt(rng), q % 3 == 0 ? 0 : cnt(rng)};
    if (counts[2] == 0) counts.pop_back();
    std::vector<std::string> used(answers.begin(), answers.begin() + counts.size());
    json gj{{"question_id", "q" + std::to_string(q)}, {"answers", used}, {"counts", counts}};
    g << gj.dump() << '\n';
    double total = 0.0;
    for (int c : counts) total += c;
    json samples = json::array();
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const double prob = perfect ? counts[i] / total : oracle::random_simplex(counts.size(), rng)[i];
      samples.push_back({{"text", used[i]}, {"seq_prob", prob}});
    }
    json pj{{"question_id", "q" + std::to_string(q)}, {"samples", samples}};
    if (!perfect) pj["best_answer_prob"] = 0.3 + 0.05 * q;
    p << pj.dump() << '\n';
  }
  gt = dir.file("gt.jsonl", g.str());
  preds = dir.file("preds.jsonl", p.str());
}

}  // namespace

TEST_CASE("build-gt reproduces planted counts on the fixture corpus") {
  TempDir dir;
  const auto out = dir.file("gt.jsonl");
  const auto r = auq_run({"build-gt", "--corpus", kFixtures + "/fire_corpus.jsonl", "--specs",
                          kFixtures + "/fire_specs.jsonl", "--out", out});
  REQUIRE(r.code == 0);
  const auto rows = read_lines(out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1]["question_id"] == "maqa-fire");
  CHECK(rows[1]["counts"] == json({31, 32, 25}));
  const auto fire = auq::io::categorical_from_json(rows[1]["p_star"]);
  CHECK(fire[0] == 31.0 / 88);
  CHECK(std::abs(auq::entropy(fire) - 1.0929) < 1e-4);
  CHECK(rows[0]["counts"] == json({188, 91}));
  const auto dropped = read_lines(out + ".discarded.jsonl");
  REQUIRE(dropped.size() == 1);
  CHECK(dropped[0]["question_id"] == "unmatched");
  CHECK(dropped[0]["discarded"] == true);

  // workers never change output
  for (const char* w : {"1", "2", "8"}) {
    ::setenv("AUQ_WORKERS", w, 1);
    const auto again = dir.file(std::string("gt") + w + ".jsonl");
    REQUIRE(auq_run({"build-gt", "--corpus", kFixtures + "/fire_corpus.jsonl", "--specs",
                     kFixtures + "/fire_specs.jsonl", "--out", again})
                .code == 0);
    CHECK(slurp(again) == slurp(out));
  }
  ::unsetenv("AUQ_WORKERS");
}

TEST_CASE("build-gt with entailment filters") {
  TempDir dir;
  const auto out = dir.file("gt.jsonl");
  const std::string cmd =
      "while read -r l; do case \"$l\" in *'\"answer\":\"Oxygen\"'*) echo reject;; *) echo accept;; esac; done";
  auto r = auq_run({"build-gt", "--corpus", kFixtures + "/fire_corpus.jsonl", "--specs",
                    kFixtures + "/fire_specs.jsonl", "--out", out, "--filter-cmd", cmd});
  REQUIRE(r.code == 0);
  auto rows = read_lines(out);
  REQUIRE(rows.size() == 1);  // the fire question lost Oxygen and is discarded
  CHECK(rows[0]["question_id"] == "ambig-frozen");

  const auto table = dir.file("decisions.jsonl", "{\"question_id\":\"x\",\"answer\":\"y\",\"chunk_id\":\"z\",\"accept\":true}\n");
  r = auq_run({"build-gt", "--corpus", kFixtures + "/fire_corpus.jsonl", "--specs", kFixtures + "/fire_specs.jsonl",
               "--out", out, "--filter-decisions", table});
  CHECK(r.code == 0);
  CHECK(r.err.find("no pre-computed decision") != std::string::npos);
  CHECK(read_lines(out).empty());

  r = auq_run({"build-gt", "--corpus", kFixtures + "/fire_corpus.jsonl", "--specs", kFixtures + "/fire_specs.jsonl",
               "--out", out, "--filter-cmd", "exit 3"});
  CHECK(r.code == 1);
  r = auq_run({"build-gt", "--corpus", kFixtures + "/fire_corpus.jsonl", "--specs", kFixtures + "/fire_specs.jsonl",
               "--out", out, "--filter-cmd", "echo maybe"});
  CHECK(r.code == 2);
}

TEST_CASE("build-gt input handling") {
  TempDir dir;
  const auto out = dir.file("gt.jsonl");
  const auto empty = dir.file("empty.jsonl", "\n");
  auto r = auq_run({"build-gt", "--corpus", kFixtures + "/fire_corpus.jsonl", "--specs", empty, "--out", out});
  CHECK(r.code == 0);
  CHECK(r.err.find("no question specs") != std::string::npos);
  CHECK(slurp(out).empty());

  const auto specs = dir.file("specs.jsonl",
                              "{\"question_id\":\"a\",\"question\":\"q\",\"keywords\":[\"fire\"],\"answers\":[\"heat\"]}\n"
                              "not json\n"
                              "{\"question_id\":\"b\"}\n");
  r = auq_run({"build-gt", "--corpus", kFixtures + "/fire_corpus.jsonl", "--specs", specs, "--out", out});
  CHECK(r.code == 0);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(r.err.find("line 3") != std::string::npos);
  CHECK(read_lines(out).size() == 1);

  r = auq_run({"build-gt", "--corpus", dir.file("missing.jsonl"), "--specs", specs, "--out", out});
  CHECK(r.code == 1);
  r = auq_run({"build-gt", "--corpus", kFixtures + "/fire_corpus.jsonl", "--specs", specs, "--out", out, "--cap", "-1"});
  CHECK(r.code == 2);
}

TEST_CASE("eval scores estimators and writes metrics") {
  TempDir dir;
  std::string gt;
  std::string preds;
  write_eval_inputs(dir, false, gt, preds);
  const auto records = dir.file("records.jsonl");
  const auto metrics = dir.file("metrics.csv");
  auto r = auq_run({"eval", "--ground-truth", gt, "--predictions", preds, "--out", records, "--metrics", metrics});
  REQUIRE(r.code == 0);
  const auto rows = read_lines(records);
  REQUIRE(rows.size() == 12);

  // concordance in the CSV equals brute force over the written records
  std::vector<double> eu;
  std::vector<double> se;
  for (const auto& row : rows) {
    eu.push_back(row["true_eu"].get<double>());
    se.push_back(row["scores"]["semantic_entropy"].get<double>());
    CHECK(std::abs(row["total"].get<double>() - row["aleatoric"].get<double>() - row["point_epistemic"].get<double>()) <
          1e-9);
  }
  const auto [num, den] = oracle::brute_concordance(eu, se);
  const auto csv = slurp(metrics);
  CHECK(csv.rfind("estimator,n,concordance,aucroc@", 0) == 0);
  std::istringstream lines(csv);
  std::string line;
  bool found = false;
  while (std::getline(lines, line)) {
    if (line.rfind("semantic_entropy,", 0) != 0) continue;
    found = true;
    const auto first = line.find(',');
    const auto second = line.find(',', first + 1);
    const auto third = line.find(',', second + 1);
    CHECK(std::stod(line.substr(second + 1, third - second - 1)) == num / den);
  }
  CHECK(found);
  CHECK(csv.find("msp,12,") != std::string::npos);
  // no ensembles in the input: mutual information is reported as unavailable
  CHECK(r.err.find("mutual_information") != std::string::npos);
}

TEST_CASE("eval handles unmatched and degenerate inputs") {
  TempDir dir;
  std::string gt;
  std::string preds;
  write_eval_inputs(dir, true, gt, preds);
  auto r = auq_run({"eval", "--ground-truth", gt, "--predictions", preds});
  CHECK(r.code == 3);
  CHECK(r.err.find("concordance") != std::string::npos);

  const auto other = dir.file("other.jsonl", "{\"question_id\":\"nope\",\"samples\":[{\"text\":\"a\",\"seq_prob\":1}]}\n");
  r = auq_run({"eval", "--ground-truth", gt, "--predictions", other});
  CHECK(r.code == 2);
  CHECK(r.err.find("nope") != std::string::npos);
}

TEST_CASE("eval in Dirichlet mode with a gamma ablation") {
  TempDir dir;
  std::string gt;
  std::string preds;
  write_eval_inputs(dir, false, gt, preds);
  const auto records = dir.file("records.jsonl");
  const auto ablation = dir.file("ablation.csv");
  auto r = auq_run({"eval", "--ground-truth", gt, "--predictions", preds, "--out", records, "--dirichlet-gamma", "5",
                    "--ablation-out", ablation, "--metrics", dir.file("m.csv")});
  REQUIRE(r.code == 0);
  const auto rows = read_lines(records);
  for (const auto& row : rows) CHECK(row["true_eu"].get<double>() != row["point_epistemic"].get<double>());
  const auto csv = slurp(ablation);
  CHECK(csv.rfind("gamma,estimator,concordance\n", 0) == 0);
  std::size_t a = csv.find("\n1,semantic_entropy");
  std::size_t b = csv.find("\n2,semantic_entropy");
  std::size_t c = csv.find("\n5,semantic_entropy");
  std::size_t d = csv.find("\n10,semantic_entropy");
  std::size_t e = csv.find("\n100,semantic_entropy");
  CHECK(a < b);
  CHECK(b < c);
  CHECK(c < d);
  CHECK(d < e);
  CHECK(e != std::string::npos);
  CHECK(csv.find("point,semantic_entropy") != std::string::npos);

  r = auq_run({"eval", "--ground-truth", gt, "--predictions", preds, "--dirichlet-gamma", "0.5"});
  CHECK(r.code == 2);
  r = auq_run({"eval", "--ground-truth", gt, "--predictions", preds, "--epsilon", "0.5"});
  CHECK(r.code == 2);
}

TEST_CASE("bounds subcommand") {
  auto r = auq_run({"bounds", "--k", "3", "--delta", "0.5", "--avg-loss", "0.5", "--p-low-entropy", "0.5"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(std::abs(j["gamma_delta"].get<double>() - 0.8) < 1e-3);
  CHECK(std::abs(j["thm2"]["prob_lower_bound"].get<double>() - 0.3789) < 1e-3);
  CHECK(j["bound_line"].size() == 21);
  CHECK(j["bound_line"].back()["eu_lower_bound"].get<double>() == doctest::Approx(std::log(3.0)));
  CHECK(auq_run({"bounds", "--k", "1", "--delta", "0.1"}).code == 2);
  CHECK(auq_run({"bounds", "--k", "3", "--delta", "0", "--avg-loss", "0.1", "--p-low-entropy", "0.5"}).code == 3);
  CHECK(auq_run({"bounds", "--k", "3", "--delta", "0.2", "--avg-loss", "0.1"}).code == 2);
  CHECK(auq_run({"bounds", "--bogus"}).code == 2);
  CHECK(auq_run({}).code == 2);
  CHECK(auq_run({"--help"}).code == 0);
}

TEST_CASE("simulate and metrics subcommands") {
  TempDir dir;
  const auto cfg = dir.file("cfg.json", R"({"k": 3, "n": 2000, "regime": "zero-au", "seed": 1})");
  const auto recs = dir.file("sim.jsonl");
  const auto report = dir.file("report.json");
  const auto scatter = dir.file("scatter.csv");
  const auto hist = dir.file("hist.csv");
  ::setenv("AUQ_WORKERS", "1", 1);
  auto r = auq_run({"simulate", "--config", cfg, "--out", recs, "--report", report, "--scatter-csv", scatter,
                    "--histogram-csv", hist, "--seed", "9"});
  REQUIRE(r.code == 0);
  const auto one = slurp(recs);
  ::setenv("AUQ_WORKERS", "8", 1);
  REQUIRE(auq_run({"simulate", "--config", cfg, "--out", recs, "--report", report, "--seed", "9"}).code == 0);
  CHECK(slurp(recs) == one);
  ::unsetenv("AUQ_WORKERS");

  const auto rep = json::parse(slurp(report));
  CHECK(rep["config"]["seed"] == 9);
  CHECK(rep["ok"] == true);
  CHECK(slurp(scatter).rfind("entropy_p,true_eu,aleatoric\n", 0) == 0);
  CHECK(slurp(hist).rfind("bin_left,bin_right,count\n", 0) == 0);

  const auto mcsv = dir.file("m.csv");
  const auto mh = dir.file("mh.csv");
  const auto ms = dir.file("ms.json");
  r = auq_run({"metrics", "--records", recs, "--out", mcsv, "--deltas", "0.5,1.0", "--histogram-out", mh,
               "--summary-out", ms, "--bins", "10"});
  REQUIRE(r.code == 0);
  CHECK(slurp(mcsv).rfind("estimator,n,concordance,aucroc@0.500000,aucroc@1.000000\n", 0) == 0);
  CHECK(read_lines(recs).size() == 2000);
  const auto s = json::parse(slurp(ms));
  CHECK(s["n"] == 2000);
  CHECK(s["mean"].get<double>() > 0.0);
  std::size_t bins = 0;
  std::istringstream hl(slurp(mh));
  std::string line;
  while (std::getline(hl, line)) ++bins;
  CHECK(bins == 11);

  CHECK(auq_run({"metrics", "--records", recs, "--deltas", "-1"}).code == 2);
  CHECK(auq_run({"simulate", "--config", dir.file("bad.json", R"({"k": 1})")}).code == 2);
}
