#include "auq/cli.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "auq/bounds.hpp"
#include "auq/dirichlet.hpp"
#include "auq/filters.hpp"
#include "auq/io.hpp"
#include "auq/random.hpp"
#include "auq/simlab.hpp"

namespace auq::cli {

using io::json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io: return kIoError;
    case ErrorKind::degenerate: return kDegenerate;
    case ErrorKind::validation:
    case ErrorKind::domain:
    case ErrorKind::support:
    case ErrorKind::unavailable: return kValidation;
  }
  return kValidation;
}

QuestionEvaluation evaluate_question(const corpus::GroundTruthRecord& gt, const estimators::PredictionInput& pred,
                                     const estimators::EstimatorRegistry& registry, const EvalOptions& options) {
  if (gt.discarded || !gt.p_star) {
    throw ValidationError("question '" + gt.question_id + "': ground truth is discarded");
  }
  const auto clustered = estimators::cluster(pred.samples, options.eq);
  const auto aligned = estimators::align(*gt.p_star, clustered, options.eq, options.epsilon);

  QuestionEvaluation ev;
  ev.classes = aligned.p_star.classes();
  ev.aligned_p.assign(aligned.p_model.probs().begin(), aligned.p_model.probs().end());
  ev.point = decompose(aligned.p_star, aligned.p_model);

  if (!gt.counts.empty()) {
    std::map<std::string, double> by_class;
    for (std::size_t i = 0; i < gt.answers.size() && i < gt.counts.size(); ++i) {
      by_class[options.eq.canonical(gt.answers[i])] += static_cast<double>(gt.counts[i]);
    }
    for (const auto& cls : ev.classes) {
      auto it = by_class.find(cls);
      ev.aligned_counts.push_back(it == by_class.end() ? 0.0 : it->second);
    }
  }

  ev.record.question_id = gt.question_id;
  if (options.dirichlet_gamma) {
    if (ev.aligned_counts.empty()) {
      throw ValidationError("question '" + gt.question_id + "': Dirichlet mode needs ground-truth counts");
    }
    const auto post = dirichlet::posterior(ev.aligned_counts, *options.dirichlet_gamma);
    ev.record.true_eu = dirichlet::expected_epistemic(post, ev.aligned_p);
  } else {
    ev.record.true_eu = ev.point.epistemic;
  }

  const estimators::EstimatorContext ctx{pred, clustered, options.eq, options.epsilon};
  for (const auto& [name, fn] : registry.entries()) {
    try {
      ev.record.scores[name] = fn(ctx);
    } catch (const UnavailableError& e) {
      ev.notices.push_back(name + ": " + e.what());
    }
  }
  return ev;
}

namespace {

std::string delta_label(double d) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << d;
  return s.str();
}

}  // namespace

std::string metrics_csv(const std::vector<metrics::EvalRecord>& records, const std::vector<std::string>& estimators,
                        const std::vector<double>& deltas, std::vector<std::string>& warnings) {
  std::ostringstream csv;
  csv << "estimator,n,concordance";
  for (double d : deltas) csv << ",aucroc@" << delta_label(d);
  csv << '\n';
  for (const auto& est : estimators) {
    std::size_t n = 0;
    for (const auto& r : records) n += r.scores.contains(est) ? 1 : 0;
    if (n == 0) continue;
    csv << est << ',' << n << ',' << io::format_double(metrics::concordance(records, est));
    for (double d : deltas) {
      try {
        csv << ',' << io::format_double(metrics::aucroc(records, est, d));
      } catch (const DegenerateInputError& e) {
        csv << ",NA";
        warnings.push_back(e.what());
      }
    }
    csv << '\n';
  }
  return csv.str();
}

std::string histogram_csv(const metrics::Histogram& h) {
  std::ostringstream csv;
  csv << "bin_left,bin_right,count\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    csv << io::format_double(h.edges[b]) << ',' << io::format_double(h.edges[b + 1]) << ',' << h.counts[b] << '\n';
  }
  return csv.str();
}

namespace {

void report_line_errors(const std::string& what, const std::vector<io::LineError>& errors, std::ostream& err) {
  for (const auto& e : errors) err << "warning: " << what << " line " << e.line << ": " << e.message << '\n';
}

std::vector<double> checked_deltas(std::vector<double> deltas) {
  if (deltas.empty()) return metrics::default_deltas();
  for (double d : deltas) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw ValidationError("deltas must be finite and >= 0");
  }
  return deltas;
}

void check_epsilon(double eps) {
  if (!(eps > 0.0 && eps <= 0.1)) throw ValidationError("--epsilon must lie in (0, 0.1]");
}

estimators::EquivalenceMap load_equivalence(const std::string& path) {
  if (path.empty()) return {};
  const auto j = io::read_json_file(path);
  if (!j.is_object()) throw ValidationError("equivalence map must be a JSON object of alias -> canonical");
  std::map<std::string, std::string> aliases;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw ValidationError("equivalence map: value for '" + k + "' is not a string");
    aliases[k] = v.get<std::string>();
  }
  return estimators::EquivalenceMap(aliases);
}

// ---------------------------------------------------------------- build-gt

struct BuildGtArgs {
  std::string corpus;
  std::string specs;
  std::string out;
  std::string discard_log;
  std::int64_t cap = corpus::kDefaultCap;
  std::string filter_cmd;
  std::string filter_decisions;
  std::size_t max_chunk_chars = corpus::kMaxChunkChars;
};

int cmd_build_gt(const BuildGtArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.filter_cmd.empty() && !a.filter_decisions.empty()) {
    throw ValidationError("--filter-cmd and --filter-decisions are mutually exclusive");
  }
  if (a.cap < 0) throw ValidationError("--cap must be non-negative");

  std::vector<io::LineError> errors;
  auto docs = io::read_jsonl<corpus::Document>(a.corpus, io::document_from_json, errors);
  report_line_errors("corpus", errors, err);
  errors.clear();
  auto specs = io::read_jsonl<corpus::QuestionSpec>(a.specs, io::question_spec_from_json, errors);
  report_line_errors("specs", errors, err);

  const std::string discard_path = a.discard_log.empty() ? a.out + ".discarded.jsonl" : a.discard_log;
  if (specs.empty()) {
    err << "warning: no question specs; writing an empty dataset\n";
    io::write_text_file(a.out, "");
    io::write_text_file(discard_path, "");
    return kOk;
  }

  const auto index = corpus::build_index(corpus::chunk_corpus(docs, a.max_chunk_chars));
  std::unique_ptr<corpus::EntailmentFilter> filter;
  const corpus::DecisionTableFilter* table = nullptr;
  if (!a.filter_cmd.empty()) {
    filter = std::make_unique<corpus::CommandFilter>(a.filter_cmd);
  } else if (!a.filter_decisions.empty()) {
    auto t = std::make_unique<corpus::DecisionTableFilter>(a.filter_decisions);
    table = t.get();
    filter = std::move(t);
  }

  const auto records = corpus::build_ground_truth(index, specs, {a.cap, default_workers()}, filter.get());
  std::vector<json> kept;
  std::vector<json> dropped;
  for (const auto& r : records) (r.discarded ? dropped : kept).push_back(io::to_json(r));
  io::write_text_file(a.out, io::to_jsonl(kept));
  io::write_text_file(discard_path, io::to_jsonl(dropped));

  if (table && table->missing() > 0) {
    err << "warning: " << table->missing() << " retrieved chunks had no pre-computed decision and were rejected\n";
  }
  out << "indexed " << index.chunks().size() << " chunks from " << docs.size() << " documents; kept " << kept.size()
      << " of " << records.size() << " questions (" << dropped.size() << " discarded, see " << discard_path << ")\n";
  return kOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string ground_truth;
  std::string predictions;
  std::string out;
  std::string metrics_out;
  std::string ablation_out;
  std::string equivalence;
  double epsilon = estimators::kDefaultEpsilon;
  std::optional<double> dirichlet_gamma;
  std::vector<double> gamma_grid;
  std::vector<double> deltas;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  check_epsilon(a.epsilon);
  const auto deltas = checked_deltas(a.deltas);
  EvalOptions options;
  options.epsilon = a.epsilon;
  options.dirichlet_gamma = a.dirichlet_gamma;
  options.eq = load_equivalence(a.equivalence);
  if (a.dirichlet_gamma && !(*a.dirichlet_gamma >= 1.0)) throw ValidationError("--dirichlet-gamma must be >= 1");

  std::vector<io::LineError> errors;
  auto gts = io::read_jsonl<corpus::GroundTruthRecord>(a.ground_truth, io::ground_truth_from_json, errors);
  report_line_errors("ground truth", errors, err);
  errors.clear();
  auto preds = io::read_jsonl<estimators::PredictionInput>(a.predictions, io::prediction_from_json, errors);
  report_line_errors("predictions", errors, err);

  std::map<std::string, const corpus::GroundTruthRecord*> by_id;
  for (const auto& g : gts) {
    if (g.discarded) continue;
    if (!by_id.emplace(g.question_id, &g).second) {
      err << "warning: duplicate ground truth for '" << g.question_id << "'; keeping the first\n";
    }
  }

  const auto registry = estimators::EstimatorRegistry::with_defaults();
  std::vector<std::optional<QuestionEvaluation>> results(preds.size());
  std::vector<std::string> problems(preds.size());
  parallel_blocks(preds.size(), default_workers(), [&](std::size_t i) {
    auto it = by_id.find(preds[i].samples.question_id);
    if (it == by_id.end()) {
      problems[i] = "no ground truth";
      return;
    }
    try {
      results[i] = evaluate_question(*it->second, preds[i], registry, options);
    } catch (const Error& e) {
      problems[i] = e.what();
    }
  });

  std::vector<json> rows;
  std::vector<metrics::EvalRecord> records;
  std::vector<simlab::CountRecord> count_records;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (!results[i]) {
      err << "skipped question '" << preds[i].samples.question_id << "': " << problems[i] << '\n';
      continue;
    }
    const auto& ev = *results[i];
    for (const auto& n : ev.notices) err << "notice: question '" << ev.record.question_id << "': " << n << '\n';
    json row = io::to_json(ev.record);
    row["aleatoric"] = ev.point.aleatoric;
    row["total"] = ev.point.total;
    row["point_epistemic"] = ev.point.epistemic;
    row["notices"] = ev.notices;
    rows.push_back(std::move(row));
    records.push_back(ev.record);
    if (!ev.aligned_counts.empty()) {
      count_records.push_back({ev.record.question_id, ev.aligned_counts, ev.aligned_p, ev.record.scores});
    }
  }
  if (records.empty()) throw ValidationError("eval: no question could be evaluated");
  if (!a.out.empty()) io::write_text_file(a.out, io::to_jsonl(rows));

  std::vector<std::string> names;
  for (const auto& [name, fn] : registry.entries()) names.push_back(name);

  std::vector<std::string> warnings;
  const auto csv = metrics_csv(records, names, deltas, warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  if (a.metrics_out.empty()) {
    out << csv;
  } else {
    io::write_text_file(a.metrics_out, csv);
  }

  if (!a.ablation_out.empty()) {
    if (count_records.size() != records.size()) {
      throw ValidationError("eval: the gamma ablation needs ground-truth counts for every question");
    }
    const auto grid = a.gamma_grid.empty() ? simlab::table5_gammas() : a.gamma_grid;
    std::ostringstream csv;
    csv << "gamma,estimator,concordance\n";
    for (const auto& row : simlab::gamma_ablation(count_records, grid)) {
      csv << (row.gamma ? io::format_double(*row.gamma) : std::string("point")) << ',' << row.estimator << ','
          << io::format_double(row.concordance) << '\n';
    }
    io::write_text_file(a.ablation_out, csv.str());
  }
  out << "evaluated " << records.size() << " of " << preds.size() << " questions\n";
  return kOk;
}

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
  int k = 0;
  double delta = 0.0;
  std::optional<double> avg_loss;
  std::optional<double> p_low_entropy;
  int line_points = 21;
  std::string out;
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
  json report{{"k", a.k}, {"delta", a.delta}};
  const bounds::BoundQuery q{a.k, a.delta};
  report["alpha_delta"] = bounds::alpha_delta(q);
  report["eu_lower_bound"] = bounds::eu_lower_bound_high_entropy(q);
  const bool binary_range = a.delta <= std::log(2.0);
  report["gamma_delta"] = binary_range ? json(bounds::gamma_delta(a.delta)) : json(nullptr);
  report["eu_cap"] = binary_range ? json(-std::log(bounds::gamma_delta(a.delta))) : json(nullptr);

  if (a.avg_loss.has_value() != a.p_low_entropy.has_value()) {
    throw ValidationError("--avg-loss and --p-low-entropy must be given together");
  }
  if (a.avg_loss) {
    const auto b = bounds::thm2_probability_bound(a.delta, *a.avg_loss, *a.p_low_entropy);
    const auto sharp = bounds::thm2_sharp_probability_bound(a.k, a.delta, *a.avg_loss, *a.p_low_entropy);
    report["thm2"] = {{"avg_loss", *a.avg_loss},
                      {"p_low_entropy", *a.p_low_entropy},
                      {"gamma_delta", b.gamma_delta},
                      {"eu_cap", b.eu_cap},
                      {"prob_lower_bound", b.prob_lower_bound},
                      {"sharp_prob_lower_bound", sharp.prob_lower_bound}};
  }

  if (a.line_points < 2) throw ValidationError("--line-points must be >= 2");
  json line = json::array();
  const double max_entropy = std::log(static_cast<double>(a.k));
  for (int i = 0; i < a.line_points; ++i) {
    const double d = max_entropy * i / (a.line_points - 1);
    line.push_back({{"delta", d}, {"eu_lower_bound", bounds::eu_lower_bound_high_entropy({a.k, d})}});
  }
  report["bound_line"] = std::move(line);

  const std::string text = report.dump(2) + "\n";
  if (a.out.empty()) {
    out << text;
  } else {
    io::write_text_file(a.out, text);
  }
  return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config;
  std::string out;
  std::string report;
  std::string scatter_csv;
  std::string histogram_csv;
  std::string histogram_field = "entropy_p";
  std::size_t bins = metrics::kDefaultBins;
  std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  simlab::SimConfig config;
  if (!a.config.empty()) config = io::sim_config_from_json(io::read_json_file(a.config));
  if (a.seed) config.seed = *a.seed;
  config.workers = default_workers();
  const auto result = simlab::run_experiment(config);

  if (!a.out.empty()) {
    std::vector<json> rows;
    rows.reserve(result.records.size());
    const auto evals = result.eval_records();
    for (std::size_t i = 0; i < evals.size(); ++i) {
      json row = io::to_json(evals[i]);
      row["aleatoric"] = result.records[i].aleatoric;
      row["entropy_p"] = result.records[i].entropy_p;
      row["p_star"] = result.records[i].p_star;
      row["p"] = result.records[i].p;
      rows.push_back(std::move(row));
    }
    io::write_text_file(a.out, io::to_jsonl(rows));
  }
  const std::string report = io::to_json(result.report).dump(2) + "\n";
  if (a.report.empty()) {
    out << report;
  } else {
    io::write_text_file(a.report, report);
  }

  if (!a.scatter_csv.empty()) {
    std::ostringstream csv;
    csv << "entropy_p,true_eu,aleatoric" << (config.ensemble ? ",mutual_information" : "") << '\n';
    for (const auto& r : result.records) {
      csv << io::format_double(r.entropy_p) << ',' << io::format_double(r.true_eu) << ','
          << io::format_double(r.aleatoric);
      if (r.mutual_information) csv << ',' << io::format_double(*r.mutual_information);
      csv << '\n';
    }
    io::write_text_file(a.scatter_csv, csv.str());
  }
  if (!a.histogram_csv.empty()) {
    std::vector<double> values;
    for (const auto& r : result.records) {
      if (a.histogram_field == "entropy_p") {
        values.push_back(r.entropy_p);
      } else if (a.histogram_field == "true_eu") {
        values.push_back(r.true_eu);
      } else if (a.histogram_field == "aleatoric") {
        values.push_back(r.aleatoric);
      } else {
        throw ValidationError("--histogram-field must be entropy_p, true_eu or aleatoric");
      }
    }
    io::write_text_file(a.histogram_csv, histogram_csv(metrics::summarize(values, a.bins).histogram));
  }
  if (!result.report.ok) err << "warning: a theorem check failed; see the report\n";
  return kOk;
}

// ---------------------------------------------------------------- metrics

struct MetricsArgs {
  std::string records;
  std::string out;
  std::vector<double> deltas;
  std::vector<std::string> estimators;
  std::string histogram_out;
  std::string histogram_field = "true_eu";
  std::string summary_out;
  std::size_t bins = metrics::kDefaultBins;
};

int cmd_metrics(const MetricsArgs& a, std::ostream& out, std::ostream& err) {
  const auto deltas = checked_deltas(a.deltas);
  std::vector<io::LineError> errors;
  auto records = io::read_jsonl<metrics::EvalRecord>(a.records, io::eval_record_from_json, errors);
  report_line_errors("records", errors, err);
  if (records.empty()) throw DegenerateInputError("metrics: no records");

  auto names = a.estimators;
  if (names.empty()) {
    for (const auto& r : records) {
      for (const auto& [name, v] : r.scores) {
        if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
      }
    }
    std::sort(names.begin(), names.end());
  }
  std::vector<std::string> warnings;
  const auto csv = metrics_csv(records, names, deltas, warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  if (a.out.empty()) {
    out << csv;
  } else {
    io::write_text_file(a.out, csv);
  }

  if (!a.histogram_out.empty() || !a.summary_out.empty()) {
    std::vector<double> values;
    for (const auto& r : records) {
      if (a.histogram_field == "true_eu") {
        values.push_back(r.true_eu);
      } else if (auto it = r.scores.find(a.histogram_field); it != r.scores.end()) {
        values.push_back(it->second);
      }
    }
    const auto s = metrics::summarize(values, a.bins);
    if (!a.histogram_out.empty()) io::write_text_file(a.histogram_out, histogram_csv(s.histogram));
    if (!a.summary_out.empty()) {
      json j{{"field", a.histogram_field}, {"n", values.size()}, {"mean", s.mean}, {"std", s.std}};
      io::write_text_file(a.summary_out, j.dump(2) + "\n");
    }
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Aleatoric/epistemic uncertainty toolkit for ambiguous question answering", "auq"};
  app.require_subcommand(1);

  BuildGtArgs gt;
  auto* build = app.add_subcommand("build-gt", "Build ground-truth answer distributions from a corpus");
  build->add_option("--corpus", gt.corpus, "Corpus JSONL: {doc_id, sections}")->required();
  build->add_option("--specs", gt.specs, "Question specs JSONL: {question_id, question, keywords, answers}")->required();
  build->add_option("--out", gt.out, "Output dataset JSONL")->required();
  build->add_option("--discard-log", gt.discard_log, "Discarded records JSONL (default <out>.discarded.jsonl)");
  build->add_option("--cap", gt.cap, "Maximum retrieved chunks per answer")->capture_default_str();
  build->add_option("--filter-cmd", gt.filter_cmd, "Entailment command (JSONL queries on stdin, decisions on stdout)");
  build->add_option("--filter-decisions", gt.filter_decisions, "Pre-computed entailment decisions JSONL");
  build->add_option("--max-chunk-chars", gt.max_chunk_chars, "Split units longer than this")->capture_default_str();

  EvalArgs ev;
  double dirichlet_gamma = 0.0;
  auto* eval = app.add_subcommand("eval", "Score estimators against ground-truth epistemic uncertainty");
  eval->add_option("--ground-truth", ev.ground_truth, "Ground-truth JSONL")->required();
  eval->add_option("--predictions", ev.predictions, "Predictions JSONL")->required();
  eval->add_option("--out", ev.out, "Per-question records JSONL");
  eval->add_option("--metrics", ev.metrics_out, "Metrics CSV");
  eval->add_option("--epsilon", ev.epsilon, "Imputed model mass for unseen classes")->capture_default_str();
  auto* gamma_opt = eval->add_option("--dirichlet-gamma", dirichlet_gamma, "Use E[KL] under Dir(1 + gamma * counts)");
  eval->add_option("--gamma-grid", ev.gamma_grid, "Gamma values for the ablation (default 1,2,5,10,100)")
      ->delimiter(',');
  eval->add_option("--ablation-out", ev.ablation_out, "Gamma ablation CSV: gamma,estimator,concordance");
  eval->add_option("--deltas", ev.deltas, "AUCROC thresholds in nats (default ln1.5,ln2,ln3)")->delimiter(',');
  eval->add_option("--equivalence", ev.equivalence, "JSON object mapping answer aliases to canonical classes");

  BoundsArgs bd;
  double avg_loss = 0.0;
  double p_low = 0.0;
  auto* bnd = app.add_subcommand("bounds", "Report entropy-based bounds on epistemic uncertainty");
  bnd->add_option("--k", bd.k, "Number of classes")->required();
  bnd->add_option("--delta", bd.delta, "Entropy threshold in nats")->required();
  auto* loss_opt = bnd->add_option("--avg-loss", avg_loss, "Average negative log-likelihood of the correct class");
  auto* plow_opt = bnd->add_option("--p-low-entropy", p_low, "Fraction of predictions with H(p) <= delta");
  bnd->add_option("--line-points", bd.line_points, "Samples of the lower-bound line over [0, ln k]")
      ->capture_default_str();
  bnd->add_option("--out", bd.out, "Write the JSON report here instead of stdout");

  SimulateArgs sm;
  std::uint64_t seed = 0;
  auto* sim = app.add_subcommand("simulate", "Run a simplex Monte Carlo experiment");
  sim->add_option("--config", sm.config, "Simulation config JSON");
  sim->add_option("--out", sm.out, "Records JSONL");
  sim->add_option("--report", sm.report, "Verification report JSON (default stdout)");
  sim->add_option("--scatter-csv", sm.scatter_csv, "entropy_p,true_eu,aleatoric scatter data");
  sim->add_option("--histogram-csv", sm.histogram_csv, "Histogram CSV of --histogram-field");
  sim->add_option("--histogram-field", sm.histogram_field, "entropy_p, true_eu or aleatoric")->capture_default_str();
  sim->add_option("--bins", sm.bins, "Histogram bins")->capture_default_str();
  auto* seed_opt = sim->add_option("--seed", seed, "Overrides the config seed");

  MetricsArgs mt;
  auto* met = app.add_subcommand("metrics", "Concordance, AUCROC and summaries over evaluation records");
  met->add_option("--records", mt.records, "EvalRecord JSONL")->required();
  met->add_option("--out", mt.out, "Metrics CSV (default stdout)");
  met->add_option("--deltas", mt.deltas, "AUCROC thresholds in nats")->delimiter(',');
  met->add_option("--estimators", mt.estimators, "Estimators to report (default: all present)")->delimiter(',');
  met->add_option("--histogram-out", mt.histogram_out, "Histogram CSV: bin_left,bin_right,count");
  met->add_option("--histogram-field", mt.histogram_field, "true_eu or an estimator name")->capture_default_str();
  met->add_option("--summary-out", mt.summary_out, "Mean/std JSON of --histogram-field");
  met->add_option("--bins", mt.bins, "Histogram bins")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*build) return cmd_build_gt(gt, out, err);
    if (*eval) {
      if (*gamma_opt) ev.dirichlet_gamma = dirichlet_gamma;
      return cmd_eval(ev, out, err);
    }
    if (*bnd) {
      if (*loss_opt) bd.avg_loss = avg_loss;
      if (*plow_opt) bd.p_low_entropy = p_low;
      return cmd_bounds(bd, out);
    }
    if (*sim) {
      if (*seed_opt) sm.seed = seed;
      return cmd_simulate(sm, out, err);
    }
    if (*met) return cmd_metrics(mt, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kValidation;
}

}  // namespace auq::cli
