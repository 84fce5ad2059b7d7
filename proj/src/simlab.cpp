#include "auq/simlab.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>

#include "auq/bounds.hpp"
#include "auq/categorical.hpp"
#include "auq/dirichlet.hpp"
#include "auq/error.hpp"

namespace auq::simlab {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::zero_au: return "zero-AU";
    case Regime::free_au: return "free-AU";
    case Regime::high_au: return "high-AU";
  }
  return "unknown";
}

Regime parse_regime(const std::string& s) {
  std::string key;
  for (unsigned char c : s) key.push_back(c == '_' ? '-' : static_cast<char>(std::tolower(c)));
  if (key == "zero-au") return Regime::zero_au;
  if (key == "free-au") return Regime::free_au;
  if (key == "high-au") return Regime::high_au;
  throw ValidationError("unknown regime '" + s + "' (expected zero-AU, free-AU or high-AU)");
}

void validate(const SimConfig& c) {
  if (c.k < 2) throw ValidationError("simulate: k must be >= 2");
  if (c.n < 1) throw ValidationError("simulate: n must be >= 1");
  if (!(c.noise > 0.0) || !std::isfinite(c.noise)) throw ValidationError("simulate: noise must be positive");
  if (c.ensemble && c.ensemble_size < 2) throw ValidationError("simulate: ensemble_size must be >= 2");
  const double max_entropy = std::log(static_cast<double>(c.k));
  for (double d : c.deltas) {
    if (!(d >= 0.0 && d <= max_entropy + 1e-12)) {
      throw ValidationError("simulate: delta " + std::to_string(d) + " outside [0, ln k]");
    }
  }
}

std::vector<double> sample_truth(const SimConfig& config, Rng& rng) {
  const auto k = static_cast<std::size_t>(config.k);
  std::vector<double> p(k, 0.0);
  switch (config.regime) {
    case Regime::zero_au: {
      std::uniform_int_distribution<std::size_t> pick(0, k - 1);
      p[pick(rng)] = 1.0;
      return p;
    }
    case Regime::free_au: {
      const std::vector<double> ones(k, 1.0);
      sample_dirichlet(ones, rng, p);
      return p;
    }
    case Regime::high_au: {
      const std::vector<double> ones(k, 1.0);
      const double threshold = std::log(static_cast<double>(k)) - kHighAuMargin;
      for (std::uint64_t attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
        sample_dirichlet(ones, rng, p);
        if (kernel::entropy(p) >= threshold) return p;
      }
      throw ValidationError("simulate: high-AU rejection sampling failed after " +
                            std::to_string(kMaxRejectionAttempts) + " attempts for k=" + std::to_string(k));
    }
  }
  return p;
}

std::vector<double> sample_model(std::span<const double> p_star, double noise, Rng& rng) {
  if (!(noise > 0.0)) throw ValidationError("sample_model: noise must be positive");
  std::vector<double> alpha(p_star.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] = noise * p_star[i] + kConcentrationFloor;
  std::vector<double> p(alpha.size());
  // Gamma draws with shape 0.1 can underflow to exactly zero.
  do {
    sample_dirichlet(alpha, rng, p);
  } while (std::any_of(p.begin(), p.end(), [](double v) { return v <= 0.0; }));
  return p;
}

std::vector<metrics::EvalRecord> SimResult::eval_records() const {
  std::vector<metrics::EvalRecord> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    metrics::EvalRecord e{"sim-" + std::to_string(i), r.true_eu, {{"semantic_entropy", r.entropy_p}}};
    if (r.mutual_information) e.scores["mutual_information"] = *r.mutual_information;
    out.push_back(std::move(e));
  }
  return out;
}

Thm1Check check_thm1(const std::vector<SimRecord>& records, int k, double delta, bool zero_au) {
  Thm1Check c;
  c.delta = delta;
  c.applicable = zero_au && delta <= std::log(static_cast<double>(k)) + 1e-12;
  if (!c.applicable) return c;
  c.eu_lower_bound = bounds::eu_lower_bound_high_entropy({k, delta});
  for (const auto& r : records) {
    if (r.entropy_p < delta) continue;
    ++c.checked;
    const double margin = r.true_eu - c.eu_lower_bound;
    if (!c.min_margin || margin < *c.min_margin) c.min_margin = margin;
    if (margin < -1e-9) ++c.violations;
  }
  return c;
}

Thm2Check check_thm2(const std::vector<SimRecord>& records, int k, double delta, bool zero_au) {
  Thm2Check c;
  c.delta = delta;
  if (!zero_au || !(delta > 0.0) || delta > std::log(2.0) + 1e-12 || records.empty()) return c;

  double loss = 0.0;
  std::size_t low = 0;
  for (const auto& r : records) {
    loss += r.true_eu;
    if (r.entropy_p <= delta) ++low;
  }
  if (low == 0) return c;
  const double n = static_cast<double>(records.size());
  c.avg_loss = loss / n;
  c.p_low_entropy = static_cast<double>(low) / n;

  const auto bound = bounds::thm2_probability_bound(delta, c.avg_loss, c.p_low_entropy);
  c.applicable = true;
  c.gamma_delta = bound.gamma_delta;
  c.eu_cap = bound.eu_cap;
  c.prob_lower_bound = bound.prob_lower_bound;
  c.sharp_prob_lower_bound = bounds::thm2_sharp_probability_bound(k, delta, c.avg_loss, c.p_low_entropy).prob_lower_bound;

  std::size_t small_eu = 0;
  for (const auto& r : records) {
    if (r.entropy_p <= delta && r.true_eu <= c.eu_cap) ++small_eu;
  }
  c.observed = static_cast<double>(small_eu) / static_cast<double>(low);
  c.holds = c.observed + 1e-12 >= c.prob_lower_bound;
  c.sharp_holds = c.observed + 1e-12 >= c.sharp_prob_lower_bound;
  return c;
}

double max_eu_spread(const std::vector<SimRecord>& records, double cell) {
  if (!(cell > 0.0)) throw ValidationError("max_eu_spread: cell must be positive");
  std::map<std::vector<long>, std::pair<double, double>> ranges;
  std::vector<long> key;
  for (const auto& r : records) {
    key.assign(r.p.size() > 1 ? r.p.size() - 1 : 1, 0);
    for (std::size_t i = 0; i + 1 < r.p.size(); ++i) key[i] = static_cast<long>(std::floor(r.p[i] / cell));
    auto [it, inserted] = ranges.try_emplace(key, r.true_eu, r.true_eu);
    if (!inserted) {
      it->second.first = std::min(it->second.first, r.true_eu);
      it->second.second = std::max(it->second.second, r.true_eu);
    }
  }
  double spread = 0.0;
  for (const auto& [k, range] : ranges) spread = std::max(spread, range.second - range.first);
  return spread;
}

SimResult run_experiment(const SimConfig& config) {
  validate(config);
  SimResult result;
  result.records.resize(config.n);
  const std::size_t n_blocks = (config.n + kBlockSize - 1) / kBlockSize;
  const std::size_t workers = config.workers == 0 ? default_workers() : config.workers;

  parallel_blocks(n_blocks, workers, [&](std::size_t block) {
    Rng rng = block_rng(config.seed, block);
    const std::size_t end = std::min(config.n, (block + 1) * kBlockSize);
    for (std::size_t i = block * kBlockSize; i < end; ++i) {
      auto& rec = result.records[i];
      rec.p_star = sample_truth(config, rng);
      if (config.ensemble) {
        std::vector<std::vector<double>> members;
        rec.p.assign(rec.p_star.size(), 0.0);
        for (std::size_t m = 0; m < config.ensemble_size; ++m) {
          members.push_back(sample_model(rec.p_star, config.noise, rng));
          for (std::size_t j = 0; j < rec.p.size(); ++j) rec.p[j] += members.back()[j];
        }
        for (double& v : rec.p) v /= static_cast<double>(config.ensemble_size);
        double mi = 0.0;
        for (const auto& m : members) mi += kernel::kl(m, rec.p);
        rec.mutual_information = mi / static_cast<double>(config.ensemble_size);
      } else {
        rec.p = sample_model(rec.p_star, config.noise, rng);
      }
      rec.aleatoric = kernel::entropy(rec.p_star);
      rec.true_eu = kernel::kl(rec.p_star, rec.p);
      rec.entropy_p = kernel::entropy(rec.p);
    }
  });

  auto& report = result.report;
  report.config = config;
  const auto evals = result.eval_records();
  std::vector<std::string> estimators = {"semantic_entropy"};
  if (config.ensemble) estimators.push_back("mutual_information");
  for (const auto& est : estimators) {
    try {
      report.concordance.emplace_back(est, metrics::concordance(evals, est));
    } catch (const DegenerateInputError&) {
      // Every record has identical EU (e.g. n = 1); nothing to rank.
    }
    for (double d : metrics::default_deltas()) {
      AucEntry entry{est, d, std::nullopt};
      try {
        entry.value = metrics::aucroc(evals, est, d);
      } catch (const DegenerateInputError&) {
      }
      report.aucroc.push_back(entry);
    }
  }
  const bool zero_au = config.regime == Regime::zero_au;
  for (double d : config.deltas) {
    report.thm1.push_back(check_thm1(result.records, config.k, d, zero_au));
    report.thm2.push_back(check_thm2(result.records, config.k, d, zero_au));
    if (report.thm1.back().violations > 0 || !report.thm2.back().holds) report.ok = false;
  }
  report.max_eu_spread_same_cell = max_eu_spread(result.records);
  return result;
}

std::vector<AblationRow> gamma_ablation(const std::vector<CountRecord>& records, const std::vector<double>& gammas,
                                        bool include_point) {
  std::vector<std::string> estimators;
  for (const auto& r : records) {
    for (const auto& [name, v] : r.scores) {
      if (std::find(estimators.begin(), estimators.end(), name) == estimators.end()) estimators.push_back(name);
    }
  }
  std::sort(estimators.begin(), estimators.end());

  auto rows_for = [&](std::optional<double> gamma, std::vector<AblationRow>& rows) {
    std::vector<metrics::EvalRecord> evals;
    evals.reserve(records.size());
    for (const auto& r : records) {
      double truth = 0.0;
      if (gamma) {
        truth = dirichlet::expected_epistemic(dirichlet::posterior(r.counts, *gamma), r.p);
      } else {
        const auto p_star = normalize(r.counts);
        truth = kernel::kl(p_star.probs(), r.p);
      }
      evals.push_back({r.question_id, truth, r.scores});
    }
    for (const auto& est : estimators) rows.push_back({gamma, est, metrics::concordance(evals, est)});
  };

  std::vector<AblationRow> rows;
  for (double g : gammas) rows_for(g, rows);
  if (include_point) rows_for(std::nullopt, rows);
  return rows;
}

std::vector<CountRecord> synthesize_count_records(const SimConfig& config, int min_total, int max_total) {
  validate(config);
  if (min_total < 1 || max_total < min_total) throw ValidationError("synthesize: invalid count totals");
  std::vector<CountRecord> out(config.n);
  const std::size_t n_blocks = (config.n + kBlockSize - 1) / kBlockSize;
  const std::size_t workers = config.workers == 0 ? default_workers() : config.workers;
  parallel_blocks(n_blocks, workers, [&](std::size_t block) {
    Rng rng = block_rng(config.seed ^ 0x9e3779b97f4a7c15ULL, block);
    const std::size_t end = std::min(config.n, (block + 1) * kBlockSize);
    for (std::size_t i = block * kBlockSize; i < end; ++i) {
      auto& rec = out[i];
      rec.question_id = "syn-" + std::to_string(i);
      const auto p_star = sample_truth(config, rng);
      std::uniform_int_distribution<int> total_dist(min_total, max_total);
      int remaining = total_dist(rng);
      double mass_left = 1.0;
      rec.counts.assign(p_star.size(), 0.0);
      for (std::size_t j = 0; j < p_star.size(); ++j) {
        if (j + 1 == p_star.size() || mass_left <= 0.0) {
          rec.counts[j] = remaining;
          break;
        }
        const double q = std::clamp(p_star[j] / mass_left, 0.0, 1.0);
        std::binomial_distribution<int> binom(remaining, q);
        const int c = binom(rng);
        rec.counts[j] = c;
        remaining -= c;
        mass_left -= p_star[j];
      }
      rec.p = sample_model(p_star, config.noise, rng);
      rec.scores["semantic_entropy"] = kernel::entropy(rec.p);
    }
  });
  return out;
}

std::vector<double> table5_gammas() { return {1.0, 2.0, 5.0, 10.0, 100.0}; }

}  // namespace auq::simlab
