#pragma once

// Monte Carlo populations of (ground truth, prediction) pairs on the simplex,
// used to check the entropy bounds empirically and to contrast the zero-AU
// and ambiguous regimes.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "auq/metrics.hpp"
#include "auq/random.hpp"

namespace auq::simlab {

enum class Regime { zero_au, free_au, high_au };

std::string to_string(Regime r);
/// Accepts "zero-AU"/"zero_au", "free-AU"/"free_au", "high-AU"/"high_au" (case-insensitive).
Regime parse_regime(const std::string& s);

inline constexpr double kConcentrationFloor = 0.1;
inline constexpr std::uint64_t kMaxRejectionAttempts = 1'000'000;
inline constexpr double kHighAuMargin = 0.1;

struct SimConfig {
  int k = 3;
  std::size_t n = 10'000;
  std::uint64_t seed = 0;
  Regime regime = Regime::zero_au;
  double noise = 10.0;  // Dirichlet concentration around p*; larger = closer
  std::vector<double> deltas = {0.25, 0.5, 0.6931471805599453, 1.0};
  bool ensemble = false;          // synthesize ensembles and score MI
  std::size_t ensemble_size = 3;  // members per ensemble when enabled
  std::size_t workers = 0;        // 0 = default_workers()
};

/// Throws ValidationError for k < 2, n < 1, noise <= 0, negative deltas, or
/// deltas above ln k.
void validate(const SimConfig& config);

/// zero-AU: uniform vertex; free-AU: Dir(1); high-AU: Dir(1) rejected until
/// H >= ln k - 0.1 (ValidationError after 10^6 failed attempts).
std::vector<double> sample_truth(const SimConfig& config, Rng& rng);

/// Dir(noise * p_star + 0.1); redrawn until strictly positive.
std::vector<double> sample_model(std::span<const double> p_star, double noise, Rng& rng);

struct SimRecord {
  std::vector<double> p_star;
  std::vector<double> p;  // prediction (ensemble mean when ensembles are enabled)
  double aleatoric = 0.0;
  double true_eu = 0.0;
  double entropy_p = 0.0;
  std::optional<double> mutual_information;
};

struct Thm1Check {
  double delta = 0.0;
  bool applicable = false;  // zero-AU regime and delta <= ln k
  double eu_lower_bound = 0.0;
  std::size_t checked = 0;  // records with H(p) >= delta
  std::size_t violations = 0;
  std::optional<double> min_margin;  // min(EU - bound) over checked records
};

struct Thm2Check {
  double delta = 0.0;
  bool applicable = false;  // zero-AU, 0 < delta <= ln 2, some low-entropy record
  double gamma_delta = 0.0;
  double eu_cap = 0.0;
  double avg_loss = 0.0;       // mean EU over the population
  double p_low_entropy = 0.0;  // fraction with H(p) <= delta
  double prob_lower_bound = 0.0;
  double sharp_prob_lower_bound = 0.0;
  double observed = 0.0;  // fraction of low-entropy records with EU <= eu_cap
  bool holds = true;
  bool sharp_holds = true;
};

struct AucEntry {
  std::string estimator;
  double delta = 0.0;
  std::optional<double> value;  // empty when one class is missing
};

struct SimReport {
  SimConfig config;
  std::vector<std::pair<std::string, double>> concordance;
  std::vector<AucEntry> aucroc;
  std::vector<Thm1Check> thm1;
  std::vector<Thm2Check> thm2;
  double max_eu_spread_same_cell = 0.0;  // see max_eu_spread()
  bool ok = true;                        // no theorem check failed
};

struct SimResult {
  std::vector<SimRecord> records;
  SimReport report;
  std::vector<metrics::EvalRecord> eval_records() const;
};

/// Deterministic for a given config regardless of worker count.
SimResult run_experiment(const SimConfig& config);

/// Largest difference in true EU between records whose predictions fall into
/// the same cell of a grid with spacing `cell` on the first k-1 coordinates.
double max_eu_spread(const std::vector<SimRecord>& records, double cell = 0.05);

Thm1Check check_thm1(const std::vector<SimRecord>& records, int k, double delta, bool zero_au);
Thm2Check check_thm2(const std::vector<SimRecord>& records, int k, double delta, bool zero_au);

// Dirichlet-posterior ablation over the count-based ground truth.

struct CountRecord {
  std::string question_id;
  std::vector<double> counts;  // ground-truth counts per class
  std::vector<double> p;       // strictly positive prediction on the same classes
  std::map<std::string, double> scores;
};

struct AblationRow {
  std::optional<double> gamma;  // empty = point estimate KL(normalize(counts) || p)
  std::string estimator;
  double concordance = 0.0;
};

/// One row per (gamma, estimator) in the given gamma order followed by the
/// point-estimate rows. Truth per gamma is expected_epistemic(posterior(counts, gamma), p).
std::vector<AblationRow> gamma_ablation(const std::vector<CountRecord>& records, const std::vector<double>& gammas,
                                        bool include_point = true);

/// Draws p* from the regime, counts ~ Multinomial(N, p*) with N uniform in
/// [min_total, max_total], and p = sample_model(p*). Scores semantic entropy.
std::vector<CountRecord> synthesize_count_records(const SimConfig& config, int min_total, int max_total);

std::vector<double> table5_gammas();

}  // namespace auq::simlab
