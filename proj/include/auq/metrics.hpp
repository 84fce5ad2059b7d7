#pragma once

// Ranking metrics between true epistemic uncertainty and estimator scores.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace auq::metrics {

struct EvalRecord {
  std::string question_id;
  double true_eu = 0.0;
  std::map<std::string, double> scores;
};

/// Exact pair tallies. Credits are counted in half units so that the
/// resulting ratio is reproducible bit-for-bit by any pair enumeration.
struct PairTally {
  std::uint64_t half_credits = 0;  // 2 * concordant + tied-score pairs
  std::uint64_t pairs = 0;         // comparable pairs
  double value() const { return static_cast<double>(half_credits) / (2.0 * static_cast<double>(pairs)); }
};

/// Concordance AUC_c: over pairs with distinct true EU, the fraction ranked in
/// the same order by the estimator; tied scores earn half credit, tied EU pairs
/// are skipped. Records without the estimator are ignored.
/// O(n log n). Throws DegenerateInputError when no pair is comparable.
PairTally concordance_tally(const std::vector<EvalRecord>& records, const std::string& estimator);
double concordance(const std::vector<EvalRecord>& records, const std::string& estimator);

/// Mann-Whitney AUC separating true_eu >= delta (positive) from true_eu < delta.
/// Throws DegenerateInputError naming delta when either class is empty.
PairTally aucroc_tally(const std::vector<EvalRecord>& records, const std::string& estimator, double delta);
double aucroc(const std::vector<EvalRecord>& records, const std::string& estimator, double delta);

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges
  std::vector<std::size_t> counts;
};

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  Histogram histogram;
};

inline constexpr std::size_t kDefaultBins = 30;

/// Mean, population std and an equal-width histogram spanning [min, max]
/// (last bin closed). Throws DegenerateInputError when values is empty.
Summary summarize(const std::vector<double>& values, std::size_t bins = kDefaultBins);

/// Thresholds used for AUCROC reporting: ln 1.5, ln 2, ln 3.
std::vector<double> default_deltas();

}  // namespace auq::metrics
