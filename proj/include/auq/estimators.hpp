#pragma once

// Semantic predictive distributions built from sampled answers, support
// alignment against a ground truth, and the prediction-based estimators.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "auq/categorical.hpp"

namespace auq::estimators {

inline constexpr double kDefaultEpsilon = 0.01;

struct AnswerSample {
  std::string text;
  double seq_prob = 0.0;               // in (0, 1]
  std::optional<std::string> cluster;  // falls back to text when absent
};

struct AnswerSampleSet {
  std::string question_id;
  std::vector<AnswerSample> samples;
  std::optional<double> best_answer_prob;  // beam-search maximum, for MSP
};

/// Maps answer strings onto canonical class identifiers.
///
/// Every string is first normalized (case-folded, punctuation dropped,
/// whitespace collapsed). Explicit aliases are then applied; alias chains are
/// resolved at construction so canonical() is idempotent.
class EquivalenceMap {
 public:
  EquivalenceMap() = default;
  /// Throws ValidationError on alias cycles.
  explicit EquivalenceMap(const std::map<std::string, std::string>& aliases);

  std::string canonical(std::string_view s) const;

  /// Case-folding plus punctuation/whitespace normalization only.
  static std::string normalize_text(std::string_view s);

 private:
  std::map<std::string, std::string, std::less<>> aliases_;
};

/// p(y) proportional to the summed sequence probability of samples in class y.
/// Classes are ordered lexicographically by canonical id.
Categorical cluster(const AnswerSampleSet& set, const EquivalenceMap& eq);

struct Aligned {
  Categorical p_star;
  Categorical p_model;
};

/// Joint support in order: ground-truth classes first, then model-only classes.
/// Missing ground-truth mass is 0; zero model mass is imputed with epsilon and
/// the model side is renormalized.
Aligned align(const Categorical& p_star, const Categorical& p_model, const EquivalenceMap& eq,
              double epsilon = kDefaultEpsilon);

/// Brings members onto one support (first-seen order), imputing epsilon for
/// missing classes and renormalizing each member.
std::vector<Categorical> align_ensemble(const std::vector<Categorical>& members, const EquivalenceMap& eq,
                                        double epsilon = kDefaultEpsilon);

double semantic_entropy(const Categorical& p);

/// 1 - max_a p(a|x). Throws UnavailableError when the beam-search probability
/// is missing, DomainError when it lies outside (0, 1].
double msp(std::optional<double> best_answer_prob);

struct EnsemblePrediction {
  std::vector<Categorical> members;
};

/// (1/M) sum_m KL(p_m || mean).
double mutual_information(const EnsemblePrediction& e);
/// H(mean) - (1/M) sum_m H(p_m); same quantity by a second route.
double mutual_information_entropy_form(const EnsemblePrediction& e);
Categorical ensemble_mean(const EnsemblePrediction& e);

/// Everything an estimator may look at for one question.
struct PredictionInput {
  AnswerSampleSet samples;
  std::vector<Categorical> ensemble;  // raw members, unaligned; empty when absent
};

struct EstimatorContext {
  const PredictionInput& input;
  const Categorical& clustered;  // cluster(input.samples, eq)
  const EquivalenceMap& eq;
  double epsilon = kDefaultEpsilon;
};

/// An estimator returns a score (higher means more uncertain) or throws
/// UnavailableError when its optional input is missing.
using EstimatorFn = std::function<double(const EstimatorContext&)>;

class EstimatorRegistry {
 public:
  /// semantic_entropy, msp and mutual_information.
  static EstimatorRegistry with_defaults();

  void add(std::string name, EstimatorFn fn);
  const std::vector<std::pair<std::string, EstimatorFn>>& entries() const noexcept { return entries_; }

 private:
  std::vector<std::pair<std::string, EstimatorFn>> entries_;
};

}  // namespace auq::estimators
