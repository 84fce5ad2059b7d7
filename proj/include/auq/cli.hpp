#pragma once

// Command-line entry point: build-gt, eval, bounds, simulate, metrics.
//
// Exit codes: 0 success, 1 fatal I/O, 2 validation, 3 degenerate input.
// AUQ_WORKERS sets the thread count; it never changes any output.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "auq/categorical.hpp"
#include "auq/corpus.hpp"
#include "auq/error.hpp"
#include "auq/estimators.hpp"
#include "auq/metrics.hpp"

namespace auq::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kValidation = 2, kDegenerate = 3 };

int exit_code_for(ErrorKind kind);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct EvalOptions {
  double epsilon = estimators::kDefaultEpsilon;
  std::optional<double> dirichlet_gamma;  // use E[KL] under the posterior as truth
  estimators::EquivalenceMap eq;
};

struct QuestionEvaluation {
  metrics::EvalRecord record;
  Decomposition point;                 // decomposition of the aligned point estimate
  std::vector<std::string> classes;    // aligned support
  std::vector<double> aligned_counts;  // ground-truth counts on the aligned support (may be empty)
  std::vector<double> aligned_p;       // epsilon-imputed model distribution
  std::vector<std::string> notices;    // estimators that were unavailable
};

/// cluster -> align -> decompose -> estimator scores for one question.
QuestionEvaluation evaluate_question(const corpus::GroundTruthRecord& gt, const estimators::PredictionInput& pred,
                                     const estimators::EstimatorRegistry& registry, const EvalOptions& options);

/// CSV with one row per estimator: estimator,n,concordance,aucroc@<delta>...
/// Cells for degenerate AUCROC thresholds are "NA" and produce a warning.
/// Throws DegenerateInputError when concordance is undefined for an estimator.
std::string metrics_csv(const std::vector<metrics::EvalRecord>& records, const std::vector<std::string>& estimators,
                        const std::vector<double>& deltas, std::vector<std::string>& warnings);

std::string histogram_csv(const metrics::Histogram& h);

}  // namespace auq::cli
