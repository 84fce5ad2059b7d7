#pragma once

// Entropy-based bounds on epistemic uncertainty when the ground truth is a
// simplex vertex, and constructive counterexamples once it is not.

#include <vector>

#include "auq/categorical.hpp"

namespace auq::bounds {

struct BoundQuery {
  int k = 2;           // number of classes, >= 2
  double delta = 0.0;  // entropy threshold in nats
};

struct Thm2Bound {
  double gamma_delta = 1.0;       // smallest possible max-probability given H(p) <= delta
  double eu_cap = 0.0;            // -ln gamma_delta
  double prob_lower_bound = 1.0;  // lower bound on P(EU <= eu_cap | H(p) <= delta); may be negative
};

/// Largest entropy of a k-class distribution whose top probability is alpha:
/// the remaining mass is spread uniformly. Decreasing on [1/k, 1].
double h_max(double alpha, int k);

double binary_entropy(double gamma);

/// Solves h_max(alpha, k) = delta for alpha in [1/k, 1] by bisection.
/// The returned value never undershoots the exact root, so -ln alpha_delta
/// stays a valid lower bound after rounding.
double alpha_delta(const BoundQuery& q);

/// Solves binary_entropy(gamma) = delta for gamma in [1/2, 1] by bisection.
/// The returned value never overshoots the exact root.
double gamma_delta(double delta);

/// Minimum EU = KL(vertex || p) over predictions with H(p) >= delta.
double eu_lower_bound_high_entropy(const BoundQuery& q);

/// 1 - avg_loss / (-ln(1 - gamma_delta) * p_low_entropy), reported unclamped.
/// Throws DegenerateInputError for delta = 0 or p_low_entropy = 0.
Thm2Bound thm2_probability_bound(double delta, double avg_loss, double p_low_entropy);

/// The same bound before the positive high-entropy term is dropped:
///   stated + (-ln alpha_delta) * (1 - P) / (-ln(1 - gamma_delta) * P).
/// Needs k because alpha_delta does.
Thm2Bound thm2_sharp_probability_bound(int k, double delta, double avg_loss, double p_low_entropy);

struct Witnesses {
  Categorical p_star_1;  // equals p, zero EU
  Categorical p_star_2;  // vertex at argmin p (lowest index on ties)
  double kl_1 = 0.0;
  double kl_2 = 0.0;     // -ln min_i p_i >= ln K
};

/// Two ground truths that make the same prediction look perfect and terrible.
Witnesses nonidentifiability_witnesses(const Categorical& p);

struct MiCounterexample {
  Categorical p_star;  // ensemble mean
  double eu = 0.0;     // KL(mean || mean), always 0
};

MiCounterexample mi_counterexample(const std::vector<Categorical>& ensemble);

}  // namespace auq::bounds
