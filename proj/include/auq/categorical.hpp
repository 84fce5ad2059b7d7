#pragma once

// Discrete distributions over named semantic classes and the
// cross-entropy = entropy + KL decomposition of predictive uncertainty.
//
// All quantities are in nats. 0 * ln 0 is taken as 0.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace auq {

// Sum of probabilities must be within this of 1 to be accepted verbatim.
inline constexpr double kSumTolerance = 1e-9;
// Sums within this of 1 are silently renormalized; beyond it they are rejected.
inline constexpr double kRenormalizeTolerance = 1e-6;

/// Probability vector over an ordered list of unique class identifiers.
class Categorical {
 public:
  Categorical() = default;

  /// Validates and (if the sum is off by at most 1e-6) renormalizes.
  /// Throws ValidationError on negative/NaN entries, duplicate classes,
  /// length mismatch or a sum further than 1e-6 from one.
  Categorical(std::vector<std::string> classes, std::vector<double> probs);

  /// Classes named "0", "1", ... for anonymous vectors.
  static Categorical from_probs(std::vector<double> probs);

  const std::vector<std::string>& classes() const noexcept { return classes_; }
  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::optional<std::size_t> index_of(const std::string& cls) const;

  /// True when both carry the identical ordered class list.
  bool same_support(const Categorical& other) const noexcept { return classes_ == other.classes_; }

  friend bool operator==(const Categorical&, const Categorical&) = default;

 private:
  std::vector<std::string> classes_;
  std::vector<double> probs_;
};

struct Decomposition {
  double total = 0.0;      // cross-entropy CE(p*, p)
  double aleatoric = 0.0;  // H(p*)
  double epistemic = 0.0;  // KL(p* || p)
};

// Raw-vector kernels. They assume validated input and are used in hot loops.
namespace kernel {
double entropy(std::span<const double> p) noexcept;
/// KL(p || q); +infinity when q_i = 0 < p_i.
double kl(std::span<const double> p, std::span<const double> q) noexcept;
/// -sum p_i ln q_i; +infinity when q_i = 0 < p_i.
double cross_entropy(std::span<const double> p, std::span<const double> q) noexcept;
double js_divergence(std::span<const double> p, std::span<const double> q) noexcept;
}  // namespace kernel

double entropy(const Categorical& p);

/// KL(p_star || p). Requires identical class lists; throws SupportError
/// when p assigns zero mass to a class p_star supports (align first).
double kl(const Categorical& p_star, const Categorical& p);
double cross_entropy(const Categorical& p_star, const Categorical& p);
Decomposition decompose(const Categorical& p_star, const Categorical& p);

/// Jensen-Shannon divergence (symmetric, in [0, ln 2]).
double js_divergence(const Categorical& p, const Categorical& q);

/// Relative frequencies. Throws DegenerateInputError when the total is zero.
Categorical normalize(std::span<const double> counts);
Categorical normalize(std::span<const double> counts, std::vector<std::string> classes);

}  // namespace auq
