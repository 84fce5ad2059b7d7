#include "auq/categorical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "auq/error.hpp"

namespace auq {

Categorical::Categorical(std::vector<std::string> classes, std::vector<double> probs)
    : classes_(std::move(classes)), probs_(std::move(probs)) {
  if (classes_.size() != probs_.size()) {
    throw ValidationError("categorical: " + std::to_string(classes_.size()) + " classes but " +
                          std::to_string(probs_.size()) + " probabilities");
  }
  if (probs_.empty()) throw ValidationError("categorical: empty distribution");

  std::unordered_set<std::string> seen;
  for (const auto& c : classes_) {
    if (!seen.insert(c).second) throw ValidationError("categorical: duplicate class '" + c + "'");
  }

  double sum = 0.0;
  for (double v : probs_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("categorical: probabilities must be finite and non-negative");
    }
    sum += v;
  }
  const double off = std::abs(sum - 1.0);
  if (off > kRenormalizeTolerance) {
    throw ValidationError("categorical: probabilities sum to " + std::to_string(sum));
  }
  if (off > kSumTolerance) {
    for (double& v : probs_) v /= sum;
  }
}

Categorical Categorical::from_probs(std::vector<double> probs) {
  std::vector<std::string> classes(probs.size());
  for (std::size_t i = 0; i < classes.size(); ++i) classes[i] = std::to_string(i);
  return Categorical(std::move(classes), std::move(probs));
}

std::optional<std::size_t> Categorical::index_of(const std::string& cls) const {
  auto it = std::find(classes_.begin(), classes_.end(), cls);
  if (it == classes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - classes_.begin());
}

namespace kernel {

double entropy(std::span<const double> p) noexcept {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

double kl(std::span<const double> p, std::span<const double> q) noexcept {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    d += p[i] * std::log(p[i] / q[i]);
  }
  // Rounding can push an exact zero slightly negative.
  return std::max(d, 0.0);
}

double cross_entropy(std::span<const double> p, std::span<const double> q) noexcept {
  double ce = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    ce -= p[i] * std::log(q[i]);
  }
  return ce;
}

double js_divergence(std::span<const double> p, std::span<const double> q) noexcept {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    // summing both halves first keeps js(p, q) == js(q, p) bit for bit
    const double a = p[i] > 0.0 ? p[i] * std::log(p[i] / m) : 0.0;
    const double b = q[i] > 0.0 ? q[i] * std::log(q[i] / m) : 0.0;
    d += 0.5 * (a + b);
  }
  return std::clamp(d, 0.0, std::log(2.0));
}

}  // namespace kernel

namespace {

void require_aligned(const Categorical& p_star, const Categorical& p, const char* op) {
  if (!p_star.same_support(p)) {
    throw ValidationError(std::string(op) + ": distributions have different class lists");
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p_star[i] > 0.0 && p[i] <= 0.0) {
      throw SupportError(std::string(op) + ": class '" + p.classes()[i] +
                         "' has zero predicted mass but positive true mass; "
                         "align the distributions (epsilon imputation) first");
    }
  }
}

}  // namespace

double entropy(const Categorical& p) { return kernel::entropy(p.probs()); }

double kl(const Categorical& p_star, const Categorical& p) {
  require_aligned(p_star, p, "kl");
  return kernel::kl(p_star.probs(), p.probs());
}

double cross_entropy(const Categorical& p_star, const Categorical& p) {
  require_aligned(p_star, p, "cross_entropy");
  return kernel::cross_entropy(p_star.probs(), p.probs());
}

Decomposition decompose(const Categorical& p_star, const Categorical& p) {
  require_aligned(p_star, p, "decompose");
  Decomposition d;
  d.aleatoric = kernel::entropy(p_star.probs());
  d.epistemic = kernel::kl(p_star.probs(), p.probs());
  d.total = kernel::cross_entropy(p_star.probs(), p.probs());
  return d;
}

double js_divergence(const Categorical& p, const Categorical& q) {
  if (!p.same_support(q)) throw ValidationError("js_divergence: distributions have different class lists");
  return kernel::js_divergence(p.probs(), q.probs());
}

Categorical normalize(std::span<const double> counts, std::vector<std::string> classes) {
  double total = 0.0;
  for (double c : counts) {
    if (!std::isfinite(c) || c < 0.0) throw ValidationError("normalize: counts must be finite and non-negative");
    total += c;
  }
  if (total <= 0.0) throw DegenerateInputError("normalize: all counts are zero");
  std::vector<double> probs(counts.begin(), counts.end());
  for (double& v : probs) v /= total;
  return Categorical(std::move(classes), std::move(probs));
}

Categorical normalize(std::span<const double> counts) {
  std::vector<std::string> classes(counts.size());
  for (std::size_t i = 0; i < classes.size(); ++i) classes[i] = std::to_string(i);
  return normalize(counts, std::move(classes));
}

}  // namespace auq
