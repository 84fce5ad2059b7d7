#include "auq/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "auq/error.hpp"

namespace auq::bounds {

namespace {

constexpr int kMaxBisectionSteps = 200;
constexpr double kValueTolerance = 1e-10;
// Thresholds computed as log(k) by callers may land an ulp or two above the
// true maximum entropy.
constexpr double kDomainSlack = 1e-12;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Bisection on a decreasing f over [lo, hi] with f(lo) >= target >= f(hi).
// Returns the final bracket; the root lies inside it.
template <class F>
std::pair<double, double> bisect_decreasing(F f, double lo, double hi, double target) {
  for (int step = 0; step < kMaxBisectionSteps; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) >= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

void check_k(int k) {
  if (k < 2) throw DomainError("k must be >= 2 (got " + std::to_string(k) + ")");
}

}  // namespace

double h_max(double alpha, int k) {
  check_k(k);
  const double lo = 1.0 / k;
  if (!(alpha >= lo - kDomainSlack && alpha <= 1.0)) {
    throw DomainError("h_max: alpha=" + std::to_string(alpha) + " outside [1/k, 1]");
  }
  const double rest = 1.0 - alpha;
  double h = -xlogx(alpha);
  if (rest > 0.0) h -= rest * std::log(rest / (k - 1));
  return h;
}

double binary_entropy(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw DomainError("binary_entropy: gamma=" + std::to_string(gamma) + " outside [0, 1]");
  }
  return -xlogx(gamma) - xlogx(1.0 - gamma);
}

double alpha_delta(const BoundQuery& q) {
  check_k(q.k);
  const double max_entropy = std::log(static_cast<double>(q.k));
  if (!(q.delta >= 0.0 && q.delta <= max_entropy + kDomainSlack)) {
    throw DomainError("alpha_delta: delta=" + std::to_string(q.delta) + " outside [0, ln k] for k=" +
                      std::to_string(q.k));
  }
  if (q.delta == 0.0) return 1.0;
  if (q.delta >= max_entropy) return 1.0 / q.k;
  auto f = [k = q.k](double a) { return h_max(a, k); };
  auto [lo, hi] = bisect_decreasing(f, 1.0 / q.k, 1.0, q.delta);
  (void)lo;
  // f(hi) <= delta, so hi >= the exact root.
  return hi;
}

double gamma_delta(double delta) {
  const double ln2 = std::log(2.0);
  if (!(delta >= 0.0 && delta <= ln2 + kDomainSlack)) {
    throw DomainError("gamma_delta: delta=" + std::to_string(delta) + " outside [0, ln 2]");
  }
  if (delta == 0.0) return 1.0;
  if (delta >= ln2) return 0.5;
  auto [lo, hi] = bisect_decreasing(binary_entropy, 0.5, 1.0, delta);
  (void)hi;
  // binary_entropy(lo) >= delta, so lo <= the exact root.
  return lo;
}

double eu_lower_bound_high_entropy(const BoundQuery& q) { return std::max(0.0, -std::log(alpha_delta(q))); }

namespace {

void check_thm2_inputs(double delta, double avg_loss, double p_low_entropy) {
  if (delta == 0.0) {
    throw DegenerateInputError("thm2: delta = 0 makes -ln(1 - gamma_delta) infinite");
  }
  if (!(delta > 0.0 && delta <= std::log(2.0) + kDomainSlack)) {
    throw DomainError("thm2: delta=" + std::to_string(delta) + " outside (0, ln 2]");
  }
  if (!(avg_loss >= 0.0) || !std::isfinite(avg_loss)) {
    throw DomainError("thm2: avg_loss must be finite and >= 0");
  }
  if (p_low_entropy == 0.0) throw DegenerateInputError("thm2: P(H(p) <= delta) is zero");
  if (!(p_low_entropy > 0.0 && p_low_entropy <= 1.0)) {
    throw DomainError("thm2: p_low_entropy=" + std::to_string(p_low_entropy) + " outside (0, 1]");
  }
}

}  // namespace

Thm2Bound thm2_probability_bound(double delta, double avg_loss, double p_low_entropy) {
  check_thm2_inputs(delta, avg_loss, p_low_entropy);
  Thm2Bound b;
  b.gamma_delta = gamma_delta(delta);
  b.eu_cap = -std::log(b.gamma_delta);
  const double wrong_loss = -std::log1p(-b.gamma_delta);
  b.prob_lower_bound = 1.0 - avg_loss / (wrong_loss * p_low_entropy);
  return b;
}

Thm2Bound thm2_sharp_probability_bound(int k, double delta, double avg_loss, double p_low_entropy) {
  Thm2Bound b = thm2_probability_bound(delta, avg_loss, p_low_entropy);
  const double high_entropy_loss = eu_lower_bound_high_entropy({k, delta});
  const double wrong_loss = -std::log1p(-b.gamma_delta);
  b.prob_lower_bound += high_entropy_loss * (1.0 - p_low_entropy) / (wrong_loss * p_low_entropy);
  return b;
}

Witnesses nonidentifiability_witnesses(const Categorical& p) {
  if (p.size() < 2) throw ValidationError("witnesses: need at least two classes");
  std::size_t argmin = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) {
      throw SupportError("witnesses: p must be strictly positive (class '" + p.classes()[i] + "')");
    }
    if (p[i] < p[argmin]) argmin = i;
  }
  std::vector<double> vertex(p.size(), 0.0);
  vertex[argmin] = 1.0;
  Witnesses w{p, Categorical(p.classes(), std::move(vertex)), 0.0, 0.0};
  w.kl_1 = kl(w.p_star_1, p);
  w.kl_2 = kl(w.p_star_2, p);
  return w;
}

MiCounterexample mi_counterexample(const std::vector<Categorical>& ensemble) {
  if (ensemble.empty()) throw ValidationError("mi_counterexample: empty ensemble");
  const auto& first = ensemble.front();
  std::vector<double> mean(first.size(), 0.0);
  for (const auto& member : ensemble) {
    if (!member.same_support(first)) throw ValidationError("mi_counterexample: members are not aligned");
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += member[i];
  }
  for (double& v : mean) v /= static_cast<double>(ensemble.size());
  MiCounterexample out{Categorical(first.classes(), std::move(mean)), 0.0};
  out.eu = kl(out.p_star, out.p_star);
  return out;
}

}  // namespace auq::bounds
