#include "auq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "auq/error.hpp"

namespace auq::metrics {

namespace {

struct Point {
  double truth;
  double score;
};

std::vector<Point> collect(const std::vector<EvalRecord>& records, const std::string& estimator) {
  std::vector<Point> pts;
  pts.reserve(records.size());
  for (const auto& r : records) {
    auto it = r.scores.find(estimator);
    if (it == r.scores.end()) continue;
    if (std::isnan(it->second) || std::isnan(r.true_eu)) {
      throw ValidationError("metrics: NaN value in record '" + r.question_id + "'");
    }
    pts.push_back({r.true_eu, it->second});
  }
  return pts;
}

// Fenwick tree over score ranks.
class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
  void add(std::size_t i) {
    for (++i; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
  }
  // Number of inserted ranks < i.
  std::uint64_t prefix(std::size_t i) const {
    std::uint64_t s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

 private:
  std::vector<std::uint64_t> tree_;
};

}  // namespace

PairTally concordance_tally(const std::vector<EvalRecord>& records, const std::string& estimator) {
  auto pts = collect(records, estimator);
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.truth < b.truth; });

  std::vector<double> ranks(pts.size());
  std::transform(pts.begin(), pts.end(), ranks.begin(), [](const Point& p) { return p.score; });
  std::sort(ranks.begin(), ranks.end());
  ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
  auto rank_of = [&](double s) {
    return static_cast<std::size_t>(std::lower_bound(ranks.begin(), ranks.end(), s) - ranks.begin());
  };

  // Sweep groups of equal truth in increasing order; each record is compared
  // against all records with strictly smaller truth already in the tree.
  Fenwick tree(ranks.size());
  PairTally tally;
  std::uint64_t inserted = 0;
  for (std::size_t start = 0; start < pts.size();) {
    std::size_t end = start;
    while (end < pts.size() && pts[end].truth == pts[start].truth) ++end;
    for (std::size_t i = start; i < end; ++i) {
      const auto r = rank_of(pts[i].score);
      const auto below = tree.prefix(r);
      const auto tied = tree.prefix(r + 1) - below;
      tally.half_credits += 2 * below + tied;
      tally.pairs += inserted;
    }
    for (std::size_t i = start; i < end; ++i) tree.add(rank_of(pts[i].score));
    inserted += end - start;
    start = end;
  }
  if (tally.pairs == 0) {
    throw DegenerateInputError("concordance: no pair of records with distinct true EU for estimator '" +
                               estimator + "'");
  }
  return tally;
}

double concordance(const std::vector<EvalRecord>& records, const std::string& estimator) {
  return concordance_tally(records, estimator).value();
}

PairTally aucroc_tally(const std::vector<EvalRecord>& records, const std::string& estimator, double delta) {
  auto pts = collect(records, estimator);
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.score < b.score; });

  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;
  for (const auto& p : pts) (p.truth >= delta ? positives : negatives)++;
  if (positives == 0 || negatives == 0) {
    throw DegenerateInputError("aucroc: only one class present at delta=" + std::to_string(delta) + " (" +
                               std::to_string(positives) + " positive, " + std::to_string(negatives) +
                               " negative) for estimator '" + estimator + "'");
  }

  PairTally tally;
  tally.pairs = positives * negatives;
  std::uint64_t negatives_below = 0;
  for (std::size_t start = 0; start < pts.size();) {
    std::size_t end = start;
    std::uint64_t pos = 0;
    std::uint64_t neg = 0;
    while (end < pts.size() && pts[end].score == pts[start].score) {
      (pts[end].truth >= delta ? pos : neg)++;
      ++end;
    }
    tally.half_credits += pos * (2 * negatives_below + neg);
    negatives_below += neg;
    start = end;
  }
  return tally;
}

double aucroc(const std::vector<EvalRecord>& records, const std::string& estimator, double delta) {
  return aucroc_tally(records, estimator, delta).value();
}

Summary summarize(const std::vector<double>& values, std::size_t bins) {
  if (values.empty()) throw DegenerateInputError("summarize: no values");
  if (bins == 0) throw ValidationError("summarize: bin count must be positive");
  Summary s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / n);

  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  s.histogram.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) s.histogram.edges[b] = lo + width * static_cast<double>(b);
  s.histogram.edges.back() = hi;
  s.histogram.counts.assign(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    s.histogram.counts[std::min(b, bins - 1)]++;
  }
  return s;
}

std::vector<double> default_deltas() { return {std::log(1.5), std::log(2.0), std::log(3.0)}; }

}  // namespace auq::metrics
