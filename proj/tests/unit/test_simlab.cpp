#include <doctest.h>

#include <cmath>

#include "auq/bounds.hpp"
#include "auq/error.hpp"
#include "auq/random.hpp"
#include "auq/simlab.hpp"
#include "oracles.hpp"

using namespace auq;
using namespace auq::simlab;

namespace {

double concordance_of(const SimReport& r, const std::string& est) {
  for (const auto& [name, v] : r.concordance) {
    if (name == est) return v;
  }
  FAIL("missing estimator " << est);
  return 0.0;
}

}  // namespace

TEST_CASE("config validation") {
  SimConfig c;
  CHECK_NOTHROW(validate(c));
  c.k = 1;
  CHECK_THROWS_AS(validate(c), ValidationError);
  c = {};
  c.n = 0;
  CHECK_THROWS_AS(validate(c), ValidationError);
  c = {};
  c.noise = 0.0;
  CHECK_THROWS_AS(validate(c), ValidationError);
  c = {};
  c.deltas = {2.0};  // above ln 3
  CHECK_THROWS_AS(validate(c), ValidationError);
  CHECK(parse_regime("free-au") == Regime::free_au);
  CHECK(to_string(Regime::high_au) == "high-AU");
  CHECK_THROWS_AS(parse_regime("mystery"), ValidationError);
}

TEST_CASE("truth sampling by regime") {
  Rng rng = block_rng(1, 0);
  SimConfig c;
  for (int i = 0; i < 100; ++i) {
    const auto v = sample_truth(c, rng);
    int ones = 0;
    for (double x : v) ones += x == 1.0 ? 1 : 0;
    CHECK(ones == 1);
  }
  c.regime = Regime::high_au;
  c.k = 4;
  for (int i = 0; i < 200; ++i) CHECK(oracle::entropy(sample_truth(c, rng)) >= std::log(4.0) - kHighAuMargin);

  c.regime = Regime::free_au;
  c.k = 3;
  const int n = 100000;
  std::vector<double> s(3, 0.0);
  std::vector<double> s2(3, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto v = sample_truth(c, rng);
    for (int j = 0; j < 3; ++j) {
      s[j] += v[j];
      s2[j] += v[j] * v[j];
    }
  }
  for (int j = 0; j < 3; ++j) {
    const double m = s[j] / n;
    const double se = std::sqrt((s2[j] / n - m * m) / n);
    CHECK(std::abs(m - 1.0 / 3) < 3 * se);
  }
}

TEST_CASE("model sampling") {
  Rng rng = block_rng(2, 0);
  const std::vector<double> vertex{1.0, 0.0};
  for (int i = 0; i < 500; ++i) {
    const auto p = sample_model(vertex, 3.0, rng);
    CHECK(p[0] > 0.0);
    CHECK(p[1] > 0.0);
    CHECK(std::abs(oracle::kl(vertex, p) - (-std::log(p[0]))) < 1e-15);
  }
  const std::vector<double> star{0.6, 0.3, 0.1};
  auto mean_eu = [&](double noise) {
    double s = 0.0;
    for (int i = 0; i < 20000; ++i) s += oracle::kl(star, sample_model(star, noise, rng));
    return s / 20000;
  };
  const double lo = mean_eu(2.0);
  const double hi = mean_eu(20.0);
  const double huge = mean_eu(1e6);
  CHECK(lo > hi);
  CHECK(huge < 1e-3);
}

TEST_CASE("experiments are deterministic in the seed and independent of workers") {
  SimConfig c;
  c.n = 3000;
  c.seed = 42;
  c.regime = Regime::free_au;
  c.ensemble = true;
  c.workers = 1;
  const auto a = run_experiment(c);
  c.workers = 4;
  const auto b = run_experiment(c);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].p == b.records[i].p);
    CHECK(a.records[i].true_eu == b.records[i].true_eu);
    CHECK(a.records[i].mutual_information == b.records[i].mutual_information);
  }
  c.seed = 43;
  CHECK(run_experiment(c).records[0].p != a.records[0].p);
  CHECK(a.records[0].mutual_information.has_value());
}

TEST_CASE("theorem checks on zero-AU populations") {
  for (int k : {3, 10}) {
    SimConfig c;
    c.k = k;
    c.n = 20000;
    c.seed = static_cast<std::uint64_t>(k);
    const auto r = run_experiment(c);
    CHECK(r.report.ok);
    for (const auto& t : r.report.thm1) {
      CHECK(t.applicable);
      CHECK(t.violations == 0);
    }
    for (const auto& t : r.report.thm2) {
      if (t.applicable) CHECK(t.holds);
    }
    CHECK(concordance_of(r.report, "semantic_entropy") >= 0.7);
  }
}

TEST_CASE("thm1 check counts violations against the bound") {
  // a record just below the bound must be flagged
  const double d = 0.5;
  const double bound = bounds::eu_lower_bound_high_entropy({3, d});
  SimRecord bad;
  bad.p = {0.4, 0.3, 0.3};
  bad.entropy_p = oracle::entropy(bad.p);
  bad.true_eu = bound - 1e-6;
  const auto t = check_thm1({bad}, 3, d, true);
  CHECK(t.checked == 1);
  CHECK(t.violations == 1);
  CHECK_FALSE(check_thm1({bad}, 3, d, false).applicable);
}

TEST_CASE("regime contrast and non-identifiability in free-AU populations") {
  SimConfig c;
  const double zero = concordance_of(run_experiment(c).report, "semantic_entropy");
  c.regime = Regime::free_au;
  const auto free = run_experiment(c);
  const double f = concordance_of(free.report, "semantic_entropy");
  CHECK(zero - f >= 0.1);
  CHECK(std::abs(f - 0.5) <= 0.1);

  c.n = 100000;
  const auto big = run_experiment(c);
  CHECK(max_eu_spread(big.records) >= std::log(3.0) - 0.2);
}

TEST_CASE("gamma ablation") {
  SimConfig c;
  c.n = 2000;
  c.regime = Regime::free_au;
  const auto recs = synthesize_count_records(c, 5, 60);
  const auto rows = gamma_ablation(recs, {1, 2, 5, 10, 100, 1e6});
  double point = -1.0;
  double far = -1.0;
  std::vector<double> grid_seen;
  for (const auto& row : rows) {
    if (row.estimator != "semantic_entropy") continue;
    if (!row.gamma) {
      point = row.concordance;
    } else if (*row.gamma == 1e6) {
      far = row.concordance;
    } else {
      grid_seen.push_back(*row.gamma);
    }
  }
  CHECK(std::abs(point - far) < 0.005);
  CHECK(grid_seen == std::vector<double>{1, 2, 5, 10, 100});
  CHECK(table5_gammas() == std::vector<double>{1, 2, 5, 10, 100});
  CHECK_THROWS_AS(gamma_ablation(recs, {0.5}), DomainError);
}

TEST_CASE("ablation concordance rises with gamma when counts pin down the truth") {
  SimConfig c;
  c.n = 3000;
  c.k = 4;
  c.regime = Regime::free_au;
  const auto recs = synthesize_count_records(c, 5000, 20000);
  const auto rows = gamma_ablation(recs, {1, 10, 100, 1000}, false);
  double prev = -1.0;
  for (const auto& row : rows) {
    CHECK(row.concordance >= prev - 1e-3);
    prev = row.concordance;
  }
}
