#include <doctest.h>

#include <cmath>
#include <random>

#include "auq/bounds.hpp"
#include "auq/categorical.hpp"
#include "auq/error.hpp"
#include "auq/estimators.hpp"
#include "oracles.hpp"

using namespace auq;
using namespace auq::bounds;

namespace {

double hmax_oracle(double a, int k) { return -a * std::log(a) - (1 - a) * std::log((1 - a) / (k - 1)); }
double hb_oracle(double g) { return -g * std::log(g) - (1 - g) * std::log(1 - g); }

}  // namespace

TEST_CASE("h_max and binary entropy") {
  CHECK(std::abs(h_max(1.0 / 3, 3) - std::log(3.0)) < 1e-12);
  CHECK(h_max(1.0, 5) == 0.0);
  CHECK(std::abs(h_max(0.6, 3) - 0.9503) < 1e-4);
  CHECK(std::abs(h_max(0.6, 3) - hmax_oracle(0.6, 3)) < 1e-14);
  CHECK_THROWS_AS(h_max(0.2, 3), DomainError);
  CHECK_THROWS_AS(h_max(1.2, 3), DomainError);
  CHECK_THROWS_AS(h_max(0.5, 1), DomainError);

  CHECK(std::abs(binary_entropy(0.5) - std::log(2.0)) < 1e-15);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(std::abs(binary_entropy(0.8) - 0.5004) < 1e-4);
  CHECK(binary_entropy(0.2) == binary_entropy(0.8));
  CHECK_THROWS_AS(binary_entropy(1.4), DomainError);
}

TEST_CASE("alpha_delta inversion") {
  CHECK(std::abs(alpha_delta({3, std::log(3.0)}) - 1.0 / 3) < 1e-9);
  CHECK(alpha_delta({7, 0.0}) == 1.0);
  const double oracle = oracle::bisect_decreasing([](double a) { return hmax_oracle(a, 3); }, 0.9, 1.0 / 3, 1.0);
  CHECK(std::abs(alpha_delta({3, 0.9}) - oracle) < 1e-9);
  CHECK(std::abs(oracle - 0.6423) < 1e-4);
  CHECK_THROWS_AS(alpha_delta({3, -0.1}), DomainError);
  CHECK_THROWS_AS(alpha_delta({3, 1.2}), DomainError);
  CHECK_THROWS_AS(alpha_delta({1, 0.0}), DomainError);
}

TEST_CASE("gamma_delta inversion") {
  CHECK(std::abs(gamma_delta(std::log(2.0)) - 0.5) < 1e-9);
  CHECK(gamma_delta(0.0) == 1.0);
  const double oracle = oracle::bisect_decreasing(hb_oracle, 0.5, 0.5, 1.0);
  CHECK(std::abs(gamma_delta(0.5) - oracle) < 1e-9);
  CHECK(std::abs(gamma_delta(0.5) - 0.8) < 1e-3);
  CHECK_THROWS_AS(gamma_delta(0.7), DomainError);
}

TEST_CASE("eu lower bound") {
  CHECK(std::abs(eu_lower_bound_high_entropy({3, std::log(3.0)}) - std::log(3.0)) < 1e-9);
  CHECK(eu_lower_bound_high_entropy({4, 0.0}) == 0.0);
  const double a = oracle::bisect_decreasing([](double x) { return hmax_oracle(x, 3); }, 0.9, 1.0 / 3, 1.0);
  CHECK(std::abs(eu_lower_bound_high_entropy({3, 0.9}) + std::log(a)) < 1e-8);
}

TEST_CASE("inversion consistency and monotonicity over the valid range") {
  for (int k : {2, 3, 5, 10, 30}) {
    double prev_alpha = 2.0;
    double prev_bound = -1.0;
    for (int i = 0; i <= 200; ++i) {
      const double d = std::log(static_cast<double>(k)) * i / 200.0;
      const double a = alpha_delta({k, d});
      CHECK(std::abs(h_max(a, k) - d) < 1e-9);
      CHECK(a <= prev_alpha);
      const double b = eu_lower_bound_high_entropy({k, d});
      CHECK(b >= prev_bound);
      prev_alpha = a;
      prev_bound = b;
    }
  }
  double prev = 2.0;
  for (int i = 0; i <= 200; ++i) {
    const double d = std::log(2.0) * i / 200.0;
    const double g = gamma_delta(d);
    CHECK(std::abs(binary_entropy(g) - d) < 1e-9);
    CHECK(g <= prev);
    prev = g;
  }
}

TEST_CASE("theorem 1 holds on simplex samples for every vertex") {
  std::mt19937 rng(11);
  for (int k : {2, 3, 6}) {
    for (double frac : {0.2, 0.5, 0.9}) {
      const double d = frac * std::log(static_cast<double>(k));
      const double bound = eu_lower_bound_high_entropy({k, d});
      int checked = 0;
      for (int t = 0; t < 20000; ++t) {
        const auto p = oracle::random_simplex(k, rng);
        if (oracle::entropy(p) < d) continue;
        ++checked;
        for (int v = 0; v < k; ++v) CHECK_UNARY(-std::log(p[v]) >= bound - 1e-9);
      }
      CHECK(checked > 0);
    }
  }
}

TEST_CASE("theorem 2 probability bound") {
  CHECK(thm2_probability_bound(0.5, 0.0, 0.3).prob_lower_bound == 1.0);
  const auto a = thm2_probability_bound(std::log(2.0), 0.2, 0.8);
  CHECK(std::abs(a.prob_lower_bound - (1 - 0.2 / (std::log(2.0) * 0.8))) < 1e-9);
  CHECK(std::abs(a.prob_lower_bound - 0.6393) < 1e-4);
  CHECK(std::abs(a.gamma_delta - 0.5) < 1e-9);
  const auto b = thm2_probability_bound(0.5, 0.5, 0.5);
  CHECK(std::abs(b.prob_lower_bound - 0.3789) < 1e-3);
  CHECK(std::abs(b.eu_cap + std::log(b.gamma_delta)) < 1e-15);
  CHECK_THROWS_AS(thm2_probability_bound(0.0, 0.1, 0.5), DegenerateInputError);
  CHECK_THROWS_AS(thm2_probability_bound(0.5, 0.1, 0.0), DegenerateInputError);
  CHECK_THROWS_AS(thm2_probability_bound(0.5, -0.1, 0.5), DomainError);
  // unclamped: vacuous bounds stay negative
  CHECK(thm2_probability_bound(0.5, 5.0, 0.5).prob_lower_bound < 0.0);
  // the sharper variant adds a non-negative term
  for (double d : {0.1, 0.3, 0.6}) {
    const auto s = thm2_sharp_probability_bound(3, d, 0.4, 0.6);
    const auto w = thm2_probability_bound(d, 0.4, 0.6);
    CHECK(s.prob_lower_bound >= w.prob_lower_bound);
  }
}

TEST_CASE("proposition 1 witnesses") {
  const auto u = Categorical::from_probs({0.25, 0.25, 0.25, 0.25});
  CHECK(nonidentifiability_witnesses(u).kl_2 == std::log(4.0));
  CHECK(nonidentifiability_witnesses(u).p_star_2[0] == 1.0);  // lowest index on ties
  const auto w = nonidentifiability_witnesses(Categorical::from_probs({0.5, 0.3, 0.2}));
  CHECK(w.kl_1 == 0.0);
  CHECK(std::abs(w.kl_2 - 1.6094) < 1e-4);
  CHECK(w.p_star_2[2] == 1.0);
  CHECK_THROWS_AS(nonidentifiability_witnesses(Categorical::from_probs({1.0, 0.0})), SupportError);

  std::mt19937 rng(5);
  std::uniform_int_distribution<int> kd(2, 10);
  for (int t = 0; t < 1000; ++t) {
    const int k = kd(rng);
    const auto p = oracle::random_simplex(k, rng, 1e-6);
    const auto r = nonidentifiability_witnesses(Categorical::from_probs(p));
    CHECK(r.kl_1 == 0.0);
    CHECK(r.kl_2 >= std::log(static_cast<double>(k)));
    std::vector<double> star(r.p_star_2.probs().begin(), r.p_star_2.probs().end());
    CHECK(std::abs(r.kl_2 - oracle::kl(star, p)) <= 1e-12);
  }
}

TEST_CASE("proposition 2 counterexample") {
  const auto r = mi_counterexample({Categorical::from_probs({1, 0}), Categorical::from_probs({0, 1})});
  CHECK(r.eu == 0.0);
  CHECK(r.p_star[0] == 0.5);
  const auto single = mi_counterexample({Categorical::from_probs({0.3, 0.7})});
  CHECK(single.eu == 0.0);
  CHECK(single.p_star[1] == 0.7);
  const auto mix = mi_counterexample({Categorical::from_probs({0.6, 0.4}), Categorical::from_probs({0.2, 0.8})});
  CHECK(std::abs(mix.p_star[0] - 0.4) < 1e-15);
  CHECK(mix.eu == 0.0);
  CHECK_THROWS_AS(mi_counterexample({}), ValidationError);
  CHECK_THROWS_AS(mi_counterexample({Categorical::from_probs({1.0}), Categorical::from_probs({0.5, 0.5})}),
                  ValidationError);
}
