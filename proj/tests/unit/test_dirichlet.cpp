#include <doctest.h>

#include <cmath>
#include <random>

#include "auq/categorical.hpp"
#include "auq/dirichlet.hpp"
#include "auq/error.hpp"
#include "oracles.hpp"

using namespace auq;
using namespace auq::dirichlet;

namespace {

struct McMoments {
  double mean = 0.0;
  double se = 0.0;
};

template <class F>
McMoments mc(const std::vector<double>& alpha, int draws, unsigned seed, F f) {
  std::mt19937 rng(seed);
  double s = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double v = f(oracle::dirichlet(alpha, rng));
    s += v;
    s2 += v * v;
  }
  const double m = s / draws;
  return {m, std::sqrt(std::max(0.0, s2 / draws - m * m) / draws)};
}

}  // namespace

TEST_CASE("posterior parameters") {
  const auto a = posterior(std::vector<double>{0, 0}, 1.0);
  CHECK(a.alpha == std::vector<double>{1, 1});
  const auto b = posterior(std::vector<double>{31, 32, 25}, 1.0);
  CHECK(b.alpha == std::vector<double>{32, 33, 26});
  CHECK(b.alpha_0 == 91.0);
  CHECK(posterior(std::vector<double>{2, 3}, 10.0).alpha == std::vector<double>{21, 31});
  CHECK_THROWS_AS(posterior(std::vector<double>{1, 2}, 0.5), DomainError);
  CHECK_THROWS_AS(posterior(std::vector<double>{-1, 2}, 1.0), ValidationError);
}

TEST_CASE("digamma") {
  CHECK(std::abs(digamma(10.5) - 2.3030010342) < 1e-8);
  CHECK(std::abs(digamma(3.0) - 0.9227843351) < 1e-9);
  CHECK(std::abs(digamma(1.0) + 0.5772156649015329) < 1e-12);
  // recurrence psi(x + 1) = psi(x) + 1 / x
  for (double x : {0.01, 0.3, 1.7, 9.99, 42.0, 1e4}) {
    CHECK(std::abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) < 1e-10 * std::max(1.0, 1.0 / x));
  }
  CHECK_THROWS_AS(digamma(0.0), DomainError);
  CHECK_THROWS_AS(digamma(-2.0), DomainError);
}

TEST_CASE("expected entropy closed form") {
  CHECK(std::abs(expected_aleatoric(posterior(std::vector<double>{0, 0}, 1.0)) - 0.5) < 1e-9);
  // concentration at the uniform point approaches ln K
  const auto big = posterior(std::vector<double>{1e7, 1e7, 1e7}, 1.0);
  CHECK(std::abs(expected_aleatoric(big) - std::log(3.0)) < 1e-6);

  const auto fire = posterior(std::vector<double>{31, 32, 25}, 1.0);
  const auto m = mc(fire.alpha, 100000, 3, [](const std::vector<double>& t) { return oracle::entropy(t); });
  CHECK(std::abs(expected_aleatoric(fire) - m.mean) < 3 * m.se);
}

TEST_CASE("expected epistemic closed form") {
  const auto u = posterior(std::vector<double>{0, 0}, 1.0);
  const std::vector<double> half{0.5, 0.5};
  CHECK(std::abs(expected_epistemic(u, half) - (-std::log(0.5) - 0.5)) < 1e-9);
  CHECK(std::abs(expected_epistemic(u, half) - 0.1931) < 1e-4);

  const auto fire = posterior(std::vector<double>{31, 32, 25}, 1.0);
  const std::vector<double> p{0.2, 0.5, 0.3};
  const auto m = mc(fire.alpha, 100000, 9, [&](const std::vector<double>& t) { return oracle::kl(t, p); });
  CHECK(std::abs(expected_epistemic(fire, p) - m.mean) < 3 * m.se);

  // at the posterior mean the expectation is the documented sum and non-negative
  const auto mean = posterior_mean(fire);
  double sum = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    sum += mean[i] * (digamma(fire.alpha[i] + 1) - digamma(fire.alpha_0 + 1) - std::log(mean[i]));
  }
  CHECK(std::abs(expected_epistemic(fire, mean) - sum) < 1e-12);
  CHECK(expected_epistemic(fire, mean) >= 0.0);

  CHECK_THROWS_AS(expected_epistemic(fire, std::vector<double>{0.0, 0.5, 0.5}), SupportError);
  CHECK_THROWS_AS(expected_epistemic(fire, std::vector<double>{0.5, 0.5}), ValidationError);
}

TEST_CASE("expected epistemic converges to the point estimate as gamma grows") {
  const std::vector<double> counts{31, 32, 25};
  const std::vector<double> p{0.2, 0.5, 0.3};
  const double point = kl(normalize(counts), Categorical::from_probs(p));
  double prev_gap = INFINITY;
  for (double g : {1.0, 10.0, 100.0, 1e3, 1e4}) {
    const double gap = std::abs(expected_epistemic(posterior(counts, g), p) - point);
    CHECK(gap <= prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-3);
}
