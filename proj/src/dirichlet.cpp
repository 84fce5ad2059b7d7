#include "auq/dirichlet.hpp"

#include <array>
#include <cmath>
#include <string>

#include "auq/error.hpp"

namespace auq::dirichlet {

DirichletPosterior posterior(std::span<const double> counts, double gamma) {
  if (counts.empty()) throw ValidationError("posterior: empty counts");
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) {
    throw DomainError("posterior: gamma must be >= 1 (got " + std::to_string(gamma) + ")");
  }
  DirichletPosterior d;
  d.gamma = gamma;
  d.counts.assign(counts.begin(), counts.end());
  d.alpha.reserve(counts.size());
  for (double n : counts) {
    if (!(n >= 0.0) || !std::isfinite(n)) throw ValidationError("posterior: counts must be finite and >= 0");
    d.alpha.push_back(1.0 + gamma * n);
    d.alpha_0 += d.alpha.back();
  }
  return d;
}

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("digamma: x must be positive and finite (got " + std::to_string(x) + ")");
  }
  double shift = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  // B_{2n} / (2n) for n = 1..8.
  static constexpr std::array<double, 8> kCoeff = {
      1.0 / 12.0,         -1.0 / 120.0,        1.0 / 252.0,     -1.0 / 240.0,
      1.0 / 132.0,        -691.0 / 32760.0,    1.0 / 12.0,      -3617.0 / 8160.0,
  };
  const double inv2 = 1.0 / (x * x);
  double series = 0.0;
  double power = inv2;
  for (double c : kCoeff) {
    series += c * power;
    power *= inv2;
  }
  return shift + std::log(x) - 0.5 / x - series;
}

double expected_aleatoric(const DirichletPosterior& d) {
  const double psi_total = digamma(d.alpha_0 + 1.0);
  double h = 0.0;
  for (double a : d.alpha) h -= (a / d.alpha_0) * (digamma(a + 1.0) - psi_total);
  return h;
}

double expected_cross_entropy(const DirichletPosterior& d, std::span<const double> p) {
  if (p.size() != d.alpha.size()) {
    throw ValidationError("expected_cross_entropy: prediction has " + std::to_string(p.size()) +
                          " classes, posterior has " + std::to_string(d.alpha.size()));
  }
  double ce = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0)) {
      throw SupportError("expected_epistemic: prediction must be strictly positive (class " +
                         std::to_string(i) + ")");
    }
    ce -= (d.alpha[i] / d.alpha_0) * std::log(p[i]);
  }
  return ce;
}

double expected_epistemic(const DirichletPosterior& d, std::span<const double> p) {
  return expected_cross_entropy(d, p) - expected_aleatoric(d);
}

double expected_epistemic(const DirichletPosterior& d, const Categorical& p) {
  return expected_epistemic(d, p.probs());
}

std::vector<double> posterior_mean(const DirichletPosterior& d) {
  std::vector<double> m(d.alpha.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = d.alpha[i] / d.alpha_0;
  return m;
}

}  // namespace auq::dirichlet
