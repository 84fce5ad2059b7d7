#pragma once

// Dirichlet posterior over the ground-truth distribution and the closed-form
// expectations of its entropy and of KL(p* || p) under that posterior.

#include <span>
#include <vector>

#include "auq/categorical.hpp"

namespace auq::dirichlet {

/// alpha_i = 1 + gamma * n_i over a uniform Dir(1) prior.
struct DirichletPosterior {
  std::vector<double> counts;
  std::vector<double> alpha;
  double gamma = 1.0;
  double alpha_0 = 0.0;
};

/// Throws DomainError for gamma < 1, ValidationError for empty or negative counts.
DirichletPosterior posterior(std::span<const double> counts, double gamma);

/// Digamma function for x > 0. Shifts x above 10 with psi(x) = psi(x+1) - 1/x
/// and then evaluates the asymptotic series.
double digamma(double x);

/// E[H(p*)] = -sum_i (a_i/a_0) (psi(a_i + 1) - psi(a_0 + 1)).
double expected_aleatoric(const DirichletPosterior& d);

/// E[CE(p*, p)] = -sum_i (a_i/a_0) ln p_i.
double expected_cross_entropy(const DirichletPosterior& d, std::span<const double> p);

/// E[KL(p* || p)] = E[CE] - E[H]. p must be strictly positive.
double expected_epistemic(const DirichletPosterior& d, std::span<const double> p);
double expected_epistemic(const DirichletPosterior& d, const Categorical& p);

/// Posterior mean alpha_i / alpha_0.
std::vector<double> posterior_mean(const DirichletPosterior& d);

}  // namespace auq::dirichlet
