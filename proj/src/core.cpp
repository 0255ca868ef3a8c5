#include "bdg/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace bdg {

namespace {

double checked_sum(const std::vector<double>& w, const char* what) {
  double sum = 0.0;
  for (double x : w) {
    if (!std::isfinite(x)) fail(errc::non_finite, std::string(what) + " contains NaN or infinity");
    if (x < 0.0) fail(errc::invalid_simplex, std::string(what) + " contains a negative weight");
    sum += x;
  }
  return sum;
}

// Divide by the sum twice; the second pass almost always lands the sum on
// exactly 1.0, which keeps repeated normalization a fixed point.
void renormalize(std::vector<double>& w, double sum) {
  for (double& x : w) x /= sum;
  double again = std::accumulate(w.begin(), w.end(), 0.0);
  if (again != 1.0) {
    for (double& x : w) x /= again;
  }
}

}  // namespace

Simplex::Simplex(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) fail(errc::invalid_simplex, "simplex must have length >= 1");
  double sum = checked_sum(weights_, "simplex");
  if (std::abs(sum - 1.0) > kSimplexSumTolerance) {
    fail(errc::invalid_simplex,
         "weights sum to " + std::to_string(sum) + ", outside 1e-9 of 1");
  }
  if (sum != 1.0) renormalize(weights_, sum);
}

Simplex normalize(const std::vector<double>& raw) {
  if (raw.empty()) fail(errc::invalid_simplex, "cannot normalize an empty vector");
  double sum = checked_sum(raw, "input");
  if (sum == 0.0) fail(errc::all_zero, "every entry is zero");
  std::vector<double> w = raw;
  renormalize(w, sum);
  return Simplex(std::move(w));
}

Simplex softmax_from_logits(const std::vector<double>& logits) {
  if (logits.empty()) fail(errc::invalid_simplex, "cannot softmax an empty vector");
  for (double x : logits) {
    if (!std::isfinite(x)) fail(errc::non_finite, "logits contain NaN or infinity");
  }
  double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> w(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    w[i] = std::exp(logits[i] - mx);
    sum += w[i];
  }
  renormalize(w, sum);
  return Simplex(std::move(w));
}

std::vector<std::size_t> preference_ordering(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

std::vector<std::size_t> preference_ordering(const Simplex& s) {
  return preference_ordering(s.weights());
}

GeneratorStrategy::GeneratorStrategy(Simplex correct_dist, Simplex incorrect_dist)
    : correct(std::move(correct_dist)), incorrect(std::move(incorrect_dist)) {
  if (correct.size() != incorrect.size()) {
    fail(errc::dimension_mismatch, "per-signal distributions differ in length");
  }
}

VerifierStrategy::VerifierStrategy(std::vector<double> p_correct,
                                   std::vector<double> p_incorrect)
    : p_correct_(std::move(p_correct)), p_incorrect_(std::move(p_incorrect)) {
  if (p_correct_.size() != p_incorrect_.size()) {
    fail(errc::dimension_mismatch, "verifier columns differ in length");
  }
  if (p_correct_.empty()) fail(errc::invalid_simplex, "verifier strategy needs >= 1 candidate");
  for (std::size_t i = 0; i < p_correct_.size(); ++i) {
    double c = p_correct_[i];
    double n = p_incorrect_[i];
    if (!std::isfinite(c) || !std::isfinite(n)) {
      fail(errc::non_finite, "verifier probabilities contain NaN or infinity");
    }
    if (c < 0.0 || n < 0.0) {
      fail(errc::invalid_simplex, "verifier probabilities must be non-negative");
    }
    double sum = c + n;
    if (std::abs(sum - 1.0) > kSimplexSumTolerance) {
      fail(errc::invalid_simplex, "verifier pair for candidate " + std::to_string(i) +
                                      " sums to " + std::to_string(sum));
    }
    if (sum != 1.0) {
      p_correct_[i] = c / sum;
      p_incorrect_[i] = n / sum;
    }
  }
}

void GameConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(errc::invalid_config, std::string(name) + " must be finite and > 0");
    }
  };
  positive(lambda_g, "lambda_g");
  positive(lambda_v, "lambda_v");
  positive(eta_g, "eta_g");
  positive(eta_v, "eta_v");
  positive(sigma, "sigma");
  positive(delta_w, "delta_w");
  positive(epsilon, "epsilon");
  if (max_iterations < 1) fail(errc::invalid_config, "max_iterations must be >= 1");
  if (n_candidates < 1) fail(errc::invalid_config, "n_candidates must be >= 1");
  if (n_candidates > max_sampling_calls) {
    fail(errc::invalid_config, "n_candidates must not exceed max_sampling_calls");
  }
  for (double t : temperatures) positive(t, "temperature");
}

}  // namespace bdg
