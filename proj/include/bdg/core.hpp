#pragma once
// Foundational numeric types: probability simplices, the two agents'
// strategies, and the game configuration shared by every other module.

#include <array>
#include <cstddef>
#include <vector>

#include "bdg/error.hpp"

namespace bdg {

// Absolute tolerance on the weight sum accepted by Simplex construction.
// Within tolerance the weights are re-normalized; outside they are rejected.
inline constexpr double kSimplexSumTolerance = 1e-9;

// log(0) inside strategy updates is floored at log of this value, so
// underflowed probabilities keep their ordering instead of becoming -inf.
inline constexpr double kLogFloorArg = 1e-300;

enum class SignalLabel { Correct, Incorrect };

// Distribution over the candidate set: non-negative weights summing to 1.
class Simplex {
 public:
  explicit Simplex(std::vector<double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const noexcept { return weights_[i]; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  bool operator==(const Simplex&) const = default;

 private:
  std::vector<double> weights_;
};

// Proportional rescaling of a non-negative vector onto the simplex.
Simplex normalize(const std::vector<double>& raw);

// Numerically stable softmax: shifts by the max logit before exponentiation.
Simplex softmax_from_logits(const std::vector<double>& logits);

// Candidate indices sorted by weight descending, ties broken by ascending
// index. Deterministic, so order-match stopping is reproducible.
std::vector<std::size_t> preference_ordering(const Simplex& s);

// Same ordering rule over any non-negative score vector (orderings are
// invariant under the positive rescaling a Simplex would apply).
std::vector<std::size_t> preference_ordering(const std::vector<double>& scores);

// a_G(. | x, s): one distribution over candidates per signal.
struct GeneratorStrategy {
  Simplex correct;
  Simplex incorrect;

  GeneratorStrategy(Simplex correct_dist, Simplex incorrect_dist);

  std::size_t size() const noexcept { return correct.size(); }
  const Simplex& for_signal(SignalLabel s) const noexcept {
    return s == SignalLabel::Correct ? correct : incorrect;
  }

  bool operator==(const GeneratorStrategy&) const = default;
};

// a_V(. | x, y): one binary correct/incorrect distribution per candidate.
class VerifierStrategy {
 public:
  VerifierStrategy(std::vector<double> p_correct, std::vector<double> p_incorrect);

  std::size_t size() const noexcept { return p_correct_.size(); }
  double p_correct(std::size_t i) const noexcept { return p_correct_[i]; }
  double p_incorrect(std::size_t i) const noexcept { return p_incorrect_[i]; }
  const std::vector<double>& correct_column() const noexcept { return p_correct_; }
  const std::vector<double>& incorrect_column() const noexcept { return p_incorrect_; }

  bool operator==(const VerifierStrategy&) const = default;

 private:
  std::vector<double> p_correct_;
  std::vector<double> p_incorrect_;
};

enum class StoppingMode { Classic, Wasserstein };

// Rule used to extract the final answer from the terminal strategies.
enum class SelectionRule { Average, GeneratorOnly, VerifierOnly };

struct GameConfig {
  double lambda_g = 0.4;  // generator stiffness
  double lambda_v = 0.4;  // verifier stiffness
  double eta_g = 0.4;     // generator learning rate
  double eta_v = 0.4;     // verifier learning rate
  double sigma = 0.005;   // separation threshold, shared by sigma_G and sigma_V
  double delta_w = 0.2;   // weighted-W1 termination threshold
  double epsilon = 1e-8;  // stabilizer in the separation weighting
  int max_iterations = 500;
  std::size_t n_candidates = 8;
  std::size_t max_sampling_calls = 16;
  std::vector<double> temperatures{0.5, 1.0};
  StoppingMode stopping_mode = StoppingMode::Wasserstein;
  SelectionRule selection_rule = SelectionRule::Average;

  // Throws invalid_config on any violated invariant.
  void validate() const;
};

}  // namespace bdg
