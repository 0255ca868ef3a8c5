#pragma once
// The equilibrium game engine: initialization from teacher-forced
// log-probabilities, Markovian no-regret strategy updates, separation
// tracking, both stopping criteria, and final-answer extraction.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bdg/candidates.hpp"
#include "bdg/core.hpp"
#include "bdg/transport.hpp"

namespace bdg {

// n x 2 matrices indexed [candidate][signal], signal 0 = correct, 1 = incorrect.
using PairMatrix = std::vector<std::array<double, 2>>;

inline constexpr std::size_t kCorrect = 0;
inline constexpr std::size_t kIncorrect = 1;

// Teacher-forced log-probabilities that seed both agents. All entries must
// be finite and <= 0.
struct InitScores {
  PairMatrix generator_logprob;  // log P(y_i | x, s)
  PairMatrix verifier_logprob;   // log P(label | x, y_i)

  std::size_t size() const noexcept { return generator_logprob.size(); }
  void validate() const;
};

enum class Termination { OrderMatch, WassersteinConsensus, MaxIterations };

const char* termination_name(Termination t) noexcept;

struct GameState {
  int iteration = 0;
  GeneratorStrategy generator;
  VerifierStrategy verifier;
  double sigma_g_current = 0.0;
  double sigma_v_current = 0.0;
  std::optional<double> w1_current;           // Wasserstein mode only
  std::optional<double> w1_weighted_current;  // Wasserstein mode only
};

struct TraceRecord {
  Simplex generator_correct;  // a_G(. | x, correct)
  Simplex verifier_correct;   // normalized verifier correct-scores
  double sigma_g = 0.0;
  double sigma_v = 0.0;
  std::optional<double> w1;
  std::optional<double> w1_weighted;
  bool order_match = false;
  double utility = 0.0;  // order-match indicator averaged over the two signals

  bool operator==(const TraceRecord&) const = default;
};

struct GameTrace {
  std::vector<TraceRecord> records;

  bool operator==(const GameTrace&) const = default;
};

struct GameResult {
  std::size_t winner_index = 0;
  std::string winner_text;
  int iterations_used = 0;
  Termination termination = Termination::OrderMatch;
  GameTrace trace;
};

// a_G^(1)(.|x,s) = per-signal softmax over candidates; a_V^(1)(.|x,y_i) =
// per-candidate softmax over the two labels.
std::pair<GeneratorStrategy, VerifierStrategy> initialize(const InitScores& scores);

// Opponent-normalized views consumed by the updates. The generator's action
// is already a distribution over candidates per signal (pass-through with a
// re-normalization guard); the verifier's per-signal column is normalized
// over candidates so the generator update sees a distribution over Y.
PairMatrix normalize_opponent_generator(const GeneratorStrategy& g);
PairMatrix normalize_opponent_verifier(const VerifierStrategy& v);

// One Markovian update step. Both read the iteration-t opponent view and the
// agent's own iteration-t strategy; run_game applies them simultaneously.
GeneratorStrategy update_generator(const GeneratorStrategy& g, const PairMatrix& opponent_v,
                                   int t, const GameConfig& cfg);
VerifierStrategy update_verifier(const VerifierStrategy& v, const PairMatrix& opponent_g,
                                 int t, const GameConfig& cfg);

// sigma_G = min_i |a_G(i|correct) - a_G(i|incorrect)|;
// sigma_V = min_i |p_correct_i - p_incorrect_i|.
std::pair<double, double> sigma_separation(const GeneratorStrategy& g, const VerifierStrategy& v);

// Verifier correct-scores normalized over candidates.
Simplex verifier_correct_distribution(const VerifierStrategy& v);

// Classic criterion: both separations above sigma and identical preference
// orderings of p_G and p_V.
bool check_stop_classic(const GameState& state, const GameConfig& cfg);

struct WassersteinStop {
  bool stop = false;
  double w1 = 0.0;
  double w1_weighted = 0.0;
};

// Separation-weighted criterion: W1(p_G, p_V, D) / (sigma_V + epsilon) below
// delta_W, gated on both separations exceeding sigma.
WassersteinStop check_stop_wasserstein(const GameState& state, const GroundMetric& metric,
                                       const GameConfig& cfg);

// Full game loop. The stopping criterion is checked before the update at
// each iteration, so iterations_used is the 1-based iteration at which the
// check fired (or max_iterations). Single-candidate sets bypass the game.
GameResult run_game(const InitScores& scores, const CandidateSet& set, const GroundMetric& metric,
                    const GameConfig& cfg);

}  // namespace bdg
