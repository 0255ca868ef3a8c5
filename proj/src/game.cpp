#include "bdg/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bdg {

namespace {

double floored_log(double p) {
  return std::log(p < kLogFloorArg ? kLogFloorArg : p);
}

bool same_ordering(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return a == b;
}

// Eq-1 telemetry: the shared utility is the order-match indicator averaged
// over the two signals. For the incorrect signal the orderings come from
// a_G(.|incorrect) and the verifier's incorrect column (orderings are
// invariant under the column normalization, so raw scores suffice).
double shared_utility(const GeneratorStrategy& g, const VerifierStrategy& v) {
  bool match_correct = same_ordering(preference_ordering(g.correct),
                                     preference_ordering(v.correct_column()));
  bool match_incorrect = same_ordering(preference_ordering(g.incorrect),
                                       preference_ordering(v.incorrect_column()));
  return 0.5 * (static_cast<double>(match_correct) + static_cast<double>(match_incorrect));
}

}  // namespace

void InitScores::validate() const {
  if (generator_logprob.empty() || verifier_logprob.size() != generator_logprob.size()) {
    fail(errc::dimension_mismatch, "score matrices must be non-empty and equal length");
  }
  auto check = [](const PairMatrix& m, const char* which) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (double x : m[i]) {
        if (!std::isfinite(x)) {
          fail(errc::non_finite, std::string(which) + " logprob for candidate " +
                                     std::to_string(i) + " is NaN or infinite");
        }
        if (x > 0.0) {
          fail(errc::invalid_scores, std::string(which) + " logprob for candidate " +
                                         std::to_string(i) + " is positive");
        }
      }
    }
  };
  check(generator_logprob, "generator");
  check(verifier_logprob, "verifier");
}

const char* termination_name(Termination t) noexcept {
  switch (t) {
    case Termination::OrderMatch: return "order_match";
    case Termination::WassersteinConsensus: return "wasserstein_consensus";
    case Termination::MaxIterations: return "max_iterations";
  }
  return "unknown";
}

std::pair<GeneratorStrategy, VerifierStrategy> initialize(const InitScores& scores) {
  scores.validate();
  const std::size_t n = scores.size();

  std::vector<double> logits_correct(n), logits_incorrect(n);
  for (std::size_t i = 0; i < n; ++i) {
    logits_correct[i] = scores.generator_logprob[i][kCorrect];
    logits_incorrect[i] = scores.generator_logprob[i][kIncorrect];
  }
  GeneratorStrategy g(softmax_from_logits(logits_correct), softmax_from_logits(logits_incorrect));

  std::vector<double> p_correct(n), p_incorrect(n);
  for (std::size_t i = 0; i < n; ++i) {
    Simplex pair = softmax_from_logits(
        {scores.verifier_logprob[i][kCorrect], scores.verifier_logprob[i][kIncorrect]});
    p_correct[i] = pair[0];
    p_incorrect[i] = pair[1];
  }
  return {std::move(g), VerifierStrategy(std::move(p_correct), std::move(p_incorrect))};
}

PairMatrix normalize_opponent_generator(const GeneratorStrategy& g) {
  const std::size_t n = g.size();
  PairMatrix out(n);
  for (std::size_t s = 0; s < 2; ++s) {
    const Simplex& dist = (s == kCorrect) ? g.correct : g.incorrect;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += dist[i];
    for (std::size_t i = 0; i < n; ++i) out[i][s] = dist[i] / sum;
  }
  return out;
}

PairMatrix normalize_opponent_verifier(const VerifierStrategy& v) {
  const std::size_t n = v.size();
  PairMatrix out(n);
  for (std::size_t s = 0; s < 2; ++s) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += (s == kCorrect) ? v.p_correct(i) : v.p_incorrect(i);
    }
    if (sum == 0.0) {
      fail(errc::zero_column, std::string("verifier ") +
                                  (s == kCorrect ? "correct" : "incorrect") +
                                  " column is entirely zero");
    }
    for (std::size_t i = 0; i < n; ++i) {
      out[i][s] = ((s == kCorrect) ? v.p_correct(i) : v.p_incorrect(i)) / sum;
    }
  }
  return out;
}

GeneratorStrategy update_generator(const GeneratorStrategy& g, const PairMatrix& opponent_v,
                                   int t, const GameConfig& cfg) {
  if (t < 1) fail(errc::invalid_config, "iteration index must be >= 1");
  if (opponent_v.size() != g.size()) {
    fail(errc::dimension_mismatch, "opponent matrix size differs from strategy");
  }
  const std::size_t n = g.size();
  const double denom = 1.0 / (cfg.eta_g * static_cast<double>(t)) + cfg.lambda_g;

  std::array<Simplex, 2> updated = {g.correct, g.incorrect};
  for (std::size_t s = 0; s < 2; ++s) {
    const Simplex& prior = (s == kCorrect) ? g.correct : g.incorrect;
    std::vector<double> logits(n);
    for (std::size_t i = 0; i < n; ++i) {
      logits[i] = (0.5 * opponent_v[i][s] + cfg.lambda_g * floored_log(prior[i])) / denom;
    }
    updated[s] = softmax_from_logits(logits);
  }
  return GeneratorStrategy(std::move(updated[kCorrect]), std::move(updated[kIncorrect]));
}

VerifierStrategy update_verifier(const VerifierStrategy& v, const PairMatrix& opponent_g,
                                 int t, const GameConfig& cfg) {
  if (t < 1) fail(errc::invalid_config, "iteration index must be >= 1");
  if (opponent_g.size() != v.size()) {
    fail(errc::dimension_mismatch, "opponent matrix size differs from strategy");
  }
  const std::size_t n = v.size();
  const double denom = 1.0 / (cfg.eta_v * static_cast<double>(t)) + cfg.lambda_v;

  std::vector<double> p_correct(n), p_incorrect(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> logits(2);
    logits[kCorrect] =
        (0.5 * opponent_g[i][kCorrect] + cfg.lambda_v * floored_log(v.p_correct(i))) / denom;
    logits[kIncorrect] =
        (0.5 * opponent_g[i][kIncorrect] + cfg.lambda_v * floored_log(v.p_incorrect(i))) / denom;
    Simplex pair = softmax_from_logits(logits);
    p_correct[i] = pair[0];
    p_incorrect[i] = pair[1];
  }
  return VerifierStrategy(std::move(p_correct), std::move(p_incorrect));
}

std::pair<double, double> sigma_separation(const GeneratorStrategy& g,
                                           const VerifierStrategy& v) {
  if (g.size() != v.size()) fail(errc::dimension_mismatch, "strategy sizes differ");
  double sigma_g = std::numeric_limits<double>::infinity();
  double sigma_v = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i) {
    sigma_g = std::min(sigma_g, std::abs(g.correct[i] - g.incorrect[i]));
    sigma_v = std::min(sigma_v, std::abs(v.p_correct(i) - v.p_incorrect(i)));
  }
  return {sigma_g, sigma_v};
}

Simplex verifier_correct_distribution(const VerifierStrategy& v) {
  return normalize(v.correct_column());
}

bool check_stop_classic(const GameState& state, const GameConfig& cfg) {
  if (!(state.sigma_g_current > cfg.sigma) || !(state.sigma_v_current > cfg.sigma)) return false;
  Simplex p_v = verifier_correct_distribution(state.verifier);
  return same_ordering(preference_ordering(state.generator.correct), preference_ordering(p_v));
}

WassersteinStop check_stop_wasserstein(const GameState& state, const GroundMetric& metric,
                                       const GameConfig& cfg) {
  Simplex p_v = verifier_correct_distribution(state.verifier);
  WassersteinStop out;
  out.w1 = wasserstein1(state.generator.correct, p_v, metric).cost;
  out.w1_weighted = out.w1 / (state.sigma_v_current + cfg.epsilon);
  out.stop = out.w1_weighted < cfg.delta_w && state.sigma_g_current > cfg.sigma &&
             state.sigma_v_current > cfg.sigma;
  return out;
}

GameResult run_game(const InitScores& scores, const CandidateSet& set, const GroundMetric& metric,
                    const GameConfig& cfg) {
  cfg.validate();
  const std::size_t n = set.size();
  if (scores.size() != n || metric.size() != n) {
    fail(errc::dimension_mismatch, "scores, candidate set, and metric sizes differ");
  }

  GameResult result;
  if (n == 1) {
    // Degenerate game: the sole candidate wins without any iterations.
    result.winner_index = 0;
    result.winner_text = set[0].canonical_text;
    result.iterations_used = 0;
    result.termination = Termination::OrderMatch;
    return result;
  }

  auto [generator, verifier] = initialize(scores);

  for (int t = 1; t <= cfg.max_iterations; ++t) {
    auto [sigma_g, sigma_v] = sigma_separation(generator, verifier);
    GameState state{t, generator, verifier, sigma_g, sigma_v, std::nullopt, std::nullopt};

    Simplex p_v = verifier_correct_distribution(verifier);
    bool order_match = same_ordering(preference_ordering(generator.correct),
                                     preference_ordering(p_v));

    bool stop = false;
    if (cfg.stopping_mode == StoppingMode::Classic) {
      stop = check_stop_classic(state, cfg);
      if (stop) result.termination = Termination::OrderMatch;
    } else {
      WassersteinStop ws = check_stop_wasserstein(state, metric, cfg);
      state.w1_current = ws.w1;
      state.w1_weighted_current = ws.w1_weighted;
      stop = ws.stop;
      if (stop) result.termination = Termination::WassersteinConsensus;
    }

    result.trace.records.push_back(TraceRecord{generator.correct, p_v, sigma_g, sigma_v,
                                               state.w1_current, state.w1_weighted_current,
                                               order_match, shared_utility(generator, verifier)});

    if (stop) {
      result.iterations_used = t;
      break;
    }
    if (t == cfg.max_iterations) {
      result.termination = Termination::MaxIterations;
      result.iterations_used = t;
      break;
    }

    // Simultaneous update: both steps read only iteration-t values.
    PairMatrix opponent_v = normalize_opponent_verifier(verifier);
    PairMatrix opponent_g = normalize_opponent_generator(generator);
    GeneratorStrategy next_g = update_generator(generator, opponent_v, t, cfg);
    VerifierStrategy next_v = update_verifier(verifier, opponent_g, t, cfg);
    generator = std::move(next_g);
    verifier = std::move(next_v);
  }

  // Final answer: per-candidate consensus score at the terminal state.
  Simplex p_g = generator.correct;
  Simplex p_v = verifier_correct_distribution(verifier);
  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double score = 0.0;
    switch (cfg.selection_rule) {
      case SelectionRule::Average: score = 0.5 * (p_g[i] + p_v[i]); break;
      case SelectionRule::GeneratorOnly: score = p_g[i]; break;
      case SelectionRule::VerifierOnly: score = p_v[i]; break;
    }
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  result.winner_index = best;
  result.winner_text = set[best].canonical_text;
  return result;
}

}  // namespace bdg
