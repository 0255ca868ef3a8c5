#pragma once
// Batch evaluation: decision-rule baselines, answer metrics, stopping-
// criterion comparison experiments, and report output.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bdg/core.hpp"
#include "bdg/game.hpp"
#include "bdg/scorer.hpp"

namespace bdg {

inline constexpr const char* kReportSchema = "bdg-report/1";

enum class DecisionRule { Greedy, SCD, VerifierOnly, BDGClassic, BDGWasserstein };

const char* rule_name(DecisionRule r) noexcept;
DecisionRule rule_from_name(const std::string& name);  // throws parse_error on unknown token
const std::vector<DecisionRule>& all_rules();

struct Decision {
  std::string answer;  // canonical text
  std::optional<std::vector<double>> answer_embedding;
  std::optional<int> iterations;             // game rules only
  std::optional<Termination> termination;    // game rules only
};

// Candidate set, metric, and game run for one trace (game rules).
struct GameRun {
  CandidateSet set;
  GameResult result;
};

GameRun run_instance(const InstanceTrace& trace, const GameConfig& cfg);

Decision decide(DecisionRule rule, const InstanceTrace& trace, const GameConfig& cfg);

// 1 iff the canonical strings are equal. Callers pass canonicalized text.
int exact_match(const std::string& pred_canonical, const std::string& gold_canonical);

// Whitespace-token multiset F1 = 2|intersection| / (|pred| + |gold|);
// 0 when either side is empty or the intersection is.
double token_f1(const std::string& pred, const std::string& gold);

// Raw cosine similarity, clamped to [-1, 1]. The report layer rescales to
// [0, 1] as (cos + 1) / 2; per-instance rows keep the raw value.
double semantic_similarity(const std::vector<double>& pred_embedding,
                           const std::vector<double>& gold_embedding);

struct InstanceRow {
  std::string instance_id;
  std::string rule;
  std::uint64_t seed = 0;
  std::string answer;
  int em = 0;
  double f1 = 0.0;
  std::optional<double> semsim;  // raw cosine; absent when no embedding is available
  std::optional<int> iterations;
  std::optional<std::string> termination;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

struct RuleAggregate {
  MeanStd exact_match;
  MeanStd token_f1;
  MeanStd semantic_similarity;  // rescaled to [0, 1]
  std::optional<MeanStd> iterations;
};

struct EvalReport {
  std::map<std::string, RuleAggregate> per_rule;
  std::vector<InstanceRow> rows;
  GameConfig config;
  std::vector<std::uint64_t> seeds;
};

// Instances evaluated for one seed. Trace replay returns the same list for
// every seed; synthetic suites re-derive instances per seed.
using InstanceProvider = std::function<std::vector<InstanceTrace>(std::uint64_t seed)>;

InstanceProvider replay_provider(std::vector<InstanceTrace> traces);

// Suite of synthetic instances: `count` draws from `base`, instance k for
// run seed s synthesized with seed mix(mix(base.seed, k), s).
struct SyntheticSuite {
  SyntheticSpec base;
  std::size_t count = 0;
};

InstanceProvider synthetic_provider(const SyntheticSuite& suite);

// Runs every rule on every instance for every seed. Per-rule aggregates are
// mean +/- sample std of the per-seed instance means. Deterministic given
// seeds; `workers` only controls fan-out, results merge in instance order.
EvalReport run_eval(const InstanceProvider& instances, const std::vector<DecisionRule>& rules,
                    const GameConfig& cfg, const std::vector<std::uint64_t>& seeds,
                    unsigned workers = 0);

struct WilcoxonResult {
  double w_plus = 0.0;    // signed-rank statistic of the positive differences
  double p_value = 1.0;   // two-sided
  std::size_t n_nonzero = 0;
  bool exact = false;     // exact distribution (n <= 25) vs normal approximation
};

// Paired two-sided Wilcoxon signed-rank test; zero differences are dropped.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b);

struct ConvergenceReport {
  std::size_t pairs = 0;        // co-converged (seed, instance) pairs
  std::size_t total = 0;        // all (seed, instance) pairs
  double classic_converged_fraction = 0.0;
  double wasserstein_converged_fraction = 0.0;
  MeanStd classic_iterations;
  MeanStd wasserstein_iterations;
  double mean_reduction_pct = 0.0;  // mean over pairs of (classic - w) / classic
  double winner_agreement = 0.0;    // fraction of pairs with identical winners
  WilcoxonResult wilcoxon;
  GameConfig config;
  std::vector<std::uint64_t> seeds;
};

// Runs both stopping modes on every instance and compares iteration counts.
// Throws insufficient_convergence unless both modes terminate before
// max_iterations on >= 90% of instances.
ConvergenceReport compare_convergence(const InstanceProvider& instances, const GameConfig& cfg,
                                      const std::vector<std::uint64_t>& seeds,
                                      unsigned workers = 0);

// Report serialization ("bdg-report/1"). Both writers are deterministic for
// identical reports.
std::string eval_report_to_json(const EvalReport& report);
std::string eval_report_to_csv(const EvalReport& report);
std::string convergence_report_to_json(const ConvergenceReport& report);

}  // namespace bdg
