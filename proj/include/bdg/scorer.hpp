#pragma once
// Scoring backends: recorded trace files and the synthetic instance
// generator. Both produce InstanceTrace objects the game consumes offline;
// the remote backend lives in bdg/remote.hpp.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bdg/candidates.hpp"
#include "bdg/core.hpp"
#include "bdg/game.hpp"

namespace bdg {

inline constexpr const char* kTraceSchema = "bdg-trace/1";

struct TraceSample {
  std::string raw_text;
  double temperature = 0.0;
  std::vector<double> embedding;
  bool greedy = false;  // at most one sample per instance carries this mark

  bool operator==(const TraceSample&) const = default;
};

struct LogProbPair {
  double correct = 0.0;
  double incorrect = 0.0;

  bool operator==(const LogProbPair&) const = default;
};

// One replayed instance: everything model-dependent the game needs.
struct InstanceTrace {
  std::string instance_id;
  std::string question;
  std::optional<std::string> image_ref;
  std::vector<TraceSample> samples;
  std::map<std::string, LogProbPair> generator_logprob;  // keyed by canonical text
  std::map<std::string, LogProbPair> verifier_logprob;
  std::string gold_answer;
  std::optional<std::vector<double>> gold_embedding;

  bool operator==(const InstanceTrace&) const = default;
};

// Desk-scale stand-in for model behavior: clusters of near-synonymous
// candidates at prescribed pairwise distances, with noisy scores favoring
// the correct cluster.
struct SyntheticSpec {
  std::size_t n_clusters = 2;
  std::vector<std::size_t> cluster_sizes;
  double intra_cluster_distance = 0.05;
  double inter_cluster_distance = 0.9;
  double generator_noise = 0.0;  // stddev of generator logit perturbations
  double verifier_noise = 0.0;   // stddev of verifier logit perturbations
  std::size_t correct_cluster = 0;
  std::uint64_t seed = 0;

  std::size_t total_candidates() const;
  // Structural checks; pass the config's candidate cap to also enforce
  // sum(cluster_sizes) <= n.
  void validate(std::size_t max_candidates = 0) const;
};

// Parses and validates a trace file (UTF-8 JSON, top-level array of
// instance objects, schema "bdg-trace/1"). Violations are reported with the
// instance_id and field path.
std::vector<InstanceTrace> load_trace(const std::filesystem::path& path);

void save_trace(const std::filesystem::path& path, const std::vector<InstanceTrace>& traces);

// Deterministic in spec.seed. Candidate embeddings are unit vectors realized
// from the Gram matrix of the prescribed distances (modified Cholesky;
// throws infeasible_geometry when the pattern is not positive semidefinite),
// so ground_metric reproduces intra/inter distances within 1e-6. Scores
// favor the correct cluster with mass split evenly inside it, perturbed by
// the respective noise. gold_answer is the first member of the correct
// cluster.
InstanceTrace synthesize_instance(const SyntheticSpec& spec);

// Assembles InitScores for the candidates accepted from this trace.
InitScores scores_for(const InstanceTrace& trace, const CandidateSet& set);

// Samples ordered as (raw_text, embedding) pairs for build_candidate_set.
std::vector<std::pair<std::string, std::vector<double>>> sample_pairs(const InstanceTrace& trace);

}  // namespace bdg
