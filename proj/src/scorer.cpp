#include "bdg/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bdg/rng.hpp"

namespace bdg {

using nlohmann::json;

namespace {

// Base logit gaps separating the correct cluster from the rest before noise
// is applied. Kept moderate so the coupling term, not the prior, dominates
// the game dynamics.
constexpr double kGeneratorGap = 1.0;
constexpr double kVerifierGap = 1.0;

[[noreturn]] void schema_fail(const std::string& context, const std::string& what) {
  fail(errc::schema_error, context + ": " + what);
}

const json& require_field(const json& j, const char* key, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) schema_fail(ctx, std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const json& j, const char* key, const std::string& ctx) {
  const json& f = require_field(j, key, ctx);
  if (!f.is_string()) schema_fail(ctx + "." + key, "expected string");
  return f.get<std::string>();
}

double require_number(const json& j, const char* key, const std::string& ctx) {
  const json& f = require_field(j, key, ctx);
  if (!f.is_number()) schema_fail(ctx + "." + key, "expected number");
  double v = f.get<double>();
  if (!std::isfinite(v)) schema_fail(ctx + "." + key, "must be finite");
  return v;
}

std::vector<double> read_embedding(const json& f, const std::string& ctx) {
  if (!f.is_array() || f.empty()) schema_fail(ctx, "expected non-empty number array");
  std::vector<double> out;
  out.reserve(f.size());
  for (const json& x : f) {
    if (!x.is_number()) schema_fail(ctx, "expected number array");
    double v = x.get<double>();
    if (!std::isfinite(v)) schema_fail(ctx, "embedding entries must be finite");
    out.push_back(v);
  }
  return out;
}

LogProbPair read_logprob_pair(const json& f, const std::string& ctx) {
  if (!f.is_object()) schema_fail(ctx, "expected {correct, incorrect} object");
  LogProbPair pair;
  pair.correct = require_number(f, "correct", ctx);
  pair.incorrect = require_number(f, "incorrect", ctx);
  if (pair.correct > 0.0 || pair.incorrect > 0.0) {
    schema_fail(ctx, "log-probabilities must be <= 0");
  }
  return pair;
}

std::map<std::string, LogProbPair> read_logprob_map(const json& f, const std::string& ctx) {
  if (!f.is_object()) schema_fail(ctx, "expected object keyed by canonical text");
  std::map<std::string, LogProbPair> out;
  for (auto it = f.begin(); it != f.end(); ++it) {
    out[it.key()] = read_logprob_pair(it.value(), ctx + "." + it.key());
  }
  return out;
}

InstanceTrace parse_instance(const json& j, std::size_t index) {
  std::string ctx = "instance[" + std::to_string(index) + "]";
  if (!j.is_object()) schema_fail(ctx, "expected object");
  InstanceTrace trace;
  trace.instance_id = require_string(j, "instance_id", ctx);
  ctx = trace.instance_id;

  std::string schema = require_string(j, "schema", ctx);
  if (schema != kTraceSchema) {
    schema_fail(ctx + ".schema", "expected '" + std::string(kTraceSchema) + "', got '" + schema + "'");
  }
  trace.question = require_string(j, "question", ctx);
  if (j.contains("image_ref")) {
    if (!j["image_ref"].is_string()) schema_fail(ctx + ".image_ref", "expected string");
    trace.image_ref = j["image_ref"].get<std::string>();
  }
  trace.gold_answer = require_string(j, "gold_answer", ctx);

  const json& samples = require_field(j, "samples", ctx);
  if (!samples.is_array() || samples.empty()) {
    schema_fail(ctx + ".samples", "expected non-empty array");
  }
  std::size_t dim = 0;
  std::size_t greedy_count = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::string sctx = ctx + ".samples[" + std::to_string(i) + "]";
    const json& s = samples[i];
    if (!s.is_object()) schema_fail(sctx, "expected object");
    TraceSample sample;
    sample.raw_text = require_string(s, "raw_text", sctx);
    sample.temperature = require_number(s, "temperature", sctx);
    sample.embedding = read_embedding(require_field(s, "embedding", sctx), sctx + ".embedding");
    if (s.contains("greedy")) {
      if (!s["greedy"].is_boolean()) schema_fail(sctx + ".greedy", "expected bool");
      sample.greedy = s["greedy"].get<bool>();
      if (sample.greedy) ++greedy_count;
    }
    if (dim == 0) {
      dim = sample.embedding.size();
    } else if (sample.embedding.size() != dim) {
      fail(errc::embedding_dim_mismatch,
           sctx + ".embedding: dimension " + std::to_string(sample.embedding.size()) +
               " != " + std::to_string(dim));
    }
    trace.samples.push_back(std::move(sample));
  }
  if (greedy_count > 1) schema_fail(ctx + ".samples", "more than one greedy-designated sample");

  trace.generator_logprob =
      read_logprob_map(require_field(j, "generator_logprob", ctx), ctx + ".generator_logprob");
  trace.verifier_logprob =
      read_logprob_map(require_field(j, "verifier_logprob", ctx), ctx + ".verifier_logprob");

  if (j.contains("gold_embedding")) {
    trace.gold_embedding = read_embedding(j["gold_embedding"], ctx + ".gold_embedding");
    if (trace.gold_embedding->size() != dim) {
      fail(errc::embedding_dim_mismatch,
           ctx + ".gold_embedding: dimension " + std::to_string(trace.gold_embedding->size()) +
               " != " + std::to_string(dim));
    }
  }

  // Coverage: both matrices must score every canonical text the samples can
  // produce, for any candidate cap the game config might use later.
  std::set<std::string> canonicals;
  for (const TraceSample& s : trace.samples) {
    try {
      canonicals.insert(canonicalize(s.raw_text));
    } catch (const Error& e) {
      if (e.code() != errc::empty_after_canonicalization) throw;
    }
  }
  for (const std::string& canon : canonicals) {
    if (!trace.generator_logprob.count(canon)) {
      schema_fail(ctx + ".generator_logprob", "missing entry for candidate '" + canon + "'");
    }
    if (!trace.verifier_logprob.count(canon)) {
      schema_fail(ctx + ".verifier_logprob", "missing entry for candidate '" + canon + "'");
    }
  }
  return trace;
}

json sample_to_json(const TraceSample& s) {
  json j{{"raw_text", s.raw_text}, {"temperature", s.temperature}, {"embedding", s.embedding}};
  if (s.greedy) j["greedy"] = true;
  return j;
}

json logprob_map_to_json(const std::map<std::string, LogProbPair>& m) {
  json j = json::object();
  for (const auto& [key, pair] : m) {
    j[key] = json{{"correct", pair.correct}, {"incorrect", pair.incorrect}};
  }
  return j;
}

json instance_to_json(const InstanceTrace& t) {
  json j;
  j["schema"] = kTraceSchema;
  j["instance_id"] = t.instance_id;
  j["question"] = t.question;
  if (t.image_ref) j["image_ref"] = *t.image_ref;
  json samples = json::array();
  for (const TraceSample& s : t.samples) samples.push_back(sample_to_json(s));
  j["samples"] = std::move(samples);
  j["generator_logprob"] = logprob_map_to_json(t.generator_logprob);
  j["verifier_logprob"] = logprob_map_to_json(t.verifier_logprob);
  j["gold_answer"] = t.gold_answer;
  if (t.gold_embedding) j["gold_embedding"] = *t.gold_embedding;
  return j;
}

}  // namespace

std::vector<InstanceTrace> load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(errc::parse_error, "cannot open trace file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(errc::parse_error, "trace file '" + path.string() + "': " + e.what());
  }
  if (!doc.is_array()) {
    fail(errc::schema_error, "trace file '" + path.string() + "': top level must be an array");
  }
  std::vector<InstanceTrace> traces;
  traces.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    traces.push_back(parse_instance(doc[i], i));
  }
  return traces;
}

void save_trace(const std::filesystem::path& path, const std::vector<InstanceTrace>& traces) {
  json doc = json::array();
  for (const InstanceTrace& t : traces) doc.push_back(instance_to_json(t));
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot write trace file '" + path.string() + "'");
  out << doc.dump(2) << '\n';
  if (!out) fail(errc::io_error, "failed writing trace file '" + path.string() + "'");
}

std::size_t SyntheticSpec::total_candidates() const {
  return std::accumulate(cluster_sizes.begin(), cluster_sizes.end(), std::size_t{0});
}

void SyntheticSpec::validate(std::size_t max_candidates) const {
  if (n_clusters < 1) fail(errc::invalid_config, "n_clusters must be >= 1");
  if (cluster_sizes.size() != n_clusters) {
    fail(errc::invalid_config, "cluster_sizes length must equal n_clusters");
  }
  for (std::size_t s : cluster_sizes) {
    if (s < 1) fail(errc::invalid_config, "cluster sizes must be >= 1");
  }
  if (intra_cluster_distance < 0.0 || intra_cluster_distance > 2.0 ||
      inter_cluster_distance < 0.0 || inter_cluster_distance > 2.0) {
    fail(errc::invalid_config, "cluster distances must lie in [0, 2]");
  }
  if (!(intra_cluster_distance < inter_cluster_distance)) {
    fail(errc::invalid_config, "intra-cluster distance must be < inter-cluster distance");
  }
  if (generator_noise < 0.0 || verifier_noise < 0.0) {
    fail(errc::invalid_config, "noise levels must be >= 0");
  }
  if (correct_cluster >= n_clusters) {
    fail(errc::invalid_config, "correct_cluster index out of range");
  }
  if (max_candidates > 0 && total_candidates() > max_candidates) {
    fail(errc::invalid_config, "sum of cluster sizes exceeds the candidate cap");
  }
}

namespace {

// Embeddings at prescribed pairwise cosine distances: factor the Gram matrix
// G_ij = 1 - d_ij with a modified Cholesky that tolerates zero pivots
// (duplicate points when the intra distance is 0). Rows of the factor are
// the unit-norm embeddings.
std::vector<std::vector<double>> embeddings_from_distances(
    const std::vector<std::vector<double>>& dist) {
  const std::size_t n = dist.size();
  constexpr double tol = 1e-9;
  std::vector<std::vector<double>> L(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    double diag = 1.0;  // G_jj
    for (std::size_t k = 0; k < j; ++k) diag -= L[j][k] * L[j][k];
    if (diag < -tol) {
      fail(errc::infeasible_geometry,
           "prescribed distance pattern is not positive semidefinite");
    }
    if (diag <= tol) {
      L[j][j] = 0.0;
      for (std::size_t i = j + 1; i < n; ++i) {
        double num = 1.0 - dist[i][j];
        for (std::size_t k = 0; k < j; ++k) num -= L[i][k] * L[j][k];
        if (std::abs(num) > 1e-7) {
          fail(errc::infeasible_geometry,
               "prescribed distance pattern admits no embedding (rank-deficient column)");
        }
        L[i][j] = 0.0;
      }
      continue;
    }
    L[j][j] = std::sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      double num = 1.0 - dist[i][j];
      for (std::size_t k = 0; k < j; ++k) num -= L[i][k] * L[j][k];
      L[i][j] = num / L[j][j];
    }
  }
  return L;
}

}  // namespace

InstanceTrace synthesize_instance(const SyntheticSpec& spec) {
  spec.validate();
  const std::size_t n = spec.total_candidates();

  // Cluster index per candidate, candidates listed cluster by cluster.
  std::vector<std::size_t> cluster_of;
  cluster_of.reserve(n);
  for (std::size_t c = 0; c < spec.n_clusters; ++c) {
    for (std::size_t m = 0; m < spec.cluster_sizes[c]; ++m) cluster_of.push_back(c);
  }

  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      dist[i][j] = (cluster_of[i] == cluster_of[j]) ? spec.intra_cluster_distance
                                                    : spec.inter_cluster_distance;
    }
  }
  std::vector<std::vector<double>> embeddings = embeddings_from_distances(dist);

  std::vector<std::string> names;
  names.reserve(n);
  {
    std::vector<std::size_t> member(spec.n_clusters, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t c = cluster_of[i];
      names.push_back("c" + std::to_string(c) + "v" + std::to_string(member[c]++));
    }
  }

  XorShift64Star rng(spec.seed);
  auto noisy_logits = [&](double magnitude, double noise, std::size_t signal) {
    std::vector<double> logits(n);
    for (std::size_t i = 0; i < n; ++i) {
      bool in_correct = cluster_of[i] == spec.correct_cluster;
      bool favored = (signal == kCorrect) ? in_correct : !in_correct;
      logits[i] = (favored ? magnitude : 0.0) + noise * rng.next_gaussian();
    }
    return logits;
  };

  Simplex gen_correct = softmax_from_logits(noisy_logits(kGeneratorGap, spec.generator_noise, kCorrect));
  Simplex gen_incorrect =
      softmax_from_logits(noisy_logits(kGeneratorGap, spec.generator_noise, kIncorrect));

  std::vector<double> verifier_q(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool in_correct = cluster_of[i] == spec.correct_cluster;
    double logit = (in_correct ? kVerifierGap : -kVerifierGap) +
                   spec.verifier_noise * rng.next_gaussian();
    // Clamped away from {0, 1} so both label log-probabilities stay finite.
    verifier_q[i] = std::clamp(1.0 / (1.0 + std::exp(-logit)), 1e-12, 1.0 - 1e-12);
  }

  InstanceTrace trace;
  trace.instance_id = "synth-" + std::to_string(spec.seed);
  trace.question = "synthetic instance (seed " + std::to_string(spec.seed) + ")";
  for (std::size_t i = 0; i < n; ++i) {
    trace.samples.push_back(TraceSample{names[i], 0.5, embeddings[i], false});
    trace.generator_logprob[names[i]] =
        LogProbPair{std::log(gen_correct[i]), std::log(gen_incorrect[i])};
    trace.verifier_logprob[names[i]] =
        LogProbPair{std::log(verifier_q[i]), std::log(1.0 - verifier_q[i])};
  }
  // Greedy designation: the sample the generator would emit at its argmax.
  std::size_t greedy = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (gen_correct[i] > gen_correct[greedy]) greedy = i;
  }
  trace.samples[greedy].greedy = true;

  std::size_t gold_index = 0;
  while (cluster_of[gold_index] != spec.correct_cluster) ++gold_index;
  trace.gold_answer = names[gold_index];
  trace.gold_embedding = embeddings[gold_index];
  return trace;
}

std::vector<std::pair<std::string, std::vector<double>>> sample_pairs(const InstanceTrace& trace) {
  std::vector<std::pair<std::string, std::vector<double>>> out;
  out.reserve(trace.samples.size());
  for (const TraceSample& s : trace.samples) out.emplace_back(s.raw_text, s.embedding);
  return out;
}

InitScores scores_for(const InstanceTrace& trace, const CandidateSet& set) {
  InitScores scores;
  scores.generator_logprob.resize(set.size());
  scores.verifier_logprob.resize(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const std::string& canon = set[i].canonical_text;
    auto g = trace.generator_logprob.find(canon);
    auto v = trace.verifier_logprob.find(canon);
    if (g == trace.generator_logprob.end() || v == trace.verifier_logprob.end()) {
      fail(errc::schema_error,
           trace.instance_id + ": no scores recorded for candidate '" + canon + "'");
    }
    scores.generator_logprob[i] = {g->second.correct, g->second.incorrect};
    scores.verifier_logprob[i] = {v->second.correct, v->second.incorrect};
  }
  scores.validate();
  return scores;
}

}  // namespace bdg
