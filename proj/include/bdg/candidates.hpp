#pragma once
// Candidate-set construction: canonicalize raw answer strings, deduplicate
// surface variants, and derive the pairwise semantic distance matrix from
// candidate embeddings.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bdg/core.hpp"
#include "bdg/error.hpp"

namespace bdg {

struct Candidate {
  std::string raw_text;
  std::string canonical_text;
  std::vector<double> embedding;

  bool operator==(const Candidate&) const = default;
};

class CandidateSet {
 public:
  explicit CandidateSet(std::vector<Candidate> candidates);

  std::size_t size() const noexcept { return candidates_.size(); }
  const Candidate& operator[](std::size_t i) const noexcept { return candidates_[i]; }
  const std::vector<Candidate>& candidates() const noexcept { return candidates_; }

 private:
  std::vector<Candidate> candidates_;
};

// Pairwise cosine distance matrix D over the candidate set. Zero diagonal,
// symmetric, entries in [0, 2]. Cosine distance is a pseudo-metric only;
// the W1 linear program stays well-defined, so no triangle repair is applied.
class GroundMetric {
 public:
  static GroundMetric from_matrix(std::vector<std::vector<double>> rows);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * n_ + j]; }

 private:
  GroundMetric(std::size_t n, std::vector<double> d) : n_(n), d_(std::move(d)) {}
  friend GroundMetric ground_metric(const CandidateSet& set);

  std::size_t n_ = 0;
  std::vector<double> d_;  // row-major n*n
};

// Reduce a raw model answer to its canonical core form:
//   1. truncate at the first sentence boundary (./!/? followed by whitespace
//      or end of string),
//   2. strip leading filler prefixes and articles (fixed case-insensitive
//      list, longest match first, repeated until none applies),
//   3. strip surrounding punctuation and collapse internal whitespace,
//   4. lowercase.
// The pass is iterated to a fixed point, which makes the result idempotent.
// Throws empty_after_canonicalization when nothing remains.
std::string canonicalize(const std::string& raw);

// Same pipeline with extra filler prefixes appended to the frozen defaults.
std::string canonicalize(const std::string& raw, const std::vector<std::string>& extra_prefixes);

// The frozen default prefix list (exposed for documentation and tests).
const std::vector<std::string>& default_filler_prefixes();

// Canonicalizes samples in order, drops exact-string duplicates of already
// accepted canonical texts, and stops after n_candidates acceptances.
// Samples that canonicalize to nothing are skipped; if every sample does,
// throws no_valid_candidates.
CandidateSet build_candidate_set(
    const std::vector<std::pair<std::string, std::vector<double>>>& samples,
    const GameConfig& config);

// D_ij = 1 - cos(e_i, e_j), clamped to [0, 2], exact zero diagonal.
GroundMetric ground_metric(const CandidateSet& set);

}  // namespace bdg
