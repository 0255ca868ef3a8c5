#include "bdg/candidates.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_set>

namespace bdg {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
char to_lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

// Rule 1: keep everything before the first ./!/? that ends the text or is
// followed by whitespace. Decimal points ("2.5 cm") survive.
std::string truncate_first_sentence(const std::string& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.' || c == '!' || c == '?') {
      if (i + 1 == s.size() || is_space(s[i + 1])) return s.substr(0, i);
    }
  }
  return s;
}

bool prefix_matches(const std::string& text, const std::string& prefix) {
  if (text.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (to_lower(text[i]) != to_lower(prefix[i])) return false;
  }
  // A prefix ending in a word character must end at a word boundary, so
  // "the" never bites into "theory".
  if (is_alnum(prefix.back())) {
    if (text.size() > prefix.size() && is_alnum(text[prefix.size()])) return false;
  }
  return true;
}

// Rule 2: repeatedly strip the longest matching filler prefix or article.
std::string strip_filler_prefixes(std::string text, const std::vector<std::string>& prefixes) {
  bool changed = true;
  while (changed) {
    changed = false;
    text = trim(text);
    for (const std::string& p : prefixes) {
      if (prefix_matches(text, p)) {
        text = trim(text.substr(p.size()));
        changed = true;
        break;
      }
    }
  }
  return text;
}

// Rule 3: strip leading/trailing punctuation and whitespace, collapse
// internal whitespace runs to single spaces.
std::string strip_punct_collapse_ws(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (is_punct(s[b]) || is_space(s[b]))) ++b;
  while (e > b && (is_punct(s[e - 1]) || is_space(s[e - 1]))) --e;
  std::string out;
  out.reserve(e - b);
  bool in_ws = false;
  for (std::size_t i = b; i < e; ++i) {
    if (is_space(s[i])) {
      in_ws = true;
      continue;
    }
    if (in_ws && !out.empty()) out.push_back(' ');
    in_ws = false;
    out.push_back(s[i]);
  }
  return out;
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), to_lower);
  return s;
}

std::string canonical_pass(const std::string& input, const std::vector<std::string>& prefixes) {
  std::string s = truncate_first_sentence(input);
  s = strip_filler_prefixes(s, prefixes);
  s = strip_punct_collapse_ws(s);
  return lowercase(s);
}

std::vector<std::string> sorted_longest_first(std::vector<std::string> prefixes) {
  std::stable_sort(prefixes.begin(), prefixes.end(),
                   [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
  return prefixes;
}

}  // namespace

const std::vector<std::string>& default_filler_prefixes() {
  static const std::vector<std::string> kPrefixes = sorted_longest_first({
      "the answer is", "this is", "it is", "the image shows", "answer:", "a:",
      "a", "an", "the",
  });
  return kPrefixes;
}

std::string canonicalize(const std::string& raw, const std::vector<std::string>& extra_prefixes) {
  std::vector<std::string> prefixes = default_filler_prefixes();
  prefixes.insert(prefixes.end(), extra_prefixes.begin(), extra_prefixes.end());
  prefixes = sorted_longest_first(std::move(prefixes));

  std::string cur = trim(raw);
  if (cur.empty()) fail(errc::empty_after_canonicalization, "input is blank");
  // Iterate the pass to a fixed point so canonicalize is idempotent even when
  // punctuation stripping uncovers a new filler prefix.
  for (;;) {
    std::string next = canonical_pass(cur, prefixes);
    if (next.empty()) {
      fail(errc::empty_after_canonicalization, "nothing remains of '" + raw + "'");
    }
    if (next == cur) return next;
    cur = std::move(next);
  }
}

std::string canonicalize(const std::string& raw) { return canonicalize(raw, {}); }

CandidateSet::CandidateSet(std::vector<Candidate> candidates)
    : candidates_(std::move(candidates)) {
  if (candidates_.empty()) fail(errc::no_valid_candidates, "candidate set is empty");
  std::unordered_set<std::string> seen;
  for (const Candidate& c : candidates_) {
    if (c.canonical_text.empty()) {
      fail(errc::empty_after_canonicalization, "candidate with empty canonical text");
    }
    if (!seen.insert(c.canonical_text).second) {
      fail(errc::invalid_config, "duplicate canonical text '" + c.canonical_text + "'");
    }
  }
}

CandidateSet build_candidate_set(
    const std::vector<std::pair<std::string, std::vector<double>>>& samples,
    const GameConfig& config) {
  if (samples.empty()) fail(errc::no_valid_candidates, "no samples provided");
  const std::size_t dim = samples.front().second.size();
  std::vector<Candidate> accepted;
  std::unordered_set<std::string> seen;
  for (const auto& [raw, embedding] : samples) {
    if (embedding.size() != dim) {
      fail(errc::embedding_dim_mismatch,
           "sample embedding dimension " + std::to_string(embedding.size()) +
               " != " + std::to_string(dim));
    }
    if (accepted.size() >= config.n_candidates) break;
    std::string canon;
    try {
      canon = canonicalize(raw);
    } catch (const Error& e) {
      if (e.code() == errc::empty_after_canonicalization) continue;
      throw;
    }
    if (!seen.insert(canon).second) continue;
    double norm_sq = 0.0;
    for (double x : embedding) norm_sq += x * x;
    if (!(std::sqrt(norm_sq) >= 1e-12)) {
      fail(errc::zero_norm_embedding, "sample '" + raw + "' has near-zero embedding norm");
    }
    accepted.push_back(Candidate{raw, std::move(canon), embedding});
  }
  if (accepted.empty()) {
    fail(errc::no_valid_candidates, "every sample canonicalized to nothing");
  }
  return CandidateSet(std::move(accepted));
}

GroundMetric GroundMetric::from_matrix(std::vector<std::vector<double>> rows) {
  const std::size_t n = rows.size();
  if (n == 0) fail(errc::dimension_mismatch, "metric must be non-empty");
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) fail(errc::dimension_mismatch, "metric must be square");
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = rows[i][j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i * n + i] != 0.0) fail(errc::invalid_config, "metric diagonal must be exactly 0");
    for (std::size_t j = 0; j < n; ++j) {
      double v = d[i * n + j];
      if (!std::isfinite(v)) fail(errc::non_finite, "metric contains NaN or infinity");
      if (v < 0.0 || v > 2.0) fail(errc::invalid_config, "metric entries must lie in [0, 2]");
      if (std::abs(v - d[j * n + i]) > 1e-12) {
        fail(errc::invalid_config, "metric must be symmetric within 1e-12");
      }
    }
  }
  return GroundMetric(n, std::move(d));
}

GroundMetric ground_metric(const CandidateSet& set) {
  const std::size_t n = set.size();
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (double x : set[i].embedding) sq += x * x;
    norms[i] = std::sqrt(sq);
    if (!(norms[i] >= 1e-12)) {
      fail(errc::zero_norm_embedding,
           "candidate '" + set[i].canonical_text + "' has near-zero embedding norm");
    }
  }
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& a = set[i].embedding;
      const auto& b = set[j].embedding;
      if (a.size() != b.size()) {
        fail(errc::embedding_dim_mismatch, "candidate embeddings differ in dimension");
      }
      double dot = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
      double dist = 1.0 - dot / (norms[i] * norms[j]);
      dist = std::clamp(dist, 0.0, 2.0);
      d[i * n + j] = dist;
      d[j * n + i] = dist;  // mirrored, so symmetry is exact
    }
  }
  return GroundMetric(n, std::move(d));
}

}  // namespace bdg
