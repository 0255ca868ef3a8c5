#pragma once
// HTTP bridge to a live scoring service. Optional backend: the trace and
// synthetic backends cover everything the harness needs offline.

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bdg/core.hpp"
#include "bdg/game.hpp"

namespace bdg {

struct RemoteOptions {
  int max_attempts = 3;  // total tries per request, transient failures only
  std::chrono::milliseconds initial_backoff{250};  // doubled after each failure
  std::chrono::seconds request_timeout{30};
  int max_tokens = 32;  // forwarded to /sample
};

// Issues one POST /score per (candidate, condition, role) and assembles
// InitScores in candidate order. Transient failures (5xx, timeouts,
// connection errors) are retried with exponential backoff; protocol
// violations (malformed JSON, logprob > 0, 4xx) are not.
InitScores remote_score(const std::string& endpoint, const std::string& question,
                        const std::optional<std::string>& image_ref,
                        const std::vector<std::string>& candidates,
                        const RemoteOptions& options = {});

// Temperature-diverse sampling via POST /sample: cycles through the config's
// temperatures until n_candidates unique canonical forms are collected or
// max_sampling_calls requests have been made. Returns every raw sample with
// its embedding, in request order.
std::vector<std::pair<std::string, std::vector<double>>> remote_sample(
    const std::string& endpoint, const std::string& question,
    const std::optional<std::string>& image_ref, const GameConfig& cfg,
    const RemoteOptions& options = {});

}  // namespace bdg
