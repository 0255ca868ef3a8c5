#include "bdg/remote.hpp"

#include <cmath>
#include <thread>
#include <unordered_set>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "bdg/candidates.hpp"

namespace bdg {

using nlohmann::json;

namespace {

json post_with_retries(httplib::Client& client, const std::string& path, const json& body,
                       const RemoteOptions& options, const std::string& context) {
  auto backoff = options.initial_backoff;
  std::string last_failure = "no attempts made";
  for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Result res = client.Post(path, body.dump(), "application/json");
    if (!res) {
      bool timed_out = res.error() == httplib::Error::ConnectionTimeout ||
                       res.error() == httplib::Error::Read || res.error() == httplib::Error::Write;
      last_failure = timed_out ? "request timed out" : httplib::to_string(res.error());
      if (attempt == options.max_attempts) {
        fail(timed_out ? errc::timeout : errc::server_error,
             context + ": " + last_failure + " after " + std::to_string(attempt) + " attempts");
      }
      continue;  // transport-level failures are transient
    }
    if (res->status >= 500) {
      last_failure = "HTTP " + std::to_string(res->status);
      if (attempt == options.max_attempts) {
        fail(errc::server_error,
             context + ": " + last_failure + " after " + std::to_string(attempt) + " attempts");
      }
      continue;
    }
    if (res->status != 200) {
      fail(errc::protocol_error, context + ": unexpected HTTP " + std::to_string(res->status));
    }
    try {
      return json::parse(res->body);
    } catch (const json::exception& e) {
      fail(errc::protocol_error, context + ": response is not valid JSON (" + e.what() + ")");
    }
  }
  fail(errc::server_error, context + ": " + last_failure);
}

double extract_logprob(const json& response, const std::string& context) {
  if (!response.is_object() || !response.contains("logprob") ||
      !response["logprob"].is_number()) {
    fail(errc::protocol_error, context + ": response must carry a numeric 'logprob'");
  }
  double lp = response["logprob"].get<double>();
  if (!std::isfinite(lp)) fail(errc::protocol_error, context + ": logprob is not finite");
  if (lp > 0.0) fail(errc::protocol_error, context + ": logprob must be <= 0");
  return lp;
}

}  // namespace

InitScores remote_score(const std::string& endpoint, const std::string& question,
                        const std::optional<std::string>& image_ref,
                        const std::vector<std::string>& candidates,
                        const RemoteOptions& options) {
  httplib::Client client(endpoint);
  client.set_connection_timeout(options.request_timeout);
  client.set_read_timeout(options.request_timeout);

  InitScores scores;
  scores.generator_logprob.resize(candidates.size());
  scores.verifier_logprob.resize(candidates.size());

  static constexpr const char* kConditions[2] = {"correct", "incorrect"};
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t s = 0; s < 2; ++s) {
      for (const char* role : {"generator", "verifier"}) {
        json body{{"question", question},
                  {"candidate", candidates[i]},
                  {"condition", kConditions[s]},
                  {"role", role}};
        body["image_ref"] = image_ref ? json(*image_ref) : json(nullptr);
        std::string context =
            std::string(role) + " score for ('" + candidates[i] + "', " + kConditions[s] + ")";
        double lp = extract_logprob(post_with_retries(client, "/score", body, options, context),
                                    context);
        if (std::string(role) == "generator") {
          scores.generator_logprob[i][s] = lp;
        } else {
          scores.verifier_logprob[i][s] = lp;
        }
      }
    }
  }
  scores.validate();
  return scores;
}

std::vector<std::pair<std::string, std::vector<double>>> remote_sample(
    const std::string& endpoint, const std::string& question,
    const std::optional<std::string>& image_ref, const GameConfig& cfg,
    const RemoteOptions& options) {
  cfg.validate();
  if (cfg.temperatures.empty()) {
    fail(errc::invalid_config, "sampling requires at least one temperature");
  }
  httplib::Client client(endpoint);
  client.set_connection_timeout(options.request_timeout);
  client.set_read_timeout(options.request_timeout);

  std::vector<std::pair<std::string, std::vector<double>>> samples;
  std::unordered_set<std::string> unique_canonicals;
  for (std::size_t call = 0; call < cfg.max_sampling_calls; ++call) {
    if (unique_canonicals.size() >= cfg.n_candidates) break;
    double temperature = cfg.temperatures[call % cfg.temperatures.size()];
    json body{{"question", question},
              {"temperature", temperature},
              {"max_tokens", options.max_tokens}};
    body["image_ref"] = image_ref ? json(*image_ref) : json(nullptr);
    std::string context = "sample call " + std::to_string(call + 1);
    json response = post_with_retries(client, "/sample", body, options, context);
    if (!response.is_object() || !response.contains("text") || !response["text"].is_string() ||
        !response.contains("embedding") || !response["embedding"].is_array()) {
      fail(errc::protocol_error, context + ": response must carry 'text' and 'embedding'");
    }
    std::string text = response["text"].get<std::string>();
    std::vector<double> embedding;
    for (const json& x : response["embedding"]) {
      if (!x.is_number()) fail(errc::protocol_error, context + ": embedding must be numeric");
      embedding.push_back(x.get<double>());
    }
    samples.emplace_back(text, std::move(embedding));
    try {
      unique_canonicals.insert(canonicalize(text));
    } catch (const Error& e) {
      if (e.code() != errc::empty_after_canonicalization) throw;
    }
  }
  return samples;
}

}  // namespace bdg
