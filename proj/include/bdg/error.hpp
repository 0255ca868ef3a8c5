#pragma once

#include <stdexcept>
#include <string>

namespace bdg {

// Every failure mode the library reports. The CLI maps codes to exit codes;
// tests match on the code rather than the message text.
enum class errc {
  all_zero,
  non_finite,
  invalid_simplex,
  invalid_config,
  empty_after_canonicalization,
  no_valid_candidates,
  zero_norm_embedding,
  dimension_mismatch,
  infeasible_marginals,
  too_large,
  not_grid_representable,
  zero_column,
  invalid_scores,
  parse_error,
  schema_error,
  embedding_dim_mismatch,
  infeasible_geometry,
  timeout,
  protocol_error,
  server_error,
  insufficient_convergence,
  io_error,
};

const char* errc_name(errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace bdg
