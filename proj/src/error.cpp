#include "bdg/error.hpp"

namespace bdg {

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::all_zero: return "AllZero";
    case errc::non_finite: return "NonFinite";
    case errc::invalid_simplex: return "InvalidSimplex";
    case errc::invalid_config: return "InvalidConfig";
    case errc::empty_after_canonicalization: return "EmptyAfterCanonicalization";
    case errc::no_valid_candidates: return "NoValidCandidates";
    case errc::zero_norm_embedding: return "ZeroNormEmbedding";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::infeasible_marginals: return "InfeasibleMarginals";
    case errc::too_large: return "TooLarge";
    case errc::not_grid_representable: return "NotGridRepresentable";
    case errc::zero_column: return "ZeroColumn";
    case errc::invalid_scores: return "InvalidScores";
    case errc::parse_error: return "ParseError";
    case errc::schema_error: return "SchemaError";
    case errc::embedding_dim_mismatch: return "EmbeddingDimMismatch";
    case errc::infeasible_geometry: return "InfeasibleGeometry";
    case errc::timeout: return "Timeout";
    case errc::protocol_error: return "ProtocolError";
    case errc::server_error: return "ServerError";
    case errc::insufficient_convergence: return "InsufficientConvergence";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

}  // namespace bdg
