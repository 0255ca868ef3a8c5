#pragma once
// Exact discrete Wasserstein-1 distance between two simplices under a ground
// metric, solved with the transportation simplex, plus an exhaustive
// enumeration oracle used by the test suites.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bdg/candidates.hpp"
#include "bdg/core.hpp"

namespace bdg {

// Feasible coupling of two marginals: row sums match the source, column sums
// the target, all entries non-negative.
struct TransportPlan {
  std::size_t n = 0;
  std::vector<double> gamma;  // row-major n*n

  double at(std::size_t i, std::size_t j) const noexcept { return gamma[i * n + j]; }
  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;
};

struct TransportResult {
  double cost = 0.0;
  TransportPlan plan;
};

// min over feasible gamma of sum_ij gamma_ij * D_ij.
//
// Northwest-corner start, MODI pivoting with Bland's rule (first negative
// reduced cost in row-major order enters, first minimum-flow cell on the
// cycle leaves), and a 1e-12*i supply perturbation against degenerate bases.
// The perturbation is removed before the cost and plan are returned: flows
// are re-propagated through the final basis tree with the unperturbed
// marginals. The returned plan is a feasible minimizer but not unique in
// general; only its cost and feasibility are contract-bound.
TransportResult wasserstein1(const Simplex& p, const Simplex& q, const GroundMetric& metric);

// Exhaustive enumeration over integer-valued plans on the scaled grid.
// Exponential time; test oracle only. Requires n <= 6 and both marginals
// representable as integers/grid within 1e-9.
double wasserstein1_oracle(const Simplex& p, const Simplex& q, const GroundMetric& metric,
                           std::int64_t grid);

}  // namespace bdg
