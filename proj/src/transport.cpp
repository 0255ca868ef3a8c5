#include "bdg/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bdg {

namespace {

constexpr double kPerturbation = 1e-12;      // per-row supply perturbation step
constexpr double kReducedCostTol = -1e-12;   // entering threshold for Bland's rule
constexpr double kNegativeFlowTol = -1e-9;   // tolerated round-off after de-perturbation

struct BasisCell {
  std::size_t row;
  std::size_t col;
  double flow;
};

// Duals for the current basis tree: u[0] = 0, the rest propagated along
// basic cells via D_ij = u_i + v_j.
void compute_duals(const std::vector<BasisCell>& basis, const GroundMetric& d, std::size_t n,
                   std::vector<double>& u, std::vector<double>& v) {
  u.assign(n, std::numeric_limits<double>::quiet_NaN());
  v.assign(n, std::numeric_limits<double>::quiet_NaN());
  u[0] = 0.0;
  bool progress = true;
  while (progress) {
    progress = false;
    for (const BasisCell& c : basis) {
      bool ur = !std::isnan(u[c.row]);
      bool vc = !std::isnan(v[c.col]);
      if (ur && !vc) {
        v[c.col] = d(c.row, c.col) - u[c.row];
        progress = true;
      } else if (!ur && vc) {
        u[c.row] = d(c.row, c.col) - v[c.col];
        progress = true;
      }
    }
  }
}

// Unique alternating cycle created by adding (erow, ecol) to the basis tree.
// Returned as the cell sequence starting with the entering cell; odd
// positions receive -theta, even positions +theta.
std::vector<std::size_t> find_cycle(const std::vector<BasisCell>& basis, std::size_t n,
                                    std::size_t erow, std::size_t ecol) {
  // Bipartite adjacency over basis cells: node ids 0..n-1 rows, n..2n-1 cols.
  std::vector<std::vector<std::size_t>> adj(2 * n);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    adj[basis[k].row].push_back(k);
    adj[n + basis[k].col].push_back(k);
  }
  // DFS from the entering column's node back to the entering row.
  std::vector<std::size_t> parent_cell(2 * n, std::size_t(-1));
  std::vector<std::size_t> parent_node(2 * n, std::size_t(-1));
  std::vector<bool> visited(2 * n, false);
  std::vector<std::size_t> stack{n + ecol};
  visited[n + ecol] = true;
  while (!stack.empty()) {
    std::size_t node = stack.back();
    stack.pop_back();
    if (node == erow) break;
    for (std::size_t k : adj[node]) {
      std::size_t next = (node < n) ? n + basis[k].col : basis[k].row;
      if (!visited[next]) {
        visited[next] = true;
        parent_cell[next] = k;
        parent_node[next] = node;
        stack.push_back(next);
      }
    }
  }
  std::vector<std::size_t> path;  // basis-cell indices from erow back to ecol
  std::size_t node = erow;
  while (node != n + ecol) {
    path.push_back(parent_cell[node]);
    node = parent_node[node];
  }
  return path;
}

double plan_cost(const std::vector<BasisCell>& basis, const GroundMetric& d) {
  double cost = 0.0;
  for (const BasisCell& c : basis) cost += c.flow * d(c.row, c.col);
  return cost;
}

// Re-propagate flows through the basis tree for the given marginals by
// peeling leaves. Exact for any spanning tree.
void solve_tree_flows(std::vector<BasisCell>& basis, std::size_t n, std::vector<double> supply,
                      std::vector<double> demand) {
  std::vector<int> row_deg(n, 0), col_deg(n, 0);
  std::vector<bool> done(basis.size(), false);
  for (const BasisCell& c : basis) {
    ++row_deg[c.row];
    ++col_deg[c.col];
  }
  for (std::size_t processed = 0; processed < basis.size(); ++processed) {
    // Deterministic scan for the first remaining leaf cell.
    std::size_t pick = basis.size();
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (done[k]) continue;
      if (row_deg[basis[k].row] == 1 || col_deg[basis[k].col] == 1) {
        pick = k;
        break;
      }
    }
    BasisCell& c = basis[pick];
    double f = (row_deg[c.row] == 1) ? supply[c.row] : demand[c.col];
    c.flow = f;
    supply[c.row] -= f;
    demand[c.col] -= f;
    --row_deg[c.row];
    --col_deg[c.col];
    done[pick] = true;
  }
}

}  // namespace

std::vector<double> TransportPlan::row_sums() const {
  std::vector<double> r(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i] += at(i, j);
  return r;
}

std::vector<double> TransportPlan::col_sums() const {
  std::vector<double> c(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c[j] += at(i, j);
  return c;
}

TransportResult wasserstein1(const Simplex& p, const Simplex& q, const GroundMetric& metric) {
  const std::size_t n = p.size();
  if (q.size() != n || metric.size() != n) {
    fail(errc::dimension_mismatch, "marginals and metric must share one dimension");
  }

  TransportPlan plan;
  plan.n = n;
  plan.gamma.assign(n * n, 0.0);

  // Identical marginals: the diagonal plan is feasible with cost exactly 0,
  // which is optimal for any metric with zero diagonal.
  if (p.weights() == q.weights()) {
    for (std::size_t i = 0; i < n; ++i) plan.gamma[i * n + i] = p[i];
    return TransportResult{0.0, std::move(plan)};
  }

  // Perturbed supplies break degenerate ties; the total perturbation is
  // absorbed by the last demand to keep the problem balanced.
  std::vector<double> supply(p.weights());
  std::vector<double> demand(q.weights());
  double total_perturbation = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double eps = kPerturbation * static_cast<double>(i + 1);
    supply[i] += eps;
    total_perturbation += eps;
  }
  demand[n - 1] += total_perturbation;

  // Northwest-corner initial basis: advances one index per step, so it always
  // produces exactly 2n-1 cells.
  std::vector<BasisCell> basis;
  basis.reserve(2 * n - 1);
  {
    std::vector<double> a = supply;
    std::vector<double> b = demand;
    std::size_t i = 0, j = 0;
    for (;;) {
      double f = std::min(a[i], b[j]);
      basis.push_back(BasisCell{i, j, f});
      a[i] -= f;
      b[j] -= f;
      if (i == n - 1 && j == n - 1) break;
      if (i < n - 1 && (a[i] <= b[j] || j == n - 1)) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  std::vector<double> u, v;
  const std::size_t max_pivots = 2000 * n * n + 1000;
  bool optimal = false;
  for (std::size_t pivot = 0; pivot < max_pivots && !optimal; ++pivot) {
    compute_duals(basis, metric, n, u, v);

    // Bland's rule: first cell in row-major order with negative reduced cost.
    std::vector<bool> in_basis(n * n, false);
    for (const BasisCell& c : basis) in_basis[c.row * n + c.col] = true;
    std::size_t erow = n, ecol = n;
    for (std::size_t i = 0; i < n && erow == n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (in_basis[i * n + j]) continue;
        if (metric(i, j) - u[i] - v[j] < kReducedCostTol) {
          erow = i;
          ecol = j;
          break;
        }
      }
    }
    if (erow == n) {
      optimal = true;
      break;
    }

    std::vector<std::size_t> cycle = find_cycle(basis, n, erow, ecol);
    // Cells at even positions along the path lose theta; the entering cell
    // and odd positions gain it.
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leaving = basis.size();
    for (std::size_t k = 0; k < cycle.size(); k += 2) {
      if (basis[cycle[k]].flow < theta) {
        theta = basis[cycle[k]].flow;
        leaving = cycle[k];
      }
    }
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      basis[cycle[k]].flow += (k % 2 == 0) ? -theta : theta;
    }
    basis[leaving] = BasisCell{erow, ecol, theta};
  }

  if (!optimal) {
    fail(errc::infeasible_marginals, "transportation simplex exceeded its pivot budget");
  }

  // Remove the perturbation: re-solve the final basis tree against the
  // original marginals, clamp the resulting round-off negatives.
  solve_tree_flows(basis, n, p.weights(), q.weights());
  for (BasisCell& c : basis) {
    if (c.flow < 0.0) {
      if (c.flow < kNegativeFlowTol) {
        fail(errc::infeasible_marginals,
             "basis re-solve produced flow " + std::to_string(c.flow));
      }
      c.flow = 0.0;
    }
  }

  for (const BasisCell& c : basis) plan.gamma[c.row * n + c.col] += c.flow;
  return TransportResult{plan_cost(basis, metric), std::move(plan)};
}

namespace {

struct OracleSearch {
  std::size_t n;
  const GroundMetric* d;
  std::vector<std::int64_t> row_totals;
  std::vector<std::int64_t> col_remaining;
  std::vector<std::int64_t> row_fill;  // current row under construction
  double best = std::numeric_limits<double>::infinity();

  void fill_row(std::size_t i, std::size_t j, std::int64_t remaining, double partial) {
    if (partial >= best) return;
    if (j + 1 == n) {
      if (remaining > col_remaining[j]) return;
      row_fill[j] = remaining;
      double cost = partial + static_cast<double>(remaining) * (*d)(i, j);
      col_remaining[j] -= remaining;
      next_row(i + 1, cost);
      col_remaining[j] += remaining;
      return;
    }
    std::int64_t cap = std::min(remaining, col_remaining[j]);
    for (std::int64_t x = 0; x <= cap; ++x) {
      row_fill[j] = x;
      col_remaining[j] -= x;
      fill_row(i, j + 1, remaining - x, partial + static_cast<double>(x) * (*d)(i, j));
      col_remaining[j] += x;
    }
  }

  void next_row(std::size_t i, double partial) {
    if (i == n) {
      best = std::min(best, partial);
      return;
    }
    fill_row(i, 0, row_totals[i], partial);
  }
};

std::vector<std::int64_t> to_grid(const Simplex& s, std::int64_t grid, const char* which) {
  std::vector<std::int64_t> out(s.size());
  std::int64_t total = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double scaled = s[i] * static_cast<double>(grid);
    std::int64_t r = std::llround(scaled);
    if (std::abs(scaled - static_cast<double>(r)) > 1e-9 * static_cast<double>(grid)) {
      fail(errc::not_grid_representable,
           std::string(which) + "[" + std::to_string(i) + "] is not an integer multiple of 1/grid");
    }
    out[i] = r;
    total += r;
  }
  if (total != grid) {
    fail(errc::not_grid_representable, std::string(which) + " grid masses sum to " +
                                           std::to_string(total) + " != " + std::to_string(grid));
  }
  return out;
}

}  // namespace

double wasserstein1_oracle(const Simplex& p, const Simplex& q, const GroundMetric& metric,
                           std::int64_t grid) {
  const std::size_t n = p.size();
  if (q.size() != n || metric.size() != n) {
    fail(errc::dimension_mismatch, "marginals and metric must share one dimension");
  }
  if (n > 6) fail(errc::too_large, "oracle supports n <= 6, got " + std::to_string(n));
  if (grid < 1) fail(errc::not_grid_representable, "grid must be >= 1");

  OracleSearch search;
  search.n = n;
  search.d = &metric;
  search.row_totals = to_grid(p, grid, "p");
  search.col_remaining = to_grid(q, grid, "q");
  search.row_fill.assign(n, 0);
  search.next_row(0, 0.0);
  return search.best / static_cast<double>(grid);
}

}  // namespace bdg
