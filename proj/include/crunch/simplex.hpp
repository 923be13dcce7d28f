#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace crunch {

/// Maximizes c.x subject to A x <= b, x >= 0, where every b_j >= 0 (the
/// all-slack basis is feasible, no phase-1 needed). Dense tableau with
/// Bland's rule, so it cannot cycle. Intended for the small per-path
/// degradation programs (tens of variables); throws on iteration overrun.
struct SimplexSolution {
  std::vector<double> x;
  double objective = 0.0;
};

inline SimplexSolution simplex_maximize(const std::vector<std::vector<double>>& a,
                                        const std::vector<double>& b,
                                        const std::vector<double>& c) {
  const size_t m = a.size();
  const size_t n = c.size();
  for (double rhs : b) {
    if (rhs < 0.0) throw std::invalid_argument("simplex rhs must be nonnegative");
  }

  const double kPivotTol = 1e-9;
  // Tableau: m rows of [structural | slack | rhs], plus objective row.
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(n + m + 1, 0.0));
  for (size_t i = 0; i < m; ++i) {
    if (a[i].size() != n) throw std::invalid_argument("simplex row size mismatch");
    for (size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1.0;
    t[i][n + m] = b[i];
  }
  for (size_t j = 0; j < n; ++j) t[m][j] = -c[j];

  std::vector<size_t> basis(m);
  for (size_t i = 0; i < m; ++i) basis[i] = n + i;

  const size_t max_iters = 50 * (n + m + 10);
  for (size_t iter = 0;; ++iter) {
    if (iter > max_iters) throw std::runtime_error("simplex iteration limit exceeded");

    // Bland: entering = lowest-index column with negative reduced cost.
    size_t enter = n + m;
    for (size_t j = 0; j < n + m; ++j) {
      if (t[m][j] < -kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter == n + m) break;  // optimal

    size_t leave = m;
    double best_ratio = 0.0;
    for (size_t i = 0; i < m; ++i) {
      if (t[i][enter] > kPivotTol) {
        double ratio = t[i][n + m] / t[i][enter];
        if (leave == m || ratio < best_ratio - 1e-15 ||
            (ratio <= best_ratio + 1e-15 && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave == m) throw std::runtime_error("simplex objective unbounded");

    double piv = t[leave][enter];
    for (double& v : t[leave]) v /= piv;
    for (size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      double f = t[i][enter];
      if (f == 0.0) continue;
      for (size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }

  SimplexSolution sol;
  sol.x.assign(n, 0.0);
  for (size_t i = 0; i < m; ++i) {
    if (basis[i] < n) sol.x[basis[i]] = t[i][n + m];
  }
  for (size_t j = 0; j < n; ++j) sol.objective += c[j] * sol.x[j];
  return sol;
}

}  // namespace crunch
