#include "ovr/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ovr/errors.hpp"

namespace ovr {

Vec uniform_distribution(Eigen::Index n) {
  if (n <= 0) throw IndexOutOfRange("uniform_distribution: n must be positive");
  return Vec::Constant(n, 1.0 / static_cast<double>(n));
}

bool is_distribution(const Vec& p, double tol) {
  if (p.size() == 0) return false;
  if ((p < 0.0).any()) return false;
  return std::abs(p.sum() - 1.0) <= tol;
}

double second_moment_cost(const Vec& p, const Vec& losses) {
  if (p.size() != losses.size())
    throw DimensionMismatch("second_moment_cost: p and losses sizes differ");
  const Eigen::Index n = p.size();
  if (n == 0) throw DimensionMismatch("second_moment_cost: empty input");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double l = losses[i];
    if (l == 0.0) continue;  // 0^2 / p = 0 even at p = 0
    if (p[i] <= 0.0)
      throw PositiveLossZeroProb("second_moment_cost: positive loss at zero-probability index");
    sum += l * l / p[i];
  }
  const double dn = static_cast<double>(n);
  return sum / (dn * dn);
}

double best_fixed_value(const Vec& totals) {
  if (totals.size() == 0) throw DimensionMismatch("best_fixed_value: empty totals");
  if ((totals < 0.0).any()) throw OutOfRange("best_fixed_value: negative total");
  const double root_sum = totals.sqrt().sum();
  return root_sum * root_sum;
}

Vec best_fixed_distribution(const Vec& totals) {
  if (totals.size() == 0) throw DimensionMismatch("best_fixed_distribution: empty totals");
  if ((totals < 0.0).any()) throw OutOfRange("best_fixed_distribution: negative total");
  const Vec roots = totals.sqrt();
  const double root_sum = roots.sum();
  if (root_sum == 0.0) return uniform_distribution(totals.size());
  return roots / root_sum;
}

RestrictedOptimum restricted_best_fixed(const Vec& totals, double p_min) {
  const Eigen::Index n = totals.size();
  if (n == 0) throw DimensionMismatch("restricted_best_fixed: empty totals");
  if ((totals < 0.0).any()) throw OutOfRange("restricted_best_fixed: negative total");
  const double dn = static_cast<double>(n);
  if (!(p_min >= 0.0) || p_min > 1.0 / dn + 1e-15)
    throw InvalidPMin("restricted_best_fixed: p_min must lie in [0, 1/n]");

  const Vec roots = totals.sqrt();
  if (roots.sum() == 0.0) {
    // Objective is identically zero; return the feasible center.
    return {uniform_distribution(n), 0.0};
  }

  // Sort roots descending; the clamped set is a suffix of this order.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return roots[a] > roots[b]; });

  // Grow the clamped suffix while the smallest unclamped entry falls below
  // sqrt(alpha) * p_min for the current unclamped set.
  Eigen::Index k = n;                 // number of unclamped entries
  double s = roots.sum();             // sum of unclamped roots
  double sqrt_alpha = s;              // value for k == n (denominator 1)
  while (k > 0) {
    const double denom = 1.0 - (dn - static_cast<double>(k)) * p_min;
    sqrt_alpha = s / denom;
    const double smallest = roots[order[static_cast<std::size_t>(k - 1)]];
    if (smallest >= sqrt_alpha * p_min) break;  // ties stay unclamped
    s -= smallest;
    --k;
  }

  Vec p(n);
  if (k == 0) {
    p.setConstant(p_min);  // only possible when p_min == 1/n
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double cand = roots[i] / sqrt_alpha;
      p[i] = cand >= p_min ? cand : p_min;
    }
  }

  double value = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (totals[i] > 0.0) value += totals[i] / p[i];
  }
  return {std::move(p), value};
}

}  // namespace ovr
