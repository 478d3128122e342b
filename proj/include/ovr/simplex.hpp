#pragma once

#include <Eigen/Dense>

namespace ovr {

using Vec = Eigen::ArrayXd;

/// Uniform distribution on n points.
Vec uniform_distribution(Eigen::Index n);

/// True when p has nonnegative entries summing to 1 within tol.
bool is_distribution(const Vec& p, double tol = 1e-9);

/// Normalized second-moment cost of sampling distribution p against a loss
/// vector: (1/n^2) * sum_i losses(i)^2 / p(i).
///
/// Indices with losses(i) == 0 contribute zero regardless of p(i), so
/// zero-probability mass on zero-loss indices is allowed.  A positive loss at
/// a zero-probability index raises PositiveLossZeroProb.
double second_moment_cost(const Vec& p, const Vec& losses);

/// Exact minimum over the full simplex of sum_i totals(i)/p(i), which equals
/// (sum_i sqrt(totals(i)))^2.  Unnormalized: callers divide by n^2 when they
/// need the normalized benchmark.
double best_fixed_value(const Vec& totals);

/// Minimizer of sum_i totals(i)/p(i) over the simplex:
/// p(i) = sqrt(totals(i)) / sum_j sqrt(totals(j)).
/// An all-zero totals vector yields the uniform distribution.
Vec best_fixed_distribution(const Vec& totals);

struct RestrictedOptimum {
  Vec distribution;
  double value;  // sum_i totals(i)/p(i) at the minimizer (unnormalized)
};

/// Exact minimizer of sum_i totals(i)/p(i) over {p in simplex : p(i) >= p_min}.
///
/// Water-filling form: p(i) = sqrt(totals(i))/sqrt(alpha) when that exceeds
/// p_min, else exactly p_min, with sqrt(alpha) = S_I / (1 - (n-|I|) p_min)
/// where S_I sums sqrt(totals) over the unclamped set I.  Ties
/// sqrt(totals(i)) == sqrt(alpha) * p_min are left unclamped (same value).
/// Requires 0 <= p_min <= 1/n (InvalidPMin otherwise); p_min = 0 reduces to
/// the unrestricted optimum.
RestrictedOptimum restricted_best_fixed(const Vec& totals, double p_min);

}  // namespace ovr
