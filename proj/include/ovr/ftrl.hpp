#pragma once

#include <cstdint>
#include <limits>

#include <Eigen/Dense>

#include "ovr/sum_tree.hpp"

namespace ovr {

/// How samplers react to losses that exceed their declared bound.
enum class BoundMode {
  strict,   // throw LossBoundViolated
  lenient,  // clamp the stored square at the bound and count the violation
};

struct FtrlOptions {
  double gamma;  // regularizer weight, > 0
  double bound = std::numeric_limits<double>::infinity();  // cap on squared losses
  BoundMode mode = BoundMode::lenient;
};

/// Full-information follow-the-regularized-leader sampler.
///
/// Maintains cumulative squared losses cum(i) and plays the closed-form
/// minimizer of the regularized hindsight objective:
///   p(i) proportional to sqrt(cum(i) + gamma).
/// The unnormalized masses live in a sum tree, so the distribution is always
/// read exactly as leaf/total and draws cost O(log n).
class FtrlSampler {
 public:
  /// Regularizer gamma set equal to the squared-loss bound L, the choice
  /// under which the regret ceiling of theorem_bound() is certified.
  FtrlSampler(Eigen::Index n, double bound);

  FtrlSampler(Eigen::Index n, const FtrlOptions& opt);

  /// Restore from known cumulative squared losses.
  FtrlSampler(const Eigen::ArrayXd& cumulative, const FtrlOptions& opt);

  Eigen::Index size() const { return n_; }
  double gamma() const { return opt_.gamma; }
  const Eigen::ArrayXd& cumulative() const { return cum_; }

  /// Current distribution, exact tree leaf over tree total.
  Eigen::ArrayXd distribution() const;

  /// Exact per-index probability.
  double probability(Eigen::Index i) const;

  /// Draw an index from the current distribution; u in [0, 1).
  Eigen::Index sample(double u) const;

  /// Full-information update: cum(i) += losses(i)^2 for every index, then
  /// refresh tree leaves.  When more than n / log2(n) leaves change the whole
  /// tree is rebuilt in one O(n) pass instead of per-leaf updates.
  void observe(const Eigen::ArrayXd& losses);

  /// Number of squared losses clamped in lenient mode.
  std::uint64_t clamped() const { return clamped_; }

 private:
  double leaf_value(Eigen::Index i) const;

  Eigen::Index n_;
  FtrlOptions opt_;
  Eigen::ArrayXd cum_;
  SumTree tree_;
  std::uint64_t clamped_ = 0;
};

}  // namespace ovr
