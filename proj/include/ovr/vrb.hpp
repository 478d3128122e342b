#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "ovr/ftrl.hpp"
#include "ovr/rng.hpp"
#include "ovr/sum_tree.hpp"

namespace ovr {

/// Receipt for one draw: the sampled index together with the exact mixed
/// probability it was drawn under and the round counter at draw time.
/// A ticket feeds exactly one update; reusing it, or presenting it to a
/// different sampler instance, raises StaleTicket.
struct SampleTicket {
  Eigen::Index index = 0;
  double prob = 0.0;          // (1 - theta) * tree_prob + theta / n at draw time
  std::uint64_t round = 0;    // sampler round counter when drawn

  std::uint64_t owner = 0;    // issuing sampler instance
  mutable bool consumed = false;
};

/// Bandit-feedback variance-reducing sampler.
///
/// Keeps per-index inverse-probability-weighted squared-loss totals w(i) and
/// plays the theta-mixture of the regularized square-root distribution with
/// the uniform distribution:
///   p(i)      proportional to sqrt(w(i) + r(i)),   r(i) = bounds(i) * n / theta
///   ptilde(i) = (1 - theta) * p(i) + theta / n.
/// Each update adds loss^2 / prob for the drawn index only, which is an
/// unbiased estimate of that index's squared loss and is capped by
/// n * bounds(i) / theta because ptilde(i) >= theta / n.
///
/// Instances are movable but not copyable (tickets name a single writer).
class VrbSampler {
 public:
  VrbSampler(Eigen::Index n, double theta, double bound,
             BoundMode mode = BoundMode::strict);
  VrbSampler(Eigen::Index n, double theta, const Eigen::ArrayXd& bounds,
             BoundMode mode = BoundMode::strict);

  VrbSampler(VrbSampler&&) = default;
  VrbSampler& operator=(VrbSampler&&) = default;
  VrbSampler(const VrbSampler&) = delete;
  VrbSampler& operator=(const VrbSampler&) = delete;

  /// Horizon rule: (n / T)^(1/3) when T >= n; 1 when no usable horizon.
  static double theta_for_horizon(Eigen::Index n, std::uint64_t T);

  Eigen::Index size() const { return n_; }
  double theta() const { return theta_; }
  const Eigen::ArrayXd& bounds() const { return bounds_; }
  const Eigen::ArrayXd& weights() const { return w_; }
  std::uint64_t round() const { return t_; }
  std::uint64_t clamped() const { return clamped_; }

  /// Two-stage draw: u_mix < theta picks the uniform branch (index
  /// floor(u_tree * n)), otherwise the tree branch.  The ticket's prob is the
  /// full mixture probability of the returned index, never the branch
  /// probability.
  SampleTicket sample(double u_mix, double u_tree) const;
  SampleTicket sample(RngStream& rng) const;

  /// Consume a ticket with the observed loss of its index:
  /// w(index) += loss^2 / prob, then refresh that leaf and advance the round.
  void update(const SampleTicket& ticket, double loss);

  /// Full mixed distribution ptilde.
  Eigen::ArrayXd full_distribution() const;

  /// Exact per-index mixed probability.
  double probability(Eigen::Index i) const;

  /// Unbiased squared-loss estimate for the ticket's index; bounded by
  /// n * bounds(index) / theta.  Does not consume the ticket.
  double estimated_square(const SampleTicket& ticket, double loss) const;

  /// 1 / (n * prob); bounded by 1 / theta, and exactly 1 under the uniform
  /// distribution.
  double importance_weight(const SampleTicket& ticket) const;

  /// Flat snapshot of the evolving state: {"n", "theta", "bounds", "w", "t"}.
  std::string to_json() const;
  static VrbSampler from_json(const std::string& text, BoundMode mode = BoundMode::strict);

 private:
  double leaf_value(Eigen::Index i) const;
  void check_ticket(const SampleTicket& ticket) const;

  Eigen::Index n_ = 0;
  double theta_ = 1.0;
  Eigen::ArrayXd bounds_;
  Eigen::ArrayXd regularizers_;  // bounds * n / theta
  Eigen::ArrayXd w_;
  SumTree tree_;
  std::uint64_t t_ = 0;
  BoundMode mode_ = BoundMode::strict;
  std::uint64_t clamped_ = 0;
  std::uint64_t owner_ = 0;
};

/// Horizon-free wrapper: restarts the sampler on epoch boundaries
/// T_k = n * 2^k (cumulative round ends at n, 3n, 7n, ...), with
/// theta_k = (n / T_k)^(1/3) and weights reset to zero.  Loss bounds carry
/// over; tickets issued before a boundary are stale afterwards.
class DoublingVrb {
 public:
  DoublingVrb(Eigen::Index n, double bound, BoundMode mode = BoundMode::strict);
  DoublingVrb(Eigen::Index n, const Eigen::ArrayXd& bounds,
              BoundMode mode = BoundMode::strict);

  Eigen::Index size() const { return n_; }
  int epoch() const { return epoch_; }
  double theta() const { return inner_.theta(); }
  std::uint64_t round() const { return total_rounds_; }
  std::uint64_t clamped() const { return clamped_; }
  const VrbSampler& inner() const { return inner_; }

  SampleTicket sample(double u_mix, double u_tree) const { return inner_.sample(u_mix, u_tree); }
  SampleTicket sample(RngStream& rng) const { return inner_.sample(rng); }
  void update(const SampleTicket& ticket, double loss);
  Eigen::ArrayXd full_distribution() const { return inner_.full_distribution(); }
  double probability(Eigen::Index i) const { return inner_.probability(i); }
  double importance_weight(const SampleTicket& ticket) const {
    return inner_.importance_weight(ticket);
  }

 private:
  Eigen::Index n_;
  Eigen::ArrayXd bounds_;
  BoundMode mode_;
  int epoch_ = 0;
  std::uint64_t epoch_rounds_ = 0;
  std::uint64_t epoch_horizon_ = 0;
  std::uint64_t total_rounds_ = 0;
  std::uint64_t clamped_ = 0;
  VrbSampler inner_;
};

}  // namespace ovr
