#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <Eigen/Dense>

#include "ovr/rng.hpp"

namespace ovr {

enum class AdversaryKind { iid_fixed, piecewise_shift, spiteful, converging };

AdversaryKind adversary_kind_from_string(const std::string& name);
std::string to_string(AdversaryKind kind);

/// Loss-generating opponent for regret episodes.
///
/// Every kind emits losses in [0, sqrt(L)] so squared losses respect the
/// declared bound.  Non-oblivious kinds may read the distribution the player
/// published for the round; no kind ever sees the player's current draw.
class Adversary {
 public:
  Adversary(Eigen::Index n, double bound) : n_(n), bound_(bound) {}
  virtual ~Adversary() = default;

  /// Loss vector for round t (1-based).
  virtual Eigen::ArrayXd losses(std::uint64_t t, const Eigen::ArrayXd& player_dist,
                                RngStream& rng) = 0;

  /// True when the loss sequence is independent of the player's actions.
  virtual bool oblivious() const = 0;

  /// Per-index loss limits when the sequence converges to fixed values;
  /// nullptr for kinds without limits.
  virtual const Eigen::ArrayXd* limits() const { return nullptr; }

  Eigen::Index size() const { return n_; }
  double bound() const { return bound_; }

 protected:
  Eigen::Index n_;
  double bound_;  // cap on squared losses
};

/// Stationary product distribution with a heavy-tailed activity profile:
/// index i suffers loss sqrt(L) with probability q(i) = 0.9 / (i + 1)^1.2,
/// independently across rounds and indices.
class IidFixedAdversary : public Adversary {
 public:
  IidFixedAdversary(Eigen::Index n, double bound);
  Eigen::ArrayXd losses(std::uint64_t t, const Eigen::ArrayXd&, RngStream& rng) override;
  bool oblivious() const override { return true; }
  const Eigen::ArrayXd& activity() const { return q_; }

 private:
  Eigen::ArrayXd q_;
};

/// Deterministic schedule that concentrates all loss on one index and shifts
/// it every 200 rounds, cycling through the indices.
class PiecewiseShiftAdversary : public Adversary {
 public:
  using Adversary::Adversary;
  Eigen::ArrayXd losses(std::uint64_t t, const Eigen::ArrayXd&, RngStream&) override;
  bool oblivious() const override { return true; }
  static constexpr std::uint64_t kPhaseLength = 200;
};

/// Adaptive opponent: places loss sqrt(L) on the index the player currently
/// protects least (smallest published probability, lowest index on ties).
class SpitefulAdversary : public Adversary {
 public:
  using Adversary::Adversary;
  Eigen::ArrayXd losses(std::uint64_t t, const Eigen::ArrayXd& player_dist,
                        RngStream&) override;
  bool oblivious() const override { return false; }
};

/// Losses converge to per-index limits at a 1/sqrt(t) rate:
/// loss_t(i) = limit(i) + c(i) * xi / sqrt(t) with xi uniform on [-1, 1].
/// Limits are drawn once per episode in [0.2, 0.8] * sqrt(L) and c(i) is
/// chosen so no clamping is ever needed.
class ConvergingAdversary : public Adversary {
 public:
  ConvergingAdversary(Eigen::Index n, double bound, RngStream& setup);
  Eigen::ArrayXd losses(std::uint64_t t, const Eigen::ArrayXd&, RngStream& rng) override;
  bool oblivious() const override { return true; }
  const Eigen::ArrayXd* limits() const override { return &limits_; }

 private:
  Eigen::ArrayXd limits_;
  Eigen::ArrayXd c_;
};

/// Builds an adversary for one episode; setup draws any per-episode
/// parameters (currently only the converging kind uses it).
std::unique_ptr<Adversary> make_adversary(AdversaryKind kind, Eigen::Index n, double bound,
                                          RngStream& setup);

}  // namespace ovr
