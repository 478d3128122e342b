#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ovr/adversary.hpp"
#include "ovr/ftrl.hpp"
#include "ovr/rng.hpp"
#include "ovr/vrb.hpp"

namespace ovr {

/// Player-side adapter so episodes can drive full-information and bandit
/// samplers, plus the fixed baselines, through one cycle:
/// publish distribution -> draw -> feed losses.
class Player {
 public:
  struct Draw {
    Eigen::Index index = 0;
    double prob = 0.0;
  };

  virtual ~Player() = default;

  /// The distribution the player commits to for the coming round.
  virtual Eigen::ArrayXd distribution() const = 0;

  virtual Draw draw(RngStream& rng) = 0;

  /// Hand over the round's losses.  Bandit players read only
  /// losses(draw.index); full-information players read the whole vector.
  virtual void feed(const Eigen::ArrayXd& losses, const Draw& draw) = 0;

  virtual std::uint64_t clamped() const { return 0; }
};

class FtrlPlayer : public Player {
 public:
  explicit FtrlPlayer(FtrlSampler sampler) : sampler_(std::move(sampler)) {}
  Eigen::ArrayXd distribution() const override { return sampler_.distribution(); }
  Draw draw(RngStream& rng) override;
  void feed(const Eigen::ArrayXd& losses, const Draw&) override { sampler_.observe(losses); }
  std::uint64_t clamped() const override { return sampler_.clamped(); }

 private:
  FtrlSampler sampler_;
};

class VrbPlayer : public Player {
 public:
  explicit VrbPlayer(VrbSampler sampler) : sampler_(std::move(sampler)) {}
  Eigen::ArrayXd distribution() const override { return sampler_.full_distribution(); }
  Draw draw(RngStream& rng) override;
  void feed(const Eigen::ArrayXd& losses, const Draw& draw) override;
  std::uint64_t clamped() const override { return sampler_.clamped(); }

 private:
  VrbSampler sampler_;
  SampleTicket pending_;
};

class DoublingVrbPlayer : public Player {
 public:
  explicit DoublingVrbPlayer(DoublingVrb sampler) : sampler_(std::move(sampler)) {}
  Eigen::ArrayXd distribution() const override { return sampler_.full_distribution(); }
  Draw draw(RngStream& rng) override;
  void feed(const Eigen::ArrayXd& losses, const Draw& draw) override;
  std::uint64_t clamped() const override { return sampler_.clamped() + sampler_.inner().clamped(); }

 private:
  DoublingVrb sampler_;
  SampleTicket pending_;
};

/// Plays a fixed distribution every round and learns nothing.
class FixedDistPlayer : public Player {
 public:
  explicit FixedDistPlayer(Eigen::ArrayXd dist);
  Eigen::ArrayXd distribution() const override { return dist_; }
  Draw draw(RngStream& rng) override;
  void feed(const Eigen::ArrayXd&, const Draw&) override {}

 private:
  Eigen::ArrayXd dist_;
  SumTree tree_;
};

/// Uniform baseline: fixed 1/n distribution.
class UniformPlayer : public FixedDistPlayer {
 public:
  explicit UniformPlayer(Eigen::Index n);
};

/// Complete record of one episode.
struct EpisodeTrace {
  Eigen::Index n = 0;
  std::uint64_t T = 0;
  double bound = 1.0;                  // cap on squared losses
  Eigen::MatrixXd losses;              // T x n, row t = true loss vector
  Eigen::MatrixXd dists;               // T x n, row t = published distribution
  std::vector<Eigen::Index> drawn;     // index drawn each round
  std::vector<double> observed;        // loss of the drawn index
  Eigen::ArrayXd limits;               // adversary limits when present, else empty
  std::uint64_t clamped = 0;
};

/// Seed-splitting rule for episodes: within episode `episode` of master seed
/// `master`, the sampler draws from stream (master, episode, kSampler) and the
/// adversary from (master, episode, kAdversary); adversary setup (per-episode
/// parameters) uses (master, episode, kInit).
EpisodeTrace run_episode(Player& player, Adversary& adversary, std::uint64_t T,
                         std::uint64_t master, std::uint64_t episode);

/// Realized normalized regret of the trace:
/// (1/n^2) (sum_t f_t(p_t) - min_p sum_t f_t(p)).  May be negative for
/// randomized players on lucky runs.
double realized_regret(const EpisodeTrace& trace);

/// Per-round cumulative normalized cost (1/n^2) sum_{s<=t} f_s(p_s).
Eigen::ArrayXd cumulative_costs(const EpisodeTrace& trace);

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::vector<double> values;
};

/// Sample mean and standard error (s / sqrt(k)).
MeanStderr summarize(const std::vector<double>& values);

using PlayerFactory = std::function<std::unique_ptr<Player>(Eigen::Index n, double bound)>;

/// Mean realized regret against an oblivious adversary, over `seeds` episodes
/// with episode indices 0..seeds-1.  Raises NonObliviousAdversary when the
/// adversary kind adapts to the player: averaging realized regret estimates
/// pseudo-regret only for oblivious opponents.
MeanStderr pseudo_regret(const PlayerFactory& make_player, AdversaryKind kind, Eigen::Index n,
                         std::uint64_t T, double bound, int seeds, std::uint64_t master);

enum class BoundKind { full_info, bandit };

/// Regret ceiling certified for each sampler family:
///   full_info: 27 L sqrt(T) + 44 L
///   bandit:    74 L n^(1/3) T^(2/3), defined for T >= n.
double theorem_bound(BoundKind kind, Eigen::Index n, std::uint64_t T, double bound);

struct Lemma1Report {
  double lhs = 0.0;              // (1/n^2) min_p sum_t f_t(p)
  double rhs = 0.0;              // mean-square term + drift terms
  double mean_square_term = 0.0; // sum_t ((1/n) sum_i loss_t(i))^2
  double drift_linear = 0.0;     // 2 sqrt(T) Lbar_* (1/n) sum_i sqrt(V_T(i))
  double drift_quadratic = 0.0;  // ((1/n) sum_i sqrt(V_T(i)))^2
  Eigen::ArrayXd v;              // V_T(i) = sum_t (loss_t(i) - limit(i))^2
  double limit_mean = 0.0;       // (1/n) sum_i limit(i)
  bool assumption_holds = false; // (1/T) sum_t mean loss >= limit mean
  bool holds = false;            // lhs <= rhs (within float slack)
};

/// Decomposition bound linking the hindsight benchmark to the mean losses and
/// the drift around the adversary's limits.  Applicable only to traces whose
/// adversary exposes limits (OutOfRange otherwise).
Lemma1Report check_lemma1(const EpisodeTrace& trace);

/// sum_t a_t^4 / (a^2_{1:t})^(3/2) for a_t in [0, 1], skipping leading zeros;
/// bounded by 44 for every such sequence.  OutOfRange on entries outside
/// [0, 1].
double check_sum_constant(const Eigen::ArrayXd& seq);

}  // namespace ovr
