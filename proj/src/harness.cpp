#include "ovr/harness.hpp"

#include <cmath>

#include "ovr/errors.hpp"
#include "ovr/simplex.hpp"

namespace ovr {

Player::Draw FtrlPlayer::draw(RngStream& rng) {
  const Eigen::Index i = sampler_.sample(rng.uniform());
  return {i, sampler_.probability(i)};
}

Player::Draw VrbPlayer::draw(RngStream& rng) {
  pending_ = sampler_.sample(rng);
  return {pending_.index, pending_.prob};
}

void VrbPlayer::feed(const Eigen::ArrayXd& losses, const Draw& draw) {
  sampler_.update(pending_, losses[draw.index]);
}

Player::Draw DoublingVrbPlayer::draw(RngStream& rng) {
  pending_ = sampler_.sample(rng);
  return {pending_.index, pending_.prob};
}

void DoublingVrbPlayer::feed(const Eigen::ArrayXd& losses, const Draw& draw) {
  sampler_.update(pending_, losses[draw.index]);
}

FixedDistPlayer::FixedDistPlayer(Eigen::ArrayXd dist)
    : dist_(std::move(dist)), tree_(dist_.size() > 0 ? dist_.size() : 1) {
  if (!is_distribution(dist_, 1e-9))
    throw OutOfRange("FixedDistPlayer: not a probability distribution");
  tree_.assign(dist_);
}

Player::Draw FixedDistPlayer::draw(RngStream& rng) {
  const Eigen::Index i = tree_.sample(rng.uniform());
  return {i, tree_.leaf_prob(i)};
}

UniformPlayer::UniformPlayer(Eigen::Index n) : FixedDistPlayer(uniform_distribution(n)) {}

EpisodeTrace run_episode(Player& player, Adversary& adversary, std::uint64_t T,
                         std::uint64_t master, std::uint64_t episode) {
  const Eigen::Index n = adversary.size();
  RngStream sampler_rng(master, episode, RngStream::kSampler);
  RngStream adversary_rng(master, episode, RngStream::kAdversary);

  EpisodeTrace trace;
  trace.n = n;
  trace.T = T;
  trace.bound = adversary.bound();
  trace.losses.resize(static_cast<Eigen::Index>(T), n);
  trace.dists.resize(static_cast<Eigen::Index>(T), n);
  trace.drawn.resize(T);
  trace.observed.resize(T);
  if (const Eigen::ArrayXd* lim = adversary.limits()) trace.limits = *lim;

  for (std::uint64_t t = 1; t <= T; ++t) {
    const Eigen::Index row = static_cast<Eigen::Index>(t - 1);
    const Eigen::ArrayXd dist = player.distribution();
    trace.dists.row(row) = dist.transpose();
    const Eigen::ArrayXd losses = adversary.losses(t, dist, adversary_rng);
    trace.losses.row(row) = losses.transpose();
    const Player::Draw d = player.draw(sampler_rng);
    trace.drawn[t - 1] = d.index;
    trace.observed[t - 1] = losses[d.index];
    player.feed(losses, d);
  }
  trace.clamped = player.clamped();
  return trace;
}

double realized_regret(const EpisodeTrace& trace) {
  const Eigen::Index n = trace.n;
  double played = 0.0;
  for (Eigen::Index t = 0; t < trace.losses.rows(); ++t)
    played += second_moment_cost(trace.dists.row(t).transpose().array(),
                                 trace.losses.row(t).transpose().array());
  const Eigen::ArrayXd totals = trace.losses.array().square().colwise().sum().transpose();
  const double dn = static_cast<double>(n);
  return played - best_fixed_value(totals) / (dn * dn);
}

Eigen::ArrayXd cumulative_costs(const EpisodeTrace& trace) {
  Eigen::ArrayXd out(trace.losses.rows());
  double acc = 0.0;
  for (Eigen::Index t = 0; t < trace.losses.rows(); ++t) {
    acc += second_moment_cost(trace.dists.row(t).transpose().array(),
                              trace.losses.row(t).transpose().array());
    out[t] = acc;
  }
  return out;
}

MeanStderr summarize(const std::vector<double>& values) {
  MeanStderr out;
  out.values = values;
  const double k = static_cast<double>(values.size());
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / k;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stderr_ = std::sqrt(ss / (k - 1.0) / k);
  }
  return out;
}

MeanStderr pseudo_regret(const PlayerFactory& make_player, AdversaryKind kind, Eigen::Index n,
                         std::uint64_t T, double bound, int seeds, std::uint64_t master) {
  std::vector<double> regrets;
  regrets.reserve(static_cast<std::size_t>(seeds));
  for (int s = 0; s < seeds; ++s) {
    const std::uint64_t episode = static_cast<std::uint64_t>(s);
    RngStream setup(master, episode, RngStream::kInit);
    auto adversary = make_adversary(kind, n, bound, setup);
    if (!adversary->oblivious())
      throw NonObliviousAdversary(
          "pseudo_regret: realized-regret averaging requires an oblivious adversary");
    auto player = make_player(n, bound);
    const EpisodeTrace trace = run_episode(*player, *adversary, T, master, episode);
    regrets.push_back(realized_regret(trace));
  }
  return summarize(regrets);
}

double theorem_bound(BoundKind kind, Eigen::Index n, std::uint64_t T, double bound) {
  if (n <= 0) throw IndexOutOfRange("theorem_bound: n must be positive");
  if (!(bound > 0.0)) throw NonPositiveBound("theorem_bound: bound must be positive");
  const double dT = static_cast<double>(T);
  switch (kind) {
    case BoundKind::full_info:
      return 27.0 * bound * std::sqrt(dT) + 44.0 * bound;
    case BoundKind::bandit: {
      if (T < static_cast<std::uint64_t>(n))
        throw HorizonTooShort("theorem_bound: bandit bound requires T >= n");
      const double dn = static_cast<double>(n);
      return 74.0 * bound * std::cbrt(dn) * std::pow(dT, 2.0 / 3.0);
    }
  }
  throw UsageError("theorem_bound: unknown kind");
}

Lemma1Report check_lemma1(const EpisodeTrace& trace) {
  if (trace.limits.size() != trace.n)
    throw OutOfRange("check_lemma1: trace has no adversary limits");
  const Eigen::Index n = trace.n;
  const double dn = static_cast<double>(n);
  const double dT = static_cast<double>(trace.T);

  Lemma1Report rep;
  const Eigen::ArrayXd totals = trace.losses.array().square().colwise().sum().transpose();
  rep.lhs = best_fixed_value(totals) / (dn * dn);

  // Per-round mean losses and their squares.
  const Eigen::ArrayXd round_means = trace.losses.array().rowwise().mean();
  rep.mean_square_term = round_means.square().sum();

  rep.v = (trace.losses.array().rowwise() - trace.limits.transpose())
              .square()
              .colwise()
              .sum()
              .transpose();
  const double root_v_mean = rep.v.sqrt().sum() / dn;
  rep.limit_mean = trace.limits.mean();
  rep.drift_linear = 2.0 * std::sqrt(dT) * rep.limit_mean * root_v_mean;
  rep.drift_quadratic = root_v_mean * root_v_mean;
  rep.rhs = rep.mean_square_term + rep.drift_linear + rep.drift_quadratic;

  rep.assumption_holds = round_means.mean() >= rep.limit_mean;
  rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-12) + 1e-12;
  return rep;
}

double check_sum_constant(const Eigen::ArrayXd& seq) {
  double acc = 0.0;  // running sum of squares
  double sum = 0.0;
  for (Eigen::Index t = 0; t < seq.size(); ++t) {
    const double a = seq[t];
    if (!(a >= 0.0) || a > 1.0)
      throw OutOfRange("check_sum_constant: entries must lie in [0, 1]");
    acc += a * a;
    if (a > 0.0) sum += (a * a) * (a * a) / (acc * std::sqrt(acc));
  }
  return sum;
}

}  // namespace ovr
