#include "ovr/property_suite.hpp"

#include <cmath>

#include "ovr/errors.hpp"
#include "ovr/harness.hpp"
#include "ovr/report.hpp"
#include "ovr/simplex.hpp"

namespace ovr {

namespace {

Eigen::ArrayXd random_totals(RngStream& rng, Eigen::Index n, double scale) {
  Eigen::ArrayXd a(n);
  for (Eigen::Index i = 0; i < n; ++i) a[i] = scale * rng.uniform();
  return a;
}

/// Random feasible point of {p >= p_min, sum p = 1}.
Eigen::ArrayXd random_feasible(RngStream& rng, Eigen::Index n, double p_min) {
  Eigen::ArrayXd e(n);
  for (Eigen::Index i = 0; i < n; ++i) e[i] = -std::log(1.0 - rng.uniform());
  e /= e.sum();
  return p_min + (1.0 - static_cast<double>(n) * p_min) * e;
}

}  // namespace

PropertyReport run_property_suite(std::uint64_t master) {
  PropertyReport report;
  RngStream rng(master, 0, RngStream::kInit);

  // Closed-form minimizers beat random feasible probes.
  {
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 60 && ok; ++trial) {
      const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.below(5));
      const Eigen::ArrayXd a = random_totals(rng, n, 4.0);
      const double p_min = trial % 2 == 0 ? 0.0 : 0.4 / static_cast<double>(n);
      const RestrictedOptimum opt = restricted_best_fixed(a, p_min);
      for (int probe = 0; probe < 40; ++probe) {
        const Eigen::ArrayXd q = random_feasible(rng, n, p_min);
        double probe_value = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
          if (a[i] > 0.0) probe_value += a[i] / q[i];
        const double slack = probe_value - opt.value;
        worst = std::min(worst, slack);
        if (slack < -1e-9 * std::max(1.0, opt.value)) ok = false;
      }
    }
    report.checks.push_back({"simplex-minimizer-beats-probes", ok, worst, 0.0,
                             "closed form never above a feasible probe"});
  }

  // Restricted-vs-free gap bound: gap <= 6 n p_min (sum sqrt a)^2.
  {
    bool ok = true;
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.below(5));
      const Eigen::ArrayXd a = random_totals(rng, n, 3.0);
      const double p_min = rng.uniform() * 0.5 / static_cast<double>(n);
      const double free_value = best_fixed_value(a);
      if (free_value == 0.0) continue;
      const RestrictedOptimum opt = restricted_best_fixed(a, p_min);
      const double gap = opt.value - free_value;
      const double cap = 6.0 * static_cast<double>(n) * p_min * free_value;
      worst_ratio = std::max(worst_ratio, cap > 0.0 ? gap / cap : 0.0);
      if (gap > cap * (1.0 + 1e-9) + 1e-12) ok = false;
    }
    report.checks.push_back({"restricted-gap-bound", ok, worst_ratio, 1.0,
                             "restriction cost within 6 n p_min of the free optimum"});
  }

  // Sum tree equals the linear-scan inverse CDF.
  {
    bool ok = true;
    for (int trial = 0; trial < 2000 && ok; ++trial) {
      const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(48));
      Eigen::ArrayXd w(n);
      for (Eigen::Index i = 0; i < n; ++i)
        w[i] = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
      if (w.sum() == 0.0) w[static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)))] = 0.5;
      SumTree tree(w);
      const double u = rng.uniform();
      const double target = u * tree.total();
      double acc = 0.0;
      Eigen::Index expect = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += w[i];
        if (target < acc) {
          expect = i;
          break;
        }
      }
      if (tree.sample(u) != expect) ok = false;
    }
    report.checks.push_back(
        {"tree-matches-linear-scan", ok, ok ? 1.0 : 0.0, 1.0, "inverse-CDF index agreement"});
  }

  // Empirical frequencies track leaf probabilities at 3 sigma.
  {
    Eigen::ArrayXd w(4);
    w << 1.0, 0.0, 2.0, 3.0;
    SumTree tree(w);
    const int draws = 100000;
    Eigen::ArrayXd counts = Eigen::ArrayXd::Zero(4);
    for (int i = 0; i < draws; ++i) counts[tree.sample(rng.uniform())] += 1.0;
    bool ok = true;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < 4; ++i) {
      const double p = tree.leaf_prob(i);
      const double sigma = std::sqrt(p * (1.0 - p) / draws);
      const double dev = std::abs(counts[i] / draws - p);
      if (sigma == 0.0) {
        if (dev != 0.0) ok = false;
      } else {
        worst = std::max(worst, dev / sigma);
        if (dev > 3.0 * sigma) ok = false;
      }
    }
    report.checks.push_back({"tree-frequency-law", ok, worst, 3.0, "draw frequencies vs leaf_prob"});
  }

  // Full-information sampler plays the closed-form distribution.
  {
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.below(6));
      const double gamma = 0.1 + rng.uniform();
      FtrlSampler sampler(n, FtrlOptions{gamma, 1e9, BoundMode::lenient});
      Eigen::ArrayXd cum = Eigen::ArrayXd::Zero(n);
      for (int rounds = 0; rounds < 5; ++rounds) {
        Eigen::ArrayXd losses(n);
        for (Eigen::Index i = 0; i < n; ++i) losses[i] = rng.uniform();
        cum += losses.square();
        sampler.observe(losses);
      }
      const Eigen::ArrayXd expect = (cum + gamma).sqrt() / (cum + gamma).sqrt().sum();
      const double dev = (sampler.distribution() - expect).abs().maxCoeff();
      worst = std::max(worst, dev);
      if (dev > 1e-12) ok = false;
    }
    report.checks.push_back({"ftrl-closed-form", ok, worst, 1e-12,
                             "distribution proportional to sqrt(cum + gamma)"});
  }

  // Bandit estimates are unbiased: Monte Carlo mean of loss^2/prob per index.
  {
    const Eigen::Index n = 6;
    VrbSampler sampler(n, 0.3, 1.0);
    // Push the state away from uniform first.
    RngStream warm(master, 1, RngStream::kSampler);
    for (int t = 0; t < 50; ++t) {
      const SampleTicket ticket = sampler.sample(warm);
      sampler.update(ticket, 0.1 + 0.8 * warm.uniform());
    }
    Eigen::ArrayXd losses(n);
    for (Eigen::Index i = 0; i < n; ++i) losses[i] = 0.2 + 0.7 * rng.uniform();
    const Eigen::ArrayXd ptilde = sampler.full_distribution();
    const int draws = 100000;
    Eigen::ArrayXd sums = Eigen::ArrayXd::Zero(n);
    for (int s = 0; s < draws; ++s) {
      const SampleTicket t = sampler.sample(rng.uniform(), rng.uniform());
      sums[t.index] += sampler.estimated_square(t, losses[t.index]);
    }
    bool ok = true;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double truth = losses[i] * losses[i];
      const double second = truth * truth / ptilde[i];
      const double var = second - truth * truth;
      const double sigma = std::sqrt(var / draws);
      const double dev = std::abs(sums[i] / draws - truth);
      worst = std::max(worst, dev / sigma);
      if (dev > 3.0 * sigma) ok = false;
    }
    report.checks.push_back(
        {"vrb-unbiased-squares", ok, worst, 3.0, "Monte Carlo mean of loss^2/prob per index"});
  }

  // Theorem ceilings on a small grid.
  {
    bool ok = true;
    double worst = 0.0;
    for (const char* method : {"ftrl", "vrb"}) {
      for (AdversaryKind kind : {AdversaryKind::iid_fixed, AdversaryKind::piecewise_shift,
                                 AdversaryKind::converging}) {
        CellSpec spec;
        spec.method = method;
        spec.adversary = kind;
        spec.n = 4;
        spec.T = 400;
        spec.seeds = 5;
        spec.master = master;
        const CellResult cell = run_cell(spec);
        const MeanStderr stats = summarize(cell.regrets);
        const double ratio = stats.mean / cell.ceiling;
        worst = std::max(worst, ratio);
        if (!(stats.mean <= cell.ceiling)) ok = false;
      }
    }
    report.checks.push_back(
        {"theorem-ceilings", ok, worst, 1.0, "mean regret under the certified ceilings"});
  }

  // Sequence-sum constant stays under 44.
  {
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const Eigen::Index T = 1 + static_cast<Eigen::Index>(rng.below(2000));
      Eigen::ArrayXd a(T);
      for (Eigen::Index t = 0; t < T; ++t)
        a[t] = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
      const double s = check_sum_constant(a);
      worst = std::max(worst, s);
      if (s > 44.0) ok = false;
    }
    // Geometric burst: tiny opening value followed by repeated doubling.
    Eigen::ArrayXd burst(60);
    double v = 1e-9;
    for (Eigen::Index t = 0; t < burst.size(); ++t) {
      burst[t] = std::min(1.0, v);
      v *= 2.0;
    }
    const double s = check_sum_constant(burst);
    worst = std::max(worst, s);
    if (s > 44.0) ok = false;
    report.checks.push_back({"sequence-sum-constant", ok, worst, 44.0,
                             "sum a_t^4 / (a^2_{1:t})^{3/2} bounded by 44"});
  }

  // Hindsight decomposition on converging losses.
  {
    bool ok = true;
    int applicable = 0;
    for (int episode = 0; episode < 10; ++episode) {
      RngStream setup(master, static_cast<std::uint64_t>(episode), RngStream::kInit);
      auto adversary = make_adversary(AdversaryKind::converging, 6, 1.0, setup);
      UniformPlayer player(6);
      const EpisodeTrace trace =
          run_episode(player, *adversary, 2000, master, static_cast<std::uint64_t>(episode));
      const Lemma1Report rep = check_lemma1(trace);
      if (!rep.assumption_holds) continue;
      ++applicable;
      if (!rep.holds) ok = false;
    }
    report.checks.push_back({"hindsight-decomposition", ok && applicable > 0,
                             static_cast<double>(applicable), 1.0,
                             "benchmark below mean-square plus drift terms"});
  }

  // Variance-reduction dominance on the heavy-tailed stationary adversary.
  {
    const Eigen::Index n = 16;
    const std::uint64_t T = 5000;
    const int seeds = 10;
    std::vector<double> diffs;
    for (int s = 0; s < seeds; ++s) {
      const std::uint64_t episode = static_cast<std::uint64_t>(s);
      RngStream setup_a(master, episode, RngStream::kInit);
      RngStream setup_b(master, episode, RngStream::kInit);
      auto adv_a = make_adversary(AdversaryKind::iid_fixed, n, 1.0, setup_a);
      auto adv_b = make_adversary(AdversaryKind::iid_fixed, n, 1.0, setup_b);
      auto vrb = make_player("vrb", n, 1.0, 0.0, 0.0, T, false);
      UniformPlayer uniform(n);
      const EpisodeTrace ta = run_episode(*vrb, *adv_a, T, master, episode);
      const EpisodeTrace tb = run_episode(uniform, *adv_b, T, master, episode);
      diffs.push_back(cumulative_costs(tb)[static_cast<Eigen::Index>(T - 1)] -
                      cumulative_costs(ta)[static_cast<Eigen::Index>(T - 1)]);
    }
    const MeanStderr stats = summarize(diffs);
    const bool ok = stats.mean > 2.0 * stats.stderr_;
    report.checks.push_back({"variance-reduction-dominance", ok,
                             stats.stderr_ > 0.0 ? stats.mean / stats.stderr_ : stats.mean, 2.0,
                             "uniform cost minus sampler cost, paired episodes"});
  }

  // Bitwise repeatability of a full cell.
  {
    CellSpec spec;
    spec.method = "vrb";
    spec.adversary = AdversaryKind::iid_fixed;
    spec.n = 8;
    spec.T = 500;
    spec.seeds = 3;
    spec.master = master;
    const CellResult a = run_cell(spec);
    const CellResult b = run_cell(spec);
    bool ok = a.regrets.size() == b.regrets.size();
    for (std::size_t i = 0; ok && i < a.regrets.size(); ++i)
      if (a.regrets[i] != b.regrets[i]) ok = false;
    report.checks.push_back(
        {"bitwise-repeatability", ok, ok ? 1.0 : 0.0, 1.0, "identical seeds, identical results"});
  }

  return report;
}

}  // namespace ovr
