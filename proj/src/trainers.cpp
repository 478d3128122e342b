#include "ovr/trainers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ovr/errors.hpp"

namespace ovr {

Optimizer optimizer_from_string(const std::string& name) {
  if (name == "adagrad") return Optimizer::adagrad;
  if (name == "sgd" || name == "sgd-strongly-convex") return Optimizer::sgd_strongly_convex;
  throw UsageError("unknown optimizer: " + name);
}

TrainSampler train_sampler_from_string(const std::string& name) {
  if (name == "uniform") return TrainSampler::uniform;
  if (name == "vrb") return TrainSampler::vrb;
  if (name == "vrb-doubling") return TrainSampler::vrb_doubling;
  throw UsageError("unknown training sampler: " + name);
}

std::string to_string(TrainSampler s) {
  switch (s) {
    case TrainSampler::uniform: return "uniform";
    case TrainSampler::vrb: return "vrb";
    case TrainSampler::vrb_doubling: return "vrb-doubling";
  }
  throw UsageError("unknown training sampler");
}

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logistic_loss(double margin) {
  // log(1 + exp(-margin)) without overflow
  if (margin < -35.0) return -margin;
  return std::log1p(std::exp(-margin));
}

/// Ticket-issuing front end shared by the trainers: uniform baseline or one
/// of the variance-reducing samplers.
class IndexSampler {
 public:
  virtual ~IndexSampler() = default;
  virtual SampleTicket draw(RngStream& rng) = 0;
  virtual void feed(const SampleTicket& ticket, double signal) = 0;
  virtual std::uint64_t clamped() const { return 0; }
};

class UniformIndexSampler : public IndexSampler {
 public:
  explicit UniformIndexSampler(Eigen::Index n) : n_(n) {}
  SampleTicket draw(RngStream& rng) override {
    SampleTicket t;
    t.index = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n_)));
    t.prob = 1.0 / static_cast<double>(n_);
    return t;
  }
  void feed(const SampleTicket&, double) override {}

 private:
  Eigen::Index n_;
};

class VrbIndexSampler : public IndexSampler {
 public:
  VrbIndexSampler(Eigen::Index n, double theta, const Eigen::ArrayXd& bounds, BoundMode mode)
      : sampler_(n, theta, bounds, mode) {}
  SampleTicket draw(RngStream& rng) override { return sampler_.sample(rng); }
  void feed(const SampleTicket& ticket, double signal) override {
    sampler_.update(ticket, signal);
  }
  std::uint64_t clamped() const override { return sampler_.clamped(); }

 private:
  VrbSampler sampler_;
};

class DoublingIndexSampler : public IndexSampler {
 public:
  DoublingIndexSampler(Eigen::Index n, const Eigen::ArrayXd& bounds, BoundMode mode)
      : sampler_(n, bounds, mode) {}
  SampleTicket draw(RngStream& rng) override { return sampler_.sample(rng); }
  void feed(const SampleTicket& ticket, double signal) override {
    sampler_.update(ticket, signal);
  }
  std::uint64_t clamped() const override {
    return sampler_.clamped() + sampler_.inner().clamped();
  }

 private:
  DoublingVrb sampler_;
};

std::unique_ptr<IndexSampler> make_index_sampler(TrainSampler kind, Eigen::Index n, double theta,
                                                 const Eigen::ArrayXd& bounds, BoundMode mode) {
  switch (kind) {
    case TrainSampler::uniform: return std::make_unique<UniformIndexSampler>(n);
    case TrainSampler::vrb: return std::make_unique<VrbIndexSampler>(n, theta, bounds, mode);
    case TrainSampler::vrb_doubling:
      return std::make_unique<DoublingIndexSampler>(n, bounds, mode);
  }
  throw UsageError("make_index_sampler: unknown kind");
}

}  // namespace

double logistic_gradient_norm(const Eigen::VectorXd& x, double y, const Eigen::VectorXd& w) {
  return x.norm() * sigmoid(-y * w.dot(x));
}

double kmeans_gradient_norm(const Eigen::VectorXd& x, const Eigen::MatrixXd& centers) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < centers.rows(); ++c)
    best = std::min(best, (x.transpose() - centers.row(c)).norm());
  return 2.0 * best;
}

Eigen::ArrayXd kmeans_bound_estimates(const Eigen::MatrixXd& x, RngStream& rng, double eps) {
  const Eigen::Index n = x.rows();
  if (n <= 0) throw TooFewPoints("kmeans_bound_estimates: empty point set");
  const Eigen::Index anchor = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
  Eigen::ArrayXd bounds(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d2 = (x.row(i) - x.row(anchor)).squaredNorm();
    bounds[i] = std::max(4.0 * d2, eps);
  }
  return bounds;
}

TrainResult train_logreg(const Dataset& data, const LogregConfig& config, std::uint64_t seed) {
  if (!data.labeled()) throw NoLabels("train_logreg: dataset has no labels");
  const Split split = train_test_split(data, config.test_fraction, seed);
  const Eigen::MatrixXd& x = split.train.x;
  const Eigen::VectorXd& y = split.train.y;
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (n < 1) throw TooFewPoints("train_logreg: empty training split");

  const Eigen::ArrayXd norms = x.rowwise().norm().array();
  const Eigen::ArrayXd bounds = norms.square().max(config.bound_floor);
  const double theta = config.theta > 0.0
                           ? config.theta
                           : VrbSampler::theta_for_horizon(n, config.steps);
  const BoundMode mode = config.strict ? BoundMode::strict : BoundMode::lenient;
  auto sampler = make_index_sampler(config.sampler, n, theta, bounds, mode);
  RngStream rng(seed, 0, RngStream::kSampler);

  const bool strongly_convex = config.optimizer == Optimizer::sgd_strongly_convex;
  const double radius = config.diameter / 2.0;

  auto objective = [&](const Eigen::MatrixXd& px, const Eigen::VectorXd& py,
                       const Eigen::VectorXd& w) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < px.rows(); ++i)
      sum += logistic_loss(py[i] * w.dot(px.row(i).transpose()));
    double mean = sum / static_cast<double>(px.rows());
    if (strongly_convex) mean += 0.5 * config.mu * w.squaredNorm();
    return mean;
  };

  TrainResult result;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double cum2 = 0.0;
  Eigen::VectorXd g(d);

  for (std::uint64_t t = 1; t <= config.steps; ++t) {
    const SampleTicket ticket = sampler->draw(rng);
    const Eigen::Index i = ticket.index;
    const Eigen::VectorXd xi = x.row(i).transpose();
    const double margin = y[i] * w.dot(xi);
    const double slope = sigmoid(-margin);
    const double signal = slope * norms[i];
    const double iw = 1.0 / (static_cast<double>(n) * ticket.prob);

    g = (-y[i] * slope * iw) * xi;
    if (strongly_convex) g += config.mu * w;
    const double gn2 = g.squaredNorm();
    cum2 += gn2;

    if (strongly_convex) {
      const double eta = 2.0 / (config.mu * static_cast<double>(t));
      w -= eta * g;
    } else if (cum2 > 0.0) {
      const double eta = config.diameter / std::sqrt(2.0 * cum2);
      w -= eta * g;
    }
    const double wn = w.norm();
    if (wn > radius) w *= radius / wn;

    sampler->feed(ticket, signal);

    if (t % config.eval_every == 0 || t == config.steps) {
      StepRecord rec;
      rec.step = t;
      rec.train_loss = objective(x, y, w);
      rec.grad_norm_sq = gn2;
      rec.cum_second = cum2;
      rec.test_cost = objective(split.test.x, split.test.y, w);
      result.metrics.push_back(rec);
    }
  }

  result.w = std::move(w);
  result.cum_second = cum2;
  result.clamped = sampler->clamped();
  result.final_test_cost =
      result.metrics.empty() ? objective(split.test.x, split.test.y, result.w)
                             : result.metrics.back().test_cost;
  return result;
}

Eigen::MatrixXd kmeans_plus_plus(const Eigen::MatrixXd& x, Eigen::Index k, RngStream& rng) {
  const Eigen::Index n = x.rows();
  if (k <= 0 || k > n) throw TooFewPoints("kmeans_plus_plus: need 1 <= k <= n points");
  Eigen::MatrixXd centers(k, x.cols());
  centers.row(0) = x.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n))));
  Eigen::ArrayXd dist2 = (x.rowwise() - centers.row(0)).rowwise().squaredNorm().array();
  for (Eigen::Index c = 1; c < k; ++c) {
    const double total = dist2.sum();
    Eigen::Index pick;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += dist2[i];
        if (target < acc) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    centers.row(c) = x.row(pick);
    dist2 = dist2.min((x.rowwise() - centers.row(c)).rowwise().squaredNorm().array());
  }
  return centers;
}

double kmeans_cost(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centers) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centers.rows(); ++c)
      best = std::min(best, (x.row(i) - centers.row(c)).squaredNorm());
    sum += best;
  }
  return x.rows() > 0 ? sum / static_cast<double>(x.rows()) : 0.0;
}

TrainResult train_kmeans(const Dataset& data, const KmeansConfig& config, std::uint64_t seed) {
  const Split split = train_test_split(data, config.test_fraction, seed);
  const Eigen::MatrixXd& x = split.train.x;
  const Eigen::Index n = x.rows();
  if (config.k > n) throw TooFewPoints("train_kmeans: fewer training points than centers");

  // k-means++ on a uniform subsample, shared across sampler choices for a
  // given seed.
  RngStream init_rng(seed, 0, RngStream::kInit);
  const Eigen::Index sub_n = std::max(config.k, std::min<Eigen::Index>(config.init_subsample, n));
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  for (Eigen::Index i = n - 1; i > 0; --i)
    std::swap(order[static_cast<std::size_t>(i)],
              order[init_rng.below(static_cast<std::uint64_t>(i + 1))]);
  Eigen::MatrixXd subsample(sub_n, x.cols());
  for (Eigen::Index i = 0; i < sub_n; ++i)
    subsample.row(i) = x.row(order[static_cast<std::size_t>(i)]);
  Eigen::MatrixXd centers = kmeans_plus_plus(subsample, config.k, init_rng);

  RngStream bound_rng(seed, 0, RngStream::kData);
  const Eigen::ArrayXd bounds = kmeans_bound_estimates(x, bound_rng, config.bound_floor);
  const double theta = config.theta > 0.0 ? config.theta : 0.5;
  const BoundMode mode = config.strict ? BoundMode::strict : BoundMode::lenient;
  auto sampler = make_index_sampler(config.sampler, n, theta, bounds, mode);
  RngStream rng(seed, 0, RngStream::kSampler);

  TrainResult result;
  result.init_centers = centers;
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(config.k);
  double cum2 = 0.0;

  std::vector<SampleTicket> tickets(config.batch);
  std::vector<Eigen::Index> assign(config.batch);
  std::vector<double> signals(config.batch);

  for (std::uint64_t b = 0; b < config.batches; ++b) {
    const Eigen::MatrixXd frozen = centers;
    std::vector<Eigen::Index> drawn(config.batch);

    double batch_sig2 = 0.0;
    double batch_cost = 0.0;
    for (std::uint64_t j = 0; j < config.batch; ++j) {
      tickets[j] = sampler->draw(rng);
      drawn[j] = tickets[j].index;
      const Eigen::RowVectorXd xi = x.row(tickets[j].index);
      double best = std::numeric_limits<double>::infinity();
      Eigen::Index best_c = 0;
      for (Eigen::Index c = 0; c < config.k; ++c) {
        const double d2 = (xi - frozen.row(c)).squaredNorm();
        if (d2 < best) {
          best = d2;
          best_c = c;
        }
      }
      assign[j] = best_c;
      signals[j] = 2.0 * std::sqrt(best);
      batch_sig2 += signals[j] * signals[j];
      batch_cost += best;
      const double iw = 1.0 / (static_cast<double>(n) * tickets[j].prob);
      cum2 += signals[j] * signals[j] * iw * iw;
    }

    for (std::uint64_t j = 0; j < config.batch; ++j) {
      const Eigen::Index c = assign[j];
      const double wgt =
          config.importance_weighted_counts
              ? 1.0 / (static_cast<double>(n) * tickets[j].prob)
              : 1.0;
      counts[c] += wgt;
      const double eta = wgt / counts[c];
      centers.row(c) += eta * (x.row(tickets[j].index) - centers.row(c));
    }

    for (std::uint64_t j = 0; j < config.batch; ++j) sampler->feed(tickets[j], signals[j]);
    result.draw_log.push_back(std::move(drawn));

    if ((b + 1) % config.eval_every == 0 || b + 1 == config.batches) {
      StepRecord rec;
      rec.step = b + 1;
      rec.train_loss = batch_cost / static_cast<double>(config.batch);
      rec.grad_norm_sq = batch_sig2 / static_cast<double>(config.batch);
      rec.cum_second = cum2;
      rec.test_cost = kmeans_cost(split.test.x, centers);
      result.metrics.push_back(rec);
    }
  }

  result.centers = std::move(centers);
  result.cum_second = cum2;
  result.clamped = sampler->clamped();
  result.final_test_cost =
      result.metrics.empty() ? kmeans_cost(split.test.x, result.centers)
                             : result.metrics.back().test_cost;
  return result;
}

}  // namespace ovr
