#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ovr/dataset.hpp"
#include "ovr/rng.hpp"
#include "ovr/vrb.hpp"

namespace ovr {

enum class Optimizer { adagrad, sgd_strongly_convex };
enum class TrainSampler { uniform, vrb, vrb_doubling };

Optimizer optimizer_from_string(const std::string& name);
TrainSampler train_sampler_from_string(const std::string& name);
std::string to_string(TrainSampler s);

/// Gradient norm of the unregularized logistic loss log(1 + exp(-y w.x))
/// at one sample: ||x|| * sigmoid(-y w.x).  This is the loss signal fed to
/// the sampler; the regularizer's contribution is deterministic and adds no
/// sampling variance.
double logistic_gradient_norm(const Eigen::VectorXd& x, double y, const Eigen::VectorXd& w);

/// k-Means loss signal: gradient norm of the distance-to-nearest-center
/// potential, 2 * min_q ||x - q||.
double kmeans_gradient_norm(const Eigen::VectorXd& x, const Eigen::MatrixXd& centers);

/// Per-point squared-signal bounds for k-Means: 4 ||x_i - u||^2 against one
/// uniformly drawn anchor point u from the same set, floored at eps.
Eigen::ArrayXd kmeans_bound_estimates(const Eigen::MatrixXd& x, RngStream& rng,
                                      double eps = 1e-12);

/// One metrics row; written at the evaluation cadence.
struct StepRecord {
  std::uint64_t step = 0;
  double train_loss = 0.0;
  double grad_norm_sq = 0.0;  // squared norm of the current gradient estimate
  double cum_second = 0.0;    // running sum of squared estimate norms
  double test_cost = 0.0;
};

struct LogregConfig {
  Optimizer optimizer = Optimizer::adagrad;
  TrainSampler sampler = TrainSampler::vrb;
  std::uint64_t steps = 50000;
  double theta = 0.0;     // 0 selects the horizon rule over `steps`
  double diameter = 10.0; // feasible-ball diameter D for projected steps
  double mu = 1e-2;       // strong-convexity modulus for sgd mode
  double bound_floor = 1e-8;
  std::uint64_t eval_every = 1000;
  bool strict = false;
  double test_fraction = 0.2;
};

struct KmeansConfig {
  TrainSampler sampler = TrainSampler::vrb;
  Eigen::Index k = 100;
  std::uint64_t batch = 100;    // tickets per batch
  std::uint64_t batches = 100;
  double theta = 0.5;
  double bound_floor = 1e-12;
  std::uint64_t eval_every = 1;
  bool importance_weighted_counts = false;
  bool strict = false;
  double test_fraction = 0.2;
  Eigen::Index init_subsample = 1000;
};

struct TrainResult {
  Eigen::VectorXd w;                    // logistic weights
  Eigen::MatrixXd centers;              // k-means centers
  Eigen::MatrixXd init_centers;         // k-means starting centers
  std::vector<StepRecord> metrics;
  double cum_second = 0.0;              // final cumulative second-moment proxy
  double final_test_cost = 0.0;
  std::uint64_t clamped = 0;
  std::vector<std::vector<Eigen::Index>> draw_log;  // drawn indices per batch (k-means)
};

/// Importance-sampled logistic regression.
///
/// Each step draws index i with the sampler, forms the unbiased gradient
/// estimate g = grad_i / (n p(i)) (plus mu * w in sgd mode), steps with
///   adagrad: eta_t = D / sqrt(2 sum_{s<=t} ||g_s||^2),
///   sgd:     eta_t = 2 / (mu t),
/// projects onto the ball of diameter D, and feeds the sample's gradient
/// norm back to the sampler.  Per-index bounds are ||x_i||^2 (the logistic
/// gradient-norm cap), floored at bound_floor.
TrainResult train_logreg(const Dataset& data, const LogregConfig& config, std::uint64_t seed);

/// Importance-sampled mini-batch k-Means.
///
/// Starts from k-means++ centers fitted on a uniform subsample, then per
/// batch: draw `batch` tickets from the frozen distribution, assign against
/// frozen centers, apply per-center 1/count updates, and feed each drawn
/// point's signal back through its ticket.  The sampler distribution
/// refreshes once per batch.
TrainResult train_kmeans(const Dataset& data, const KmeansConfig& config, std::uint64_t seed);

/// k-means++ seeding on the given points.
Eigen::MatrixXd kmeans_plus_plus(const Eigen::MatrixXd& x, Eigen::Index k, RngStream& rng);

/// Mean squared distance to the nearest center.
double kmeans_cost(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centers);

}  // namespace ovr
