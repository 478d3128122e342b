#include "ovr/adversary.hpp"

#include <cmath>

#include "ovr/errors.hpp"

namespace ovr {

AdversaryKind adversary_kind_from_string(const std::string& name) {
  if (name == "iid-fixed") return AdversaryKind::iid_fixed;
  if (name == "piecewise-shift") return AdversaryKind::piecewise_shift;
  if (name == "spiteful") return AdversaryKind::spiteful;
  if (name == "converging") return AdversaryKind::converging;
  throw UsageError("unknown adversary kind: " + name);
}

std::string to_string(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::iid_fixed: return "iid-fixed";
    case AdversaryKind::piecewise_shift: return "piecewise-shift";
    case AdversaryKind::spiteful: return "spiteful";
    case AdversaryKind::converging: return "converging";
  }
  throw UsageError("unknown adversary kind");
}

IidFixedAdversary::IidFixedAdversary(Eigen::Index n, double bound)
    : Adversary(n, bound), q_(n) {
  for (Eigen::Index i = 0; i < n; ++i)
    q_[i] = 0.9 / std::pow(static_cast<double>(i + 1), 1.2);
}

Eigen::ArrayXd IidFixedAdversary::losses(std::uint64_t, const Eigen::ArrayXd&, RngStream& rng) {
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n_);
  const double mag = std::sqrt(bound_);
  for (Eigen::Index i = 0; i < n_; ++i)
    if (rng.uniform() < q_[i]) out[i] = mag;
  return out;
}

Eigen::ArrayXd PiecewiseShiftAdversary::losses(std::uint64_t t, const Eigen::ArrayXd&,
                                               RngStream&) {
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n_);
  const std::uint64_t phase = (t - 1) / kPhaseLength;
  out[static_cast<Eigen::Index>(phase % static_cast<std::uint64_t>(n_))] = std::sqrt(bound_);
  return out;
}

Eigen::ArrayXd SpitefulAdversary::losses(std::uint64_t, const Eigen::ArrayXd& player_dist,
                                         RngStream&) {
  if (player_dist.size() != n_)
    throw DimensionMismatch("SpitefulAdversary: distribution size mismatch");
  Eigen::Index target = 0;
  player_dist.minCoeff(&target);  // lowest index wins ties
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n_);
  out[target] = std::sqrt(bound_);
  return out;
}

ConvergingAdversary::ConvergingAdversary(Eigen::Index n, double bound, RngStream& setup)
    : Adversary(n, bound), limits_(n), c_(n) {
  const double mag = std::sqrt(bound);
  for (Eigen::Index i = 0; i < n; ++i) {
    limits_[i] = setup.uniform(0.2 * mag, 0.8 * mag);
    c_[i] = 0.15 * mag;  // limits stay in [0.05, 0.95] * mag, so no clamping
  }
}

Eigen::ArrayXd ConvergingAdversary::losses(std::uint64_t t, const Eigen::ArrayXd&,
                                           RngStream& rng) {
  const double inv_root = 1.0 / std::sqrt(static_cast<double>(t));
  Eigen::ArrayXd out(n_);
  for (Eigen::Index i = 0; i < n_; ++i)
    out[i] = limits_[i] + c_[i] * rng.uniform(-1.0, 1.0) * inv_root;
  return out;
}

std::unique_ptr<Adversary> make_adversary(AdversaryKind kind, Eigen::Index n, double bound,
                                          RngStream& setup) {
  if (n <= 0) throw IndexOutOfRange("make_adversary: n must be positive");
  if (!(bound > 0.0)) throw NonPositiveBound("make_adversary: bound must be positive");
  switch (kind) {
    case AdversaryKind::iid_fixed: return std::make_unique<IidFixedAdversary>(n, bound);
    case AdversaryKind::piecewise_shift:
      return std::make_unique<PiecewiseShiftAdversary>(n, bound);
    case AdversaryKind::spiteful: return std::make_unique<SpitefulAdversary>(n, bound);
    case AdversaryKind::converging:
      return std::make_unique<ConvergingAdversary>(n, bound, setup);
  }
  throw UsageError("make_adversary: unknown kind");
}

}  // namespace ovr
