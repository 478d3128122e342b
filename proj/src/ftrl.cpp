#include "ovr/ftrl.hpp"

#include <cmath>
#include <vector>

#include "ovr/errors.hpp"

namespace ovr {

namespace {
void check_options(const FtrlOptions& opt) {
  if (!(opt.gamma > 0.0)) throw NonPositiveGamma("FtrlSampler: gamma must be positive");
  if (!(opt.bound > 0.0)) throw NonPositiveBound("FtrlSampler: bound must be positive");
}
}  // namespace

FtrlSampler::FtrlSampler(Eigen::Index n, double bound)
    : FtrlSampler(n, FtrlOptions{bound, bound, BoundMode::lenient}) {}

FtrlSampler::FtrlSampler(Eigen::Index n, const FtrlOptions& opt)
    : n_(n), opt_(opt), cum_(Eigen::ArrayXd::Zero(n > 0 ? n : 1)), tree_(n > 0 ? n : 1) {
  if (n <= 0) throw IndexOutOfRange("FtrlSampler: n must be positive");
  check_options(opt_);
  tree_.assign((cum_ + opt_.gamma).sqrt());
}

FtrlSampler::FtrlSampler(const Eigen::ArrayXd& cumulative, const FtrlOptions& opt)
    : n_(cumulative.size()), opt_(opt), cum_(cumulative), tree_(n_ > 0 ? n_ : 1) {
  if (n_ <= 0) throw IndexOutOfRange("FtrlSampler: n must be positive");
  check_options(opt_);
  if ((cum_ < 0.0).any()) throw OutOfRange("FtrlSampler: cumulative squares must be >= 0");
  tree_.assign((cum_ + opt_.gamma).sqrt());
}

Eigen::ArrayXd FtrlSampler::distribution() const {
  return tree_.leaves() / tree_.total();
}

double FtrlSampler::probability(Eigen::Index i) const { return tree_.leaf_prob(i); }

Eigen::Index FtrlSampler::sample(double u) const { return tree_.sample(u); }

double FtrlSampler::leaf_value(Eigen::Index i) const { return std::sqrt(cum_[i] + opt_.gamma); }

void FtrlSampler::observe(const Eigen::ArrayXd& losses) {
  if (losses.size() != n_) throw DimensionMismatch("FtrlSampler::observe: size mismatch");
  if (!losses.isFinite().all()) throw OutOfRange("FtrlSampler::observe: non-finite loss");

  std::vector<Eigen::Index> changed;
  changed.reserve(static_cast<std::size_t>(n_));
  for (Eigen::Index i = 0; i < n_; ++i) {
    double sq = losses[i] * losses[i];
    if (sq == 0.0) continue;
    if (sq > opt_.bound) {
      if (opt_.mode == BoundMode::strict)
        throw LossBoundViolated("FtrlSampler::observe: squared loss exceeds bound");
      sq = opt_.bound;
      ++clamped_;
    }
    cum_[i] += sq;
    changed.push_back(i);
  }

  const double dense_threshold =
      static_cast<double>(n_) / std::max(1.0, std::log2(static_cast<double>(n_)));
  if (static_cast<double>(changed.size()) > dense_threshold) {
    tree_.assign((cum_ + opt_.gamma).sqrt());
  } else {
    for (Eigen::Index i : changed) tree_.set_leaf(i, leaf_value(i));
  }
}

}  // namespace ovr
