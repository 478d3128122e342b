#include "ovr/sum_tree.hpp"

#include <bit>
#include <cmath>

#include "ovr/errors.hpp"

namespace ovr {

namespace {
Eigen::Index leaf_capacity(Eigen::Index n) {
  return static_cast<Eigen::Index>(std::bit_ceil(static_cast<std::uint64_t>(n)));
}
}  // namespace

SumTree::SumTree(Eigen::Index n) : n_(n) {
  if (n <= 0) throw IndexOutOfRange("SumTree: size must be positive");
  cap_ = leaf_capacity(n);
  tree_.assign(static_cast<std::size_t>(2 * cap_), 0.0);
}

SumTree::SumTree(const Eigen::ArrayXd& weights) : SumTree(weights.size()) {
  assign(weights);
}

double SumTree::leaf(Eigen::Index i) const {
  check_index(i);
  return tree_[static_cast<std::size_t>(cap_ + i)];
}

double SumTree::leaf_prob(Eigen::Index i) const {
  check_index(i);
  if (total() <= 0.0) throw ZeroTotal("SumTree::leaf_prob: total is zero");
  return tree_[static_cast<std::size_t>(cap_ + i)] / total();
}

Eigen::ArrayXd SumTree::leaves() const {
  return Eigen::Map<const Eigen::ArrayXd>(tree_.data() + cap_, n_);
}

void SumTree::set_leaf(Eigen::Index i, double w) {
  check_index(i);
  if (!(w >= 0.0)) throw NegativeWeight("SumTree::set_leaf: weight must be >= 0");
  tree_[static_cast<std::size_t>(cap_ + i)] = w;
  for (Eigen::Index node = (cap_ + i) >> 1; node >= 1; node >>= 1) {
    tree_[static_cast<std::size_t>(node)] =
        tree_[static_cast<std::size_t>(2 * node)] + tree_[static_cast<std::size_t>(2 * node + 1)];
  }
  if (++updates_ >= kRebuildEvery) {
    updates_ = 0;
    rebuild();
  }
}

void SumTree::assign(const Eigen::ArrayXd& weights) {
  if (weights.size() != n_) throw DimensionMismatch("SumTree::assign: size mismatch");
  if ((weights < 0.0).any()) throw NegativeWeight("SumTree::assign: weight must be >= 0");
  Eigen::Map<Eigen::ArrayXd>(tree_.data() + cap_, n_) = weights;
  rebuild();
}

void SumTree::rebuild() {
  for (Eigen::Index node = cap_ - 1; node >= 1; --node) {
    tree_[static_cast<std::size_t>(node)] =
        tree_[static_cast<std::size_t>(2 * node)] + tree_[static_cast<std::size_t>(2 * node + 1)];
  }
}

Eigen::Index SumTree::sample(double u) const {
  if (!(u >= 0.0) || u >= 1.0) throw OutOfRange("SumTree::sample: u must lie in [0, 1)");
  if (total() <= 0.0) throw ZeroTotal("SumTree::sample: total is zero");
  double target = u * total();
  Eigen::Index node = 1;
  while (node < cap_) {
    const Eigen::Index left = 2 * node;
    if (target < tree_[static_cast<std::size_t>(left)]) {
      node = left;
    } else {
      target -= tree_[static_cast<std::size_t>(left)];
      node = left + 1;
    }
  }
  Eigen::Index idx = node - cap_;
  // Rounding in the descent can land on a padding or zero leaf only when the
  // target sits within one ulp of a prefix boundary; step back to mass.
  if (idx >= n_ || tree_[static_cast<std::size_t>(cap_ + idx)] == 0.0) {
    if (idx >= n_) idx = n_ - 1;
    while (idx > 0 && tree_[static_cast<std::size_t>(cap_ + idx)] == 0.0) --idx;
    while (idx < n_ - 1 && tree_[static_cast<std::size_t>(cap_ + idx)] == 0.0) ++idx;
  }
  return idx;
}

void SumTree::check_index(Eigen::Index i) const {
  if (i < 0 || i >= n_) throw IndexOutOfRange("SumTree: leaf index out of range");
}

}  // namespace ovr
