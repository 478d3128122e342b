#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace ovr {

/// Flat-array binary sum tree over nonnegative leaf weights.
///
/// Layout: 1-based heap in a single vector, internal nodes in [1, cap), leaves
/// in [cap, cap + n) with zero padding up to the next power of two.  Every
/// internal node stores the sum of its two children, so set_leaf and sample
/// are O(log n) and a full rebuild is O(n).
///
/// sample(u) realizes inverse-CDF sampling on half-open prefix intervals: it
/// returns the unique i with prefix(i-1) <= u * total() < prefix(i), walking
/// down and subtracting the left-subtree mass when branching right.
/// Zero-weight leaves are never returned.
class SumTree {
 public:
  /// n zero leaves.
  explicit SumTree(Eigen::Index n);

  /// Bulk build from nonnegative weights.
  explicit SumTree(const Eigen::ArrayXd& weights);

  Eigen::Index size() const { return n_; }

  /// Sum of all leaves (root value).
  double total() const { return tree_[1]; }

  /// Exact stored weight of leaf i.
  double leaf(Eigen::Index i) const;

  /// leaf(i) / total(); requires a positive total.
  double leaf_prob(Eigen::Index i) const;

  /// First n leaves as an array.
  Eigen::ArrayXd leaves() const;

  /// Overwrite one leaf and refresh its ancestors.  Internal sums are always
  /// recomputed from children, so state never depends on update order; a full
  /// rebuild additionally runs every 2^20 updates to bound any future drift.
  void set_leaf(Eigen::Index i, double w);

  /// Replace all leaves and rebuild in O(n).
  void assign(const Eigen::ArrayXd& weights);

  /// Inverse-CDF draw for u in [0, 1); requires total() > 0.
  /// u = 0 lands on the first positive-weight leaf.
  Eigen::Index sample(double u) const;

 private:
  void rebuild();
  void check_index(Eigen::Index i) const;

  Eigen::Index n_ = 0;
  Eigen::Index cap_ = 1;              // leaf capacity, power of two
  std::vector<double> tree_;          // size 2 * cap_, slot 0 unused
  std::uint64_t updates_ = 0;
  static constexpr std::uint64_t kRebuildEvery = 1ULL << 20;
};

}  // namespace ovr
