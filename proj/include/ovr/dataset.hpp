#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ovr/rng.hpp"

namespace ovr {

/// Point set with optional binary labels.
struct Dataset {
  Eigen::MatrixXd x;   // one row per point
  Eigen::VectorXd y;   // labels in {-1, +1}; empty when unlabeled
  std::string source;

  Eigen::Index size() const { return x.rows(); }
  Eigen::Index dim() const { return x.cols(); }
  bool labeled() const { return y.size() == x.rows() && x.rows() > 0; }
};

enum class DataFormat { csv, libsvm };

DataFormat data_format_from_string(const std::string& name);

/// CSV rows of comma-separated numbers.  When labeled is true the first
/// column is the label (sign gives the class); remaining columns are
/// features.  Raises ParseError with the offending line number.
Dataset load_csv(const std::filesystem::path& path, bool labeled);

/// Whitespace-separated `label idx:val` lines with 1-based indices; the
/// dimension is the largest index seen, missing entries are zero.
Dataset load_libsvm(const std::filesystem::path& path);

Dataset load_dataset(const std::filesystem::path& path, DataFormat format, bool labeled);

/// Gaussian blob mixture with the given class proportions (must sum to 1;
/// BadMix otherwise).  Component 0 is the majority at the origin with label
/// -1; minority components sit on alternating axes at growing radii with
/// label +1, so minority points carry systematically larger norms.
Dataset synth_imbalanced(Eigen::Index n, Eigen::Index dim, const std::vector<double>& mix,
                         std::uint64_t seed);

struct Split {
  Dataset train;
  Dataset test;
};

/// Deterministic shuffle split; test gets floor(test_fraction * n) points
/// (at least one of each side when n >= 2).
Split train_test_split(const Dataset& data, double test_fraction, std::uint64_t seed);

}  // namespace ovr
