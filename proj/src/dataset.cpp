#include "ovr/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ovr/errors.hpp"

namespace ovr {

DataFormat data_format_from_string(const std::string& name) {
  if (name == "csv") return DataFormat::csv;
  if (name == "libsvm") return DataFormat::libsvm;
  throw UsageError("unknown dataset format: " + name);
}

namespace {

double parse_number(const std::string& token, std::size_t line_no) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &pos);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": bad number '" + token + "'");
  }
  while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) ++pos;
  if (pos != token.size())
    throw ParseError("line " + std::to_string(line_no) + ": bad number '" + token + "'");
  return value;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, bool labeled) {
  std::ifstream in(path);
  if (!in) throw IoFailure("load_csv: cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string token;
    while (std::getline(ss, token, ',')) row.push_back(parse_number(token, line_no));
    if (row.empty()) continue;
    if (labeled) {
      if (row.size() < 2)
        throw ParseError("line " + std::to_string(line_no) + ": labeled row needs features");
      labels.push_back(row.front());
      row.erase(row.begin());
    }
    if (width == 0) width = row.size();
    if (row.size() != width)
      throw ParseError("line " + std::to_string(line_no) + ": ragged row");
    rows.push_back(std::move(row));
  }

  Dataset data;
  data.source = path.string();
  data.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j)
      data.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  if (labeled) {
    data.y.resize(static_cast<Eigen::Index>(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == 0.0)
        throw ParseError("zero label at labeled row " + std::to_string(i + 1));
      data.y[static_cast<Eigen::Index>(i)] = labels[i] > 0.0 ? 1.0 : -1.0;
    }
  }
  return data;
}

Dataset load_libsvm(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("load_libsvm: cannot open " + path.string());

  std::vector<double> labels;
  std::vector<std::vector<std::pair<Eigen::Index, double>>> rows;
  Eigen::Index dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string token;
    if (!(ss >> token)) continue;
    labels.push_back(parse_number(token, line_no));
    std::vector<std::pair<Eigen::Index, double>> entries;
    while (ss >> token) {
      const std::size_t colon = token.find(':');
      if (colon == std::string::npos)
        throw ParseError("line " + std::to_string(line_no) + ": expected idx:val, got '" +
                         token + "'");
      const double raw_idx = parse_number(token.substr(0, colon), line_no);
      const Eigen::Index idx = static_cast<Eigen::Index>(raw_idx);
      if (static_cast<double>(idx) != raw_idx || idx < 1)
        throw ParseError("line " + std::to_string(line_no) + ": indices are 1-based integers");
      entries.emplace_back(idx - 1, parse_number(token.substr(colon + 1), line_no));
      dim = std::max(dim, idx);
    }
    rows.push_back(std::move(entries));
  }

  Dataset data;
  data.source = path.string();
  data.x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), dim);
  data.y.resize(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (labels[i] == 0.0) throw ParseError("zero label at line " + std::to_string(i + 1));
    data.y[static_cast<Eigen::Index>(i)] = labels[i] > 0.0 ? 1.0 : -1.0;
    for (const auto& [j, v] : rows[i]) data.x(static_cast<Eigen::Index>(i), j) = v;
  }
  return data;
}

Dataset load_dataset(const std::filesystem::path& path, DataFormat format, bool labeled) {
  switch (format) {
    case DataFormat::csv: return load_csv(path, labeled);
    case DataFormat::libsvm: return load_libsvm(path);
  }
  throw UsageError("load_dataset: unknown format");
}

Dataset synth_imbalanced(Eigen::Index n, Eigen::Index dim, const std::vector<double>& mix,
                         std::uint64_t seed) {
  if (n <= 0 || dim <= 0) throw BadMix("synth_imbalanced: n and dim must be positive");
  if (mix.size() < 2) throw BadMix("synth_imbalanced: need at least two components");
  double total = 0.0;
  for (double m : mix) {
    if (!(m > 0.0)) throw BadMix("synth_imbalanced: proportions must be positive");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9) throw BadMix("synth_imbalanced: proportions must sum to 1");

  const std::size_t k = mix.size();
  // Component centers: majority at the origin, minorities on alternating
  // axes at radius 4 + 2(c-1); all components have unit spread.
  Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), dim);
  for (std::size_t c = 1; c < k; ++c) {
    const Eigen::Index axis = static_cast<Eigen::Index>((c - 1) % static_cast<std::size_t>(dim));
    const double sign = ((c - 1) / static_cast<std::size_t>(dim)) % 2 == 0 ? 1.0 : -1.0;
    centers(static_cast<Eigen::Index>(c), axis) = sign * (4.0 + 2.0 * static_cast<double>(c - 1));
  }

  std::vector<double> cum(k);
  std::partial_sum(mix.begin(), mix.end(), cum.begin());

  RngStream rng(seed, 0, RngStream::kData);
  Dataset data;
  data.source = "synth-imbalanced";
  data.x.resize(n, dim);
  data.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = rng.uniform();
    std::size_t c = 0;
    while (c + 1 < k && u >= cum[c]) ++c;
    for (Eigen::Index j = 0; j < dim; ++j)
      data.x(i, j) = centers(static_cast<Eigen::Index>(c), j) + rng.normal();
    data.y[i] = c == 0 ? -1.0 : 1.0;
  }
  return data;
}

Split train_test_split(const Dataset& data, double test_fraction, std::uint64_t seed) {
  const Eigen::Index n = data.size();
  if (n < 2) throw TooFewPoints("train_test_split: need at least two points");
  if (!(test_fraction > 0.0) || test_fraction >= 1.0)
    throw OutOfRange("train_test_split: fraction must lie in (0, 1)");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  RngStream rng(seed, 0, RngStream::kSplit);
  for (Eigen::Index i = n - 1; i > 0; --i)
    std::swap(order[static_cast<std::size_t>(i)],
              order[rng.below(static_cast<std::uint64_t>(i + 1))]);

  Eigen::Index n_test = static_cast<Eigen::Index>(test_fraction * static_cast<double>(n));
  n_test = std::clamp<Eigen::Index>(n_test, 1, n - 1);

  const bool labeled = data.labeled();
  auto take = [&](Eigen::Index begin, Eigen::Index count) {
    Dataset out;
    out.source = data.source;
    out.x.resize(count, data.dim());
    if (labeled) out.y.resize(count);
    for (Eigen::Index i = 0; i < count; ++i) {
      out.x.row(i) = data.x.row(order[static_cast<std::size_t>(begin + i)]);
      if (labeled) out.y[i] = data.y[order[static_cast<std::size_t>(begin + i)]];
    }
    return out;
  };
  return {take(n_test, n - n_test), take(0, n_test)};
}

}  // namespace ovr
