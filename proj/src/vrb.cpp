#include "ovr/vrb.hpp"

#include <atomic>
#include <cmath>

#include <json.hpp>

#include "ovr/errors.hpp"

namespace ovr {

namespace {
std::uint64_t next_owner_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}
}  // namespace

VrbSampler::VrbSampler(Eigen::Index n, double theta, double bound, BoundMode mode)
    : VrbSampler(n, theta, Eigen::ArrayXd::Constant(n > 0 ? n : 1, bound), mode) {}

VrbSampler::VrbSampler(Eigen::Index n, double theta, const Eigen::ArrayXd& bounds, BoundMode mode)
    : n_(n),
      theta_(theta),
      bounds_(bounds),
      w_(Eigen::ArrayXd::Zero(n > 0 ? n : 1)),
      tree_(n > 0 ? n : 1),
      mode_(mode),
      owner_(next_owner_id()) {
  if (n <= 0) throw IndexOutOfRange("VrbSampler: n must be positive");
  if (!(theta > 0.0) || theta > 1.0) throw InvalidTheta("VrbSampler: theta must lie in (0, 1]");
  if (bounds.size() != n) throw DimensionMismatch("VrbSampler: bounds size mismatch");
  if (!(bounds > 0.0).all()) throw NonPositiveBound("VrbSampler: bounds must be positive");
  regularizers_ = bounds_ * static_cast<double>(n_) / theta_;
  tree_.assign((w_ + regularizers_).sqrt());
}

double VrbSampler::theta_for_horizon(Eigen::Index n, std::uint64_t T) {
  if (n <= 0) throw IndexOutOfRange("theta_for_horizon: n must be positive");
  if (T < static_cast<std::uint64_t>(n)) return 1.0;
  return std::cbrt(static_cast<double>(n) / static_cast<double>(T));
}

double VrbSampler::leaf_value(Eigen::Index i) const { return std::sqrt(w_[i] + regularizers_[i]); }

SampleTicket VrbSampler::sample(double u_mix, double u_tree) const {
  if (!(u_mix >= 0.0) || u_mix >= 1.0 || !(u_tree >= 0.0) || u_tree >= 1.0)
    throw OutOfRange("VrbSampler::sample: uniforms must lie in [0, 1)");
  Eigen::Index idx;
  if (u_mix < theta_) {
    idx = static_cast<Eigen::Index>(u_tree * static_cast<double>(n_));
    if (idx >= n_) idx = n_ - 1;
  } else {
    idx = tree_.sample(u_tree);
  }
  SampleTicket ticket;
  ticket.index = idx;
  ticket.prob = probability(idx);
  ticket.round = t_;
  ticket.owner = owner_;
  return ticket;
}

SampleTicket VrbSampler::sample(RngStream& rng) const {
  const double u_mix = rng.uniform();
  const double u_tree = rng.uniform();
  return sample(u_mix, u_tree);
}

void VrbSampler::check_ticket(const SampleTicket& ticket) const {
  if (ticket.owner != owner_)
    throw StaleTicket("VrbSampler: ticket was issued by a different sampler state");
  if (ticket.index < 0 || ticket.index >= n_)
    throw IndexOutOfRange("VrbSampler: ticket index out of range");
  if (!(ticket.prob > 0.0)) throw OutOfRange("VrbSampler: ticket probability must be positive");
}

void VrbSampler::update(const SampleTicket& ticket, double loss) {
  check_ticket(ticket);
  if (ticket.consumed) throw StaleTicket("VrbSampler::update: ticket already consumed");
  if (loss < 0.0) throw NegativeLoss("VrbSampler::update: loss must be >= 0");
  double sq = loss * loss;
  if (sq > bounds_[ticket.index]) {
    if (mode_ == BoundMode::strict)
      throw LossBoundViolated("VrbSampler::update: squared loss exceeds bound");
    sq = bounds_[ticket.index];
    ++clamped_;
  }
  ticket.consumed = true;
  w_[ticket.index] += sq / ticket.prob;
  tree_.set_leaf(ticket.index, leaf_value(ticket.index));
  ++t_;
}

Eigen::ArrayXd VrbSampler::full_distribution() const {
  const Eigen::ArrayXd tree_dist = tree_.leaves() / tree_.total();
  return (1.0 - theta_) * tree_dist + theta_ / static_cast<double>(n_);
}

double VrbSampler::probability(Eigen::Index i) const {
  return (1.0 - theta_) * tree_.leaf_prob(i) + theta_ / static_cast<double>(n_);
}

double VrbSampler::estimated_square(const SampleTicket& ticket, double loss) const {
  check_ticket(ticket);
  if (loss < 0.0) throw NegativeLoss("VrbSampler::estimated_square: loss must be >= 0");
  double sq = loss * loss;
  if (sq > bounds_[ticket.index]) {
    if (mode_ == BoundMode::strict)
      throw LossBoundViolated("VrbSampler::estimated_square: squared loss exceeds bound");
    sq = bounds_[ticket.index];
  }
  return sq / ticket.prob;
}

double VrbSampler::importance_weight(const SampleTicket& ticket) const {
  check_ticket(ticket);
  return 1.0 / (static_cast<double>(n_) * ticket.prob);
}

std::string VrbSampler::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  j["theta"] = theta_;
  j["bounds"] = std::vector<double>(bounds_.data(), bounds_.data() + n_);
  j["w"] = std::vector<double>(w_.data(), w_.data() + n_);
  j["t"] = t_;
  return j.dump();
}

VrbSampler VrbSampler::from_json(const std::string& text, BoundMode mode) {
  nlohmann::json j;
  Eigen::Index n = 0;
  double theta = 0.0;
  std::vector<double> bounds_v, w_v;
  std::uint64_t t = 0;
  try {
    j = nlohmann::json::parse(text);
    n = j.at("n").get<Eigen::Index>();
    theta = j.at("theta").get<double>();
    bounds_v = j.at("bounds").get<std::vector<double>>();
    w_v = j.at("w").get<std::vector<double>>();
    t = j.at("t").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("VrbSampler::from_json: ") + e.what());
  }
  if (static_cast<Eigen::Index>(bounds_v.size()) != n ||
      static_cast<Eigen::Index>(w_v.size()) != n)
    throw ParseError("VrbSampler::from_json: array lengths disagree with n");
  VrbSampler s(n, theta, Eigen::Map<const Eigen::ArrayXd>(bounds_v.data(), n), mode);
  s.w_ = Eigen::Map<const Eigen::ArrayXd>(w_v.data(), n);
  if ((s.w_ < 0.0).any()) throw ParseError("VrbSampler::from_json: negative weight");
  s.t_ = t;
  s.tree_.assign((s.w_ + s.regularizers_).sqrt());
  return s;
}

DoublingVrb::DoublingVrb(Eigen::Index n, double bound, BoundMode mode)
    : DoublingVrb(n, Eigen::ArrayXd::Constant(n > 0 ? n : 1, bound), mode) {}

DoublingVrb::DoublingVrb(Eigen::Index n, const Eigen::ArrayXd& bounds, BoundMode mode)
    : n_(n),
      bounds_(bounds),
      mode_(mode),
      epoch_horizon_(n > 0 ? static_cast<std::uint64_t>(n) : 1),
      inner_(n, 1.0, bounds, mode) {}

void DoublingVrb::update(const SampleTicket& ticket, double loss) {
  inner_.update(ticket, loss);
  ++epoch_rounds_;
  ++total_rounds_;
  if (epoch_rounds_ >= epoch_horizon_) {
    clamped_ += inner_.clamped();
    ++epoch_;
    epoch_rounds_ = 0;
    epoch_horizon_ = static_cast<std::uint64_t>(n_) << epoch_;
    const double theta =
        std::cbrt(1.0 / static_cast<double>(static_cast<std::uint64_t>(1) << epoch_));
    inner_ = VrbSampler(n_, theta, bounds_, mode_);
  }
}

}  // namespace ovr
