#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <vector>

#include "stlcbf/errors.hpp"

namespace stlcbf {

/// Sampled state trajectory with strictly increasing timestamps.
class Signal {
 public:
  Signal(std::vector<double> times, std::vector<Eigen::VectorXd> states);

  std::size_t size() const { return times_.size(); }
  double time(std::size_t i) const { return times_[i]; }
  const Eigen::VectorXd& state(std::size_t i) const { return states_[i]; }
  double start() const { return times_.front(); }
  double end() const { return times_.back(); }

  /// Half of the smallest sampling gap; used as endpoint slack so temporal
  /// windows never miss a sample to floating-point jitter.
  double slack() const { return slack_; }

  /// Indices of samples inside [lo - slack, hi + slack]; first > last if empty.
  std::pair<std::size_t, std::size_t> window(double lo, double hi) const;

  /// Index of the sample within slack of t; throws SignalError otherwise.
  std::size_t sample_at(double t) const;

 private:
  std::vector<double> times_;
  std::vector<Eigen::VectorXd> states_;
  double slack_;
};

}  // namespace stlcbf
