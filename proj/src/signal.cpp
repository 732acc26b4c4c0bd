#include "stlcbf/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stlcbf {

Signal::Signal(std::vector<double> times, std::vector<Eigen::VectorXd> states)
    : times_(std::move(times)), states_(std::move(states)) {
  if (times_.empty()) throw SignalError("signal must be non-empty");
  if (times_.size() != states_.size())
    throw SignalError("signal times and states differ in length");
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < times_.size(); ++i) {
    const double gap = times_[i] - times_[i - 1];
    if (!(gap > 0.0)) throw SignalError("signal timestamps must be strictly increasing");
    min_gap = std::min(min_gap, gap);
  }
  slack_ = std::isfinite(min_gap) ? 0.5 * min_gap : 0.0;
}

std::pair<std::size_t, std::size_t> Signal::window(double lo, double hi) const {
  const double a = lo - slack_, b = hi + slack_;
  auto first = std::lower_bound(times_.begin(), times_.end(), a);
  auto last = std::upper_bound(times_.begin(), times_.end(), b);
  const std::size_t i = static_cast<std::size_t>(first - times_.begin());
  const std::size_t j = static_cast<std::size_t>(last - times_.begin());
  if (j == 0) return {1, 0};
  return {i, j - 1};
}

std::size_t Signal::sample_at(double t) const {
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  std::size_t best = static_cast<std::size_t>(it - times_.begin());
  if (best == times_.size()) best = times_.size() - 1;
  if (best > 0 && std::abs(times_[best - 1] - t) < std::abs(times_[best] - t)) --best;
  const double tol = slack_ > 0.0 ? slack_ : 1e-9;
  if (std::abs(times_[best] - t) > tol)
    throw SignalError("no sample at t=" + std::to_string(t));
  return best;
}

}  // namespace stlcbf
