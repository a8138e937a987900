#include <algorithm>
#include <cmath>
#include <functional>

#include "loewner/diagnostics.hpp"
#include "loewner/error.hpp"

namespace loewner::diagnostics {

namespace {

std::vector<double> positive_magnitudes(const std::vector<double>& x) {
  std::vector<double> out;
  out.reserve(x.size());
  for (double v : x) {
    const double a = std::abs(v);
    if (a > 0.0 && std::isfinite(a)) out.push_back(a);
  }
  return out;
}

}  // namespace

int default_hill_threshold(std::size_t n, double fraction) {
  const int n0 = static_cast<int>(std::ceil(fraction * static_cast<double>(n)));
  return std::max(n0, kMinHillThreshold);
}

// alpha = (n0 + 1) / sum_{k <= n0} ln(X(k) / X(n0 + 1)), order statistics
// of |x| in descending order.
HillResult hill_estimator(const std::vector<double>& x, int n0) {
  if (n0 < kMinHillThreshold) {
    throw Error(ErrorCode::ThresholdTooSmall, "n0 = " + std::to_string(n0) + " < " +
                                                  std::to_string(kMinHillThreshold));
  }
  std::vector<double> mag = positive_magnitudes(x);
  if (static_cast<std::size_t>(n0) + 1 > mag.size()) {
    throw Error(ErrorCode::TooFewPositive, "n0 + 1 = " + std::to_string(n0 + 1) + " exceeds " +
                                               std::to_string(mag.size()) + " positive values");
  }
  std::partial_sort(mag.begin(), mag.begin() + n0 + 1, mag.end(), std::greater<>());
  const double threshold = mag[n0];
  double sum = 0.0;
  for (int k = 0; k < n0; ++k) sum += std::log(mag[k] / threshold);
  if (!(sum > 0.0)) throw Error(ErrorCode::DegenerateSample, "top order statistics are all equal");
  return {static_cast<double>(n0 + 1) / sum, n0, static_cast<int>(x.size())};
}

std::vector<HillResult> hill_plot(const std::vector<double>& x, int max_points) {
  std::vector<double> mag = positive_magnitudes(x);
  std::vector<HillResult> out;
  if (mag.size() < static_cast<std::size_t>(kMinHillThreshold) + 1 || max_points < 1) return out;
  std::sort(mag.begin(), mag.end(), std::greater<>());

  std::vector<double> log_prefix(mag.size() + 1, 0.0);
  for (std::size_t i = 0; i < mag.size(); ++i) log_prefix[i + 1] = log_prefix[i] + std::log(mag[i]);

  const int last = static_cast<int>(mag.size()) - 1;
  const int span = last - kMinHillThreshold + 1;
  const int stride = std::max(1, (span + max_points - 1) / max_points);
  for (int n0 = kMinHillThreshold; n0 <= last; n0 += stride) {
    const double sum = log_prefix[n0] - n0 * std::log(mag[n0]);
    if (sum > 0.0) out.push_back({(n0 + 1) / sum, n0, static_cast<int>(x.size())});
  }
  return out;
}

}  // namespace loewner::diagnostics
