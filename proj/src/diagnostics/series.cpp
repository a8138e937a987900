#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "loewner/diagnostics.hpp"
#include "loewner/error.hpp"

namespace loewner::diagnostics {

std::vector<double> increments(const std::vector<double>& values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::TooShort, "need at least 2 samples, got " + std::to_string(values.size()));
  }
  std::vector<double> out(values.size() - 1);
  for (std::size_t i = 0; i + 1 < values.size(); ++i) out[i] = values[i + 1] - values[i];
  return out;
}

std::vector<double> increments(const DrivingFunction& u) {
  if (u.segment_starts.size() > 1) {
    throw Error(ErrorCode::InvalidArgument, "increments span a gap; use one segment at a time");
  }
  return increments(u.values);
}

QQResult qq_against_normal(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 3) throw Error(ErrorCode::TooShort, "Q-Q needs at least 3 samples");
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  if (!(ss > 0.0)) throw Error(ErrorCode::DegenerateSample, "zero sample variance");

  QQResult out;
  out.theoretical.resize(n);
  const boost::math::normal_distribution<double> normal;
  for (std::size_t i = 0; i < n; ++i) {
    out.theoretical[i] = boost::math::quantile(normal, (static_cast<double>(i) + 0.5) / n);
  }
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());

  // Scale matched to the reference quantiles (slope of the Q-Q regression
  // line); the sample mean is the intercept since the quantiles are centred.
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += out.theoretical[i] * (sorted[i] - mean);
    den += out.theoretical[i] * out.theoretical[i];
  }
  const double scale = num / den;
  if (!(scale > 0.0)) throw Error(ErrorCode::DegenerateSample, "nonpositive Q-Q scale");

  out.empirical.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.empirical[i] = (sorted[i] - mean) / scale;
    out.max_deviation = std::max(out.max_deviation, std::abs(out.empirical[i] - out.theoretical[i]));
  }
  return out;
}

std::vector<double> autocorrelation(const std::vector<double>& dx, int max_lag) {
  const std::size_t n = dx.size();
  if (max_lag < 0 || static_cast<std::size_t>(max_lag) >= n) {
    throw Error(ErrorCode::TooShort, "max_lag " + std::to_string(max_lag) +
                                         " needs more than " + std::to_string(n) + " samples");
  }
  const double mean = std::accumulate(dx.begin(), dx.end(), 0.0) / static_cast<double>(n);
  std::vector<double> centred(n);
  for (std::size_t i = 0; i < n; ++i) centred[i] = dx[i] - mean;

  auto lagged = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += centred[i] * centred[i + lag];
    return s;
  };
  const double c0 = lagged(0);
  if (!(c0 > 0.0)) throw Error(ErrorCode::DegenerateSample, "zero sample variance");
  std::vector<double> acf(static_cast<std::size_t>(max_lag) + 1);
  for (int lag = 0; lag <= max_lag; ++lag) acf[lag] = lagged(static_cast<std::size_t>(lag)) / c0;
  return acf;
}

std::string to_string(VarianceMode mode) {
  return mode == VarianceMode::Ensemble ? "ensemble" : "single-series-lag";
}

namespace {

double centred_variance(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

VarianceGrowth variance_growth(const DrivingFunction& u, int n_time_bins) {
  if (n_time_bins < 2) throw Error(ErrorCode::TooFewBins, "need at least 2 bins");
  if (u.segment_starts.size() > 1) {
    throw Error(ErrorCode::InvalidArgument, "variance growth needs one contiguous segment");
  }
  const std::size_t n = u.size();
  const std::size_t max_lag = std::max<std::size_t>(n / 4, static_cast<std::size_t>(n_time_bins));

  std::vector<std::size_t> lags;
  for (int b = 1; b <= n_time_bins; ++b) {
    const std::size_t lag = static_cast<std::size_t>(
        std::ceil(static_cast<double>(b) * static_cast<double>(max_lag) / n_time_bins));
    // Each lag must leave at least two increments.
    if (lag == 0 || lag + 2 > n) continue;
    if (lags.empty() || lags.back() != lag) lags.push_back(lag);
  }
  if (lags.size() < 2) {
    throw Error(ErrorCode::TooFewBins, "series of " + std::to_string(n) +
                                           " samples supports fewer than 2 lags");
  }

  VarianceGrowth out;
  out.mode = VarianceMode::SingleSeriesLag;
  out.time_kind = u.time_kind;
  out.estimates_kappa = u.time_kind == TimeKind::Capacity;
  // Lagged increments minus the whole-series drift. For Brownian motion with
  // diffusivity k over span T the mean square is k tau (1 - tau / T), so the
  // factor is divided out; a linear ramp gives exactly zero.
  const double span = u.times.back() - u.times.front();
  const double drift = (u.values.back() - u.values.front()) / span;
  for (std::size_t lag : lags) {
    double ss = 0.0;
    double tau = 0.0;
    const std::size_t m = n - lag;
    for (std::size_t i = 0; i < m; ++i) {
      const double dt = u.times[i + lag] - u.times[i];
      const double d = u.values[i + lag] - u.values[i] - drift * dt;
      ss += d * d;
      tau += dt;
    }
    tau /= static_cast<double>(m);
    out.times.push_back(tau);
    out.variances.push_back(ss / static_cast<double>(m) / (1.0 - tau / span));
  }
  out.slope = least_squares(out.times, out.variances).slope;
  return out;
}

VarianceGrowth variance_growth(const std::vector<DrivingFunction>& ensemble, int n_time_bins) {
  if (n_time_bins < 2) throw Error(ErrorCode::TooFewBins, "need at least 2 bins");
  if (ensemble.empty()) throw Error(ErrorCode::TooFewBins, "empty ensemble");

  double t_end = std::numeric_limits<double>::infinity();
  double t_start = -std::numeric_limits<double>::infinity();
  for (const auto& u : ensemble) {
    if (u.size() < 2) throw Error(ErrorCode::TooShort, "ensemble member with < 2 samples");
    t_start = std::max(t_start, u.times.front());
    t_end = std::min(t_end, u.times.back());
  }
  if (!(t_end > t_start)) throw Error(ErrorCode::TooFewBins, "ensemble has no common time span");

  const double width = (t_end - t_start) / n_time_bins;
  std::vector<std::vector<double>> displacement(static_cast<std::size_t>(n_time_bins));
  std::vector<std::vector<double>> elapsed(static_cast<std::size_t>(n_time_bins));
  for (const auto& u : ensemble) {
    for (std::size_t i = 1; i < u.size(); ++i) {
      const double t = u.times[i] - u.times.front();
      if (u.times[i] > t_end) break;
      int b = static_cast<int>(std::floor((u.times[i] - t_start) / width));
      b = std::clamp(b, 0, n_time_bins - 1);
      displacement[b].push_back(u.values[i] - u.values.front());
      elapsed[b].push_back(t);
    }
  }

  VarianceGrowth out;
  out.mode = VarianceMode::Ensemble;
  out.time_kind = ensemble.front().time_kind;
  out.estimates_kappa = out.time_kind == TimeKind::Capacity;
  for (int b = 0; b < n_time_bins; ++b) {
    if (displacement[b].size() < 2) continue;
    out.times.push_back(std::accumulate(elapsed[b].begin(), elapsed[b].end(), 0.0) /
                        static_cast<double>(elapsed[b].size()));
    out.variances.push_back(centred_variance(displacement[b]));
  }
  if (out.times.size() < 2) throw Error(ErrorCode::TooFewBins, "fewer than 2 populated bins");
  out.slope = least_squares(out.times, out.variances).slope;
  return out;
}

}  // namespace loewner::diagnostics
