#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

#include <fftw3.h>

#include "loewner/diagnostics.hpp"
#include "loewner/error.hpp"

namespace loewner::diagnostics {

std::string to_string(Taper taper) { return taper == Taper::Hann ? "hann" : "rectangular"; }

Taper taper_from_string(const std::string& s) {
  if (s == "hann") return Taper::Hann;
  if (s == "rectangular" || s == "rect" || s == "boxcar") return Taper::Rectangular;
  throw Error(ErrorCode::InvalidArgument, "unknown taper '" + s + "' (hann|rectangular)");
}

int default_segment_length(std::size_t n) {
  int len = 8;
  while (static_cast<std::size_t>(len) * 2 <= n / 8) len *= 2;
  return len;
}

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class RealFft {
 public:
  explicit RealFft(int n)
      : n_(n),
        in_(fftw_alloc_real(static_cast<std::size_t>(n))),
        out_(fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1))) {
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(n, in_, out_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  double* input() { return in_; }
  void execute() { fftw_execute(plan_); }
  double power(int k) const { return out_[k][0] * out_[k][0] + out_[k][1] * out_[k][1]; }

 private:
  int n_;
  double* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

std::vector<double> taper_weights(Taper taper, int n) {
  std::vector<double> w(static_cast<std::size_t>(n), 1.0);
  if (taper == Taper::Hann) {
    for (int j = 0; j < n; ++j) w[j] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * j / n);
  }
  return w;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

PsdEstimate welch_psd(const std::vector<double>& x, double dt, int segment_length,
                      double overlap_fraction, Taper taper) {
  if (x.empty()) throw Error(ErrorCode::EmptySignal, "empty signal");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
  if (!is_power_of_two(segment_length) || segment_length < 2) {
    throw Error(ErrorCode::InvalidArgument, "segment length must be a power of two >= 2");
  }
  if (static_cast<std::size_t>(segment_length) > x.size()) {
    throw Error(ErrorCode::SegmentTooLong, "segment of " + std::to_string(segment_length) +
                                               " exceeds signal of " + std::to_string(x.size()));
  }
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "overlap must lie in [0, 1)");
  }

  const int L = segment_length;
  const std::size_t step = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(L * (1.0 - overlap_fraction))));
  const std::vector<double> w = taper_weights(taper, L);
  const double w_energy = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);

  PsdEstimate out;
  out.segment_length = L;
  out.overlap_fraction = overlap_fraction;
  out.taper = taper;
  out.dt = dt;
  const int half = L / 2;
  out.frequencies.resize(static_cast<std::size_t>(half));
  out.powers.assign(static_cast<std::size_t>(half), 0.0);
  for (int k = 1; k <= half; ++k) out.frequencies[k - 1] = k / (L * dt);

  RealFft fft(L);
  double* in = fft.input();
  for (std::size_t start = 0; start + L <= x.size(); start += step) {
    const double mean = std::accumulate(x.begin() + start, x.begin() + start + L, 0.0) / L;
    double signal_power = 0.0;
    for (int j = 0; j < L; ++j) {
      in[j] = (x[start + j] - mean) * w[j];
      signal_power += in[j] * in[j];
    }
    signal_power /= L;
    fft.execute();

    double spectral = fft.power(0) + fft.power(half);
    for (int k = 1; k < half; ++k) spectral += 2.0 * fft.power(k);
    spectral /= static_cast<double>(L) * L;

    for (int k = 1; k <= half; ++k) {
      const double two_sided = fft.power(k) * dt / w_energy;
      out.powers[k - 1] += k == half ? two_sided : 2.0 * two_sided;
    }
    out.parseval_spectral += spectral;
    out.parseval_signal += signal_power;
    const double rel = signal_power > 0.0 ? std::abs(spectral - signal_power) / signal_power
                                          : std::abs(spectral);
    out.parseval_max_rel_error = std::max(out.parseval_max_rel_error, rel);
    ++out.segment_count;
  }
  for (auto& p : out.powers) p /= out.segment_count;
  out.parseval_spectral /= out.segment_count;
  out.parseval_signal /= out.segment_count;
  return out;
}

PsdEstimate welch_psd(const std::vector<double>& x, double dt) {
  return welch_psd(x, dt, default_segment_length(x.size()), 0.5, Taper::Hann);
}

FitRange default_fit_range(const PsdEstimate& psd, int drop_low_bins, double top_decades) {
  if (psd.frequencies.empty()) throw Error(ErrorCode::InsufficientBins, "empty PSD");
  FitRange r;
  const std::size_t first = std::min<std::size_t>(static_cast<std::size_t>(std::max(drop_low_bins, 0)),
                                                  psd.frequencies.size() - 1);
  r.omega_min = psd.frequencies[first];
  r.omega_max = psd.frequencies.back() / std::pow(10.0, top_decades);
  return r;
}

SlopeFit loglog_slope(const PsdEstimate& psd, FitRange range) {
  if (psd.frequencies.empty()) throw Error(ErrorCode::InsufficientBins, "empty PSD");
  if (range.omega_min < psd.frequencies.front() * (1.0 - 1e-12) ||
      range.omega_max > psd.frequencies.back() * (1.0 + 1e-12)) {
    throw Error(ErrorCode::InvalidArgument, "fit range outside the PSD support");
  }
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t k = 0; k < psd.frequencies.size(); ++k) {
    const double f = psd.frequencies[k];
    if (f < range.omega_min * (1.0 - 1e-12) || f > range.omega_max * (1.0 + 1e-12)) continue;
    if (!(psd.powers[k] > 0.0)) {
      throw Error(ErrorCode::NonpositivePower, "power at f=" + std::to_string(f) + " is not > 0");
    }
    lx.push_back(std::log(f));
    ly.push_back(std::log(psd.powers[k]));
  }
  if (lx.size() < static_cast<std::size_t>(kMinFitBins)) {
    throw Error(ErrorCode::InsufficientBins,
                std::to_string(lx.size()) + " bins in range, need " + std::to_string(kMinFitBins));
  }
  const LineFit fit = theil_sen(lx, ly);
  SlopeFit out;
  out.beta = -fit.slope;
  out.intercept = fit.intercept;
  out.fit_range = range;
  out.bins_used = static_cast<int>(lx.size());
  return out;
}

}  // namespace loewner::diagnostics
