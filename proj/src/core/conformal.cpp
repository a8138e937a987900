#include "loewner/conformal.hpp"

#include <atomic>
#include <cmath>

#include "loewner/error.hpp"
#include "parallel.hpp"

namespace loewner::conformal {

namespace {

std::atomic<double> g_perturbation{0.0};

void require_capacity(const DrivingFunction& d) {
  if (d.time_kind != TimeKind::Capacity) {
    throw Error(ErrorCode::NonCapacityTime, "driver is parameterized by video time");
  }
}

// sqrt(a) with nonnegative imaginary part; on the real line the sign follows
// `side` (the real part of the point being mapped).
Complex upper_root(Complex a, double side, bool* ambiguous) {
  Complex w = std::sqrt(a);
  if (w.imag() < 0.0) w = -w;
  if (w.imag() == 0.0 && w.real() != 0.0) {
    if (side > 0.0) {
      w = Complex(std::abs(w.real()), 0.0);
    } else if (side < 0.0) {
      w = Complex(-std::abs(w.real()), 0.0);
    } else if (ambiguous) {
      *ambiguous = true;
    }
  }
  return w;
}

}  // namespace

namespace testing {
void set_map_perturbation(double delta) noexcept { g_perturbation.store(delta); }
double map_perturbation() noexcept { return g_perturbation.load(); }
}  // namespace testing

Complex elementary_map(Complex z, SlitStep step) {
  const double dt = step.dt + g_perturbation.load(std::memory_order_relaxed);
  if (dt == 0.0) return z;
  const Complex s = z - step.u;
  bool ambiguous = false;
  const Complex w = upper_root(s * s + 4.0 * dt, s.real(), &ambiguous);
  if (ambiguous) {
    throw Error(ErrorCode::TipHit, "point lies on the removed slit above u=" +
                                       std::to_string(step.u));
  }
  if (w == Complex(0.0, 0.0)) return {step.u, 0.0};
  // z + 4 dt / (w + s) equals u + w and keeps the small correction accurate
  // when |s| is large.
  const Complex sum = w + s;
  if (std::abs(sum) > std::abs(s)) return z + 4.0 * dt / sum;
  return step.u + w;
}

Complex inverse_elementary_map(Complex w, SlitStep step) {
  const double dt = step.dt + g_perturbation.load(std::memory_order_relaxed);
  if (dt == 0.0) return w;
  const Complex s = w - step.u;
  const Complex r = upper_root(s * s - 4.0 * dt, s.real(), nullptr);
  const Complex sum = r + s;
  if (std::abs(sum) > std::abs(s)) return w - 4.0 * dt / sum;
  return step.u + r;
}

std::vector<SlitStep> slit_steps(const DrivingFunction& driving) {
  std::vector<SlitStep> steps;
  if (driving.size() < 2) return steps;
  steps.reserve(driving.size() - 1);
  for (std::size_t k = 1; k < driving.size(); ++k) {
    steps.push_back({driving.values[k], driving.times[k] - driving.times[k - 1]});
  }
  return steps;
}

Trace forward_solve(const DrivingFunction& driving, int samples_per_step) {
  require_capacity(driving);
  driving.validate();
  if (driving.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "forward_solve needs at least 2 samples");
  }
  if (samples_per_step < 1) throw Error(ErrorCode::InvalidArgument, "samples_per_step < 1");

  const std::vector<SlitStep> steps = slit_steps(driving);
  const std::size_t m = static_cast<std::size_t>(samples_per_step);
  Trace trace;
  trace.base = driving.values.front();
  trace.points.resize(1 + steps.size() * m);
  trace.points[0] = Complex(trace.base, 0.0);

  detail::parallel_for(steps.size() * m, [&](std::size_t idx) {
    const std::size_t k = idx / m;
    const double frac = static_cast<double>(idx % m + 1) / static_cast<double>(m);
    Complex z(steps[k].u, 2.0 * std::sqrt(steps[k].dt * frac));
    for (std::size_t j = k; j-- > 0;) {
      z = inverse_elementary_map(z, steps[j]);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || z.imag() < -kHalfPlaneSlack) {
        throw Error(ErrorCode::NumericalBlowup,
                    "trace point " + std::to_string(idx + 1) + " left the half-plane");
      }
    }
    trace.points[idx + 1] = z;
  });
  return trace;
}

DrivingFunction inverse_driving(const Trace& curve) {
  const auto& pts = curve.points;
  if (pts.size() < 3) {
    throw Error(ErrorCode::InsufficientPoints,
                "zipper needs at least 3 points, got " + std::to_string(pts.size()));
  }
  double scale = 0.0;
  for (const auto& p : pts) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
      throw Error(ErrorCode::CurveLeavesHalfPlane, "non-finite curve point");
    }
    scale = std::max(scale, std::abs(p - pts.front()));
  }
  if (std::abs(pts.front().imag()) > 1e-9 * std::max(scale, 1.0)) {
    throw Error(ErrorCode::CurveLeavesHalfPlane, "curve does not start on the real axis");
  }
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if (pts[k].imag() < -1e-12) {
      throw Error(ErrorCode::CurveLeavesHalfPlane,
                  "point " + std::to_string(k) + " below the real axis");
    }
    if (pts[k] == pts[k - 1]) {
      throw Error(ErrorCode::ZeroStep, "points " + std::to_string(k - 1) + " and " +
                                           std::to_string(k) + " coincide");
    }
  }

  DrivingFunction out;
  out.time_kind = TimeKind::Capacity;
  out.times.reserve(pts.size());
  out.values.reserve(pts.size());
  out.times.push_back(0.0);
  out.values.push_back(pts.front().real());

  std::vector<Complex> work(pts.begin(), pts.end());
  double t = 0.0;
  for (std::size_t k = 1; k < work.size(); ++k) {
    const Complex w = work[k];
    if (!(w.imag() > 0.0)) {
      throw Error(ErrorCode::SelfTouch, "image of point " + std::to_string(k) +
                                            " reached the real axis");
    }
    const SlitStep step{w.real(), 0.25 * w.imag() * w.imag()};
    t += step.dt;
    out.times.push_back(t);
    out.values.push_back(step.u);
    for (std::size_t j = k + 1; j < work.size(); ++j) {
      try {
        work[j] = elementary_map(work[j], step);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::TipHit) throw;
        throw Error(ErrorCode::SelfTouch, "point " + std::to_string(j) +
                                              " lies on an earlier slit");
      }
    }
  }
  return out;
}

double hcap_total(const DrivingFunction& driving) {
  require_capacity(driving);
  if (driving.size() < 2) return 0.0;
  return 2.0 * (driving.times.back() - driving.times.front());
}

DrivingFunction rescale_capacity(const DrivingFunction& driving, double spatial_factor) {
  require_capacity(driving);
  if (!(spatial_factor > 0.0) || !std::isfinite(spatial_factor)) {
    throw Error(ErrorCode::NonpositiveFactor, "spatial factor must be > 0");
  }
  DrivingFunction out = driving;
  const double r2 = spatial_factor * spatial_factor;
  for (auto& v : out.values) v *= spatial_factor;
  for (auto& t : out.times) t *= r2;
  return out;
}

Complex compose_maps(const DrivingFunction& driving, Complex z) {
  require_capacity(driving);
  for (const auto& step : slit_steps(driving)) z = elementary_map(z, step);
  return z;
}

}  // namespace loewner::conformal
