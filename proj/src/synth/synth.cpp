#include "loewner/synth.hpp"

#include <cmath>
#include <numbers>

#include "loewner/conformal.hpp"
#include "loewner/error.hpp"

namespace loewner::synth {

namespace {
constexpr double kTwoPow53 = 9007199254740992.0;
}

double RandomSource::uniform() {
  return static_cast<double>(engine_() >> 11) / kTwoPow53;
}

double RandomSource::uniform_open0() {
  return static_cast<double>((engine_() >> 11) + 1) / kTwoPow53;
}

double RandomSource::standard_normal() {
  const double u1 = uniform_open0();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

DrivingFunction brownian_driving(double kappa, double total_time, int n_steps,
                                 RandomSource& src) {
  if (!(kappa >= 0.0)) throw Error(ErrorCode::NegativeKappa, "kappa must be >= 0");
  if (!(total_time > 0.0) || !std::isfinite(total_time)) {
    throw Error(ErrorCode::InvalidArgument, "total_time must be > 0");
  }
  if (n_steps < 1) throw Error(ErrorCode::InvalidArgument, "n_steps must be >= 1");

  const double dt = total_time / n_steps;
  const double sd = std::sqrt(kappa * dt);
  DrivingFunction u;
  u.time_kind = TimeKind::Capacity;
  u.times.resize(static_cast<std::size_t>(n_steps) + 1);
  u.values.resize(u.times.size());
  u.times[0] = 0.0;
  u.values[0] = 0.0;
  for (int k = 1; k <= n_steps; ++k) {
    u.times[k] = total_time * k / n_steps;
    // Always draw, so the stream position does not depend on kappa.
    u.values[k] = u.values[k - 1] + sd * src.standard_normal();
  }
  u.times[n_steps] = total_time;
  return u;
}

Trace sle_trace(double kappa, double total_time, int n_steps, RandomSource& src) {
  return conformal::forward_solve(brownian_driving(kappa, total_time, n_steps, src), 1);
}

double pareto_from_uniform(double u, double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::NonpositiveAlpha, "alpha must be > 0");
  return std::pow(u, -1.0 / alpha);
}

std::vector<double> pareto_samples(double alpha, int n, RandomSource& src) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::NonpositiveAlpha, "alpha must be > 0");
  }
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (auto& x : out) x = pareto_from_uniform(src.uniform_open0(), alpha);
  return out;
}

std::vector<double> gaussian_samples(double sigma, int n, RandomSource& src) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::InvalidArgument, "sigma must be >= 0");
  }
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (auto& x : out) x = sigma * src.standard_normal();
  return out;
}

}  // namespace loewner::synth
