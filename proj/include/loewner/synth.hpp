#pragma once

// Seeded ground-truth generators.
//
// The stream is std::mt19937_64 (its output sequence is fixed by the C++
// standard). Uniforms take the top 53 bits of one draw; Gaussians use the
// cosine branch of Box-Muller on exactly two uniforms, so every sample
// consumes a fixed number of draws.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "loewner/types.hpp"

namespace loewner::synth {

class RandomSource {
 public:
  static constexpr std::string_view kAlgorithmId = "mt19937_64/top53/box-muller-cos";

  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  // Uniform on (0, 1]; never returns 0.
  double uniform_open0();
  // Uniform on [0, 1).
  double uniform();
  double standard_normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

DrivingFunction brownian_driving(double kappa, double total_time, int n_steps,
                                 RandomSource& src);

Trace sle_trace(double kappa, double total_time, int n_steps, RandomSource& src);

// Survival function x^-alpha on [1, inf).
std::vector<double> pareto_samples(double alpha, int n, RandomSource& src);
// Inverse transform used by pareto_samples, exposed for direct checks.
double pareto_from_uniform(double u, double alpha);

std::vector<double> gaussian_samples(double sigma, int n, RandomSource& src);

}  // namespace loewner::synth
