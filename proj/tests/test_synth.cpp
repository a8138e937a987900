#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "loewner/conformal.hpp"
#include "loewner/diagnostics.hpp"
#include "loewner/error.hpp"
#include "loewner/synth.hpp"

using namespace loewner;
using namespace loewner::synth;

namespace {

double sample_variance(const std::vector<double>& x) {
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / (x.size() - 1);
}

}  // namespace

TEST_CASE("random source follows the documented algorithm") {
  // The 10000th output of a default-seeded mt19937_64 is fixed by the C++ standard.
  std::mt19937_64 reference;
  reference.discard(9999);
  CHECK(reference() == 9981545732273789042ULL);

  RandomSource src(5489);
  std::mt19937_64 oracle(5489);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t raw = oracle();
    CHECK(src.uniform() == static_cast<double>(raw >> 11) * 0x1.0p-53);
  }
  RandomSource a(77);
  std::mt19937_64 b(77);
  for (int i = 0; i < 100; ++i) {
    const double u1 = static_cast<double>((b() >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(b() >> 11) * 0x1.0p-53;
    const double expected = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    CHECK(a.standard_normal() == expected);
  }
  RandomSource edge(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = edge.uniform_open0();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
  CHECK(RandomSource::kAlgorithmId == "mt19937_64/top53/box-muller-cos");
}

TEST_CASE("brownian drivers") {
  RandomSource s1(7);
  RandomSource s2(7);
  const DrivingFunction a = brownian_driving(4.0, 1.0, 4096, s1);
  const DrivingFunction b = brownian_driving(4.0, 1.0, 4096, s2);
  CHECK(a.values == b.values);
  CHECK(a.times == b.times);
  CHECK(a.time_kind == TimeKind::Capacity);
  CHECK(a.values.front() == 0.0);
  CHECK(a.times.back() == 1.0);

  RandomSource z(3);
  const DrivingFunction zero = brownian_driving(0.0, 2.0, 50, z);
  for (double v : zero.values) CHECK(v == 0.0);

  RandomSource bad(3);
  CHECK_THROWS_WITH_AS(brownian_driving(-1.0, 1.0, 10, bad), doctest::Contains("NegativeKappa"), Error);
  CHECK_THROWS_AS(brownian_driving(1.0, 1.0, 0, bad), Error);

  SUBCASE("Var(U_T) = kappa T over many seeds") {
    std::vector<double> ends;
    std::vector<double> ends_quarter;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
      RandomSource src(seed);
      ends.push_back(brownian_driving(4.0, 1.0, 16, src).values.back());
      RandomSource src2(seed + 1000000);
      ends_quarter.push_back(brownian_driving(1.0, 1.0, 16, src2).values.back());
    }
    const double v = sample_variance(ends);
    CHECK(v >= 3.8);
    CHECK(v <= 4.2);
    // brownian_driving(4 kappa) ~ 2 brownian_driving(kappa).
    const double ratio = v / sample_variance(ends_quarter);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.08));
  }

  SUBCASE("increments pass their own diagnostics") {
    RandomSource src(21);
    const DrivingFunction u = brownian_driving(2.0, 1.0, 4096, src);
    const std::vector<double> dx = diagnostics::increments(u);
    const std::vector<double> acf = diagnostics::autocorrelation(dx, 20);
    const double band = 3.0 / std::sqrt(static_cast<double>(dx.size()));
    for (std::size_t lag = 1; lag < acf.size(); ++lag) CHECK(std::abs(acf[lag]) <= band);
    CHECK(sample_variance(dx) == doctest::Approx(2.0 / 4096).epsilon(0.06));
  }
}

TEST_CASE("sle traces") {
  RandomSource s(1);
  const Trace slit = sle_trace(0.0, 1.0, 100, s);
  const DrivingFunction zero = [] {
    DrivingFunction u;
    u.time_kind = TimeKind::Capacity;
    for (int k = 0; k <= 100; ++k) {
      u.times.push_back(k / 100.0);
      u.values.push_back(0.0);
    }
    return u;
  }();
  const Trace direct = conformal::forward_solve(zero);
  REQUIRE(slit.points.size() == direct.points.size());
  for (std::size_t i = 0; i < slit.points.size(); ++i) CHECK(slit.points[i] == direct.points[i]);
  CHECK(std::abs(slit.points.back() - Complex(0.0, 2.0)) < 1e-12);

  RandomSource one(2);
  const Trace seg = sle_trace(2.0, 1.0, 1, one);
  CHECK(seg.points.size() == 2);
  CHECK(seg.points[0].imag() == 0.0);
  CHECK(seg.points[1].imag() == doctest::Approx(2.0));

  RandomSource r(9);
  const Trace t = sle_trace(8.0 / 3.0, 1.0, 500, r);
  for (const auto& z : t.points) CHECK(z.imag() >= -1e-6);
  CHECK_THROWS_AS(sle_trace(-0.1, 1.0, 10, r), Error);
}

TEST_CASE("pareto samples") {
  CHECK(pareto_from_uniform(0.25, 1.0) == 4.0);
  CHECK(pareto_from_uniform(1.0, 1.5) == 1.0);
  RandomSource src(11);
  CHECK_THROWS_WITH_AS(pareto_samples(0.0, 10, src), doctest::Contains("NonpositiveAlpha"), Error);
  CHECK_THROWS_WITH_AS(pareto_samples(-2.0, 10, src), doctest::Contains("NonpositiveAlpha"), Error);
  CHECK_NOTHROW(pareto_samples(2.0, 10, src));

  const std::vector<double> x = pareto_samples(1.5, 100000, src);
  for (double v : x) CHECK(v >= 1.0);
  // Empirical survival against x^-alpha at a few thresholds.
  for (double q : {1.5, 3.0, 10.0}) {
    const double frac = std::count_if(x.begin(), x.end(), [q](double v) { return v > q; }) /
                        static_cast<double>(x.size());
    const double expected = std::pow(q, -1.5);
    const double se = std::sqrt(expected * (1 - expected) / x.size());
    CHECK(std::abs(frac - expected) < 5.0 * se);
  }
}

TEST_CASE("gaussian samples") {
  RandomSource a(4);
  RandomSource b(4);
  CHECK(gaussian_samples(1.0, 100, a) == gaussian_samples(1.0, 100, b));
  RandomSource c(5);
  for (double v : gaussian_samples(0.0, 50, c)) CHECK(v == 0.0);
  RandomSource d(6);
  const double var = sample_variance(gaussian_samples(1.0, 100000, d));
  CHECK(var >= 0.98);
  CHECK(var <= 1.02);
  CHECK_THROWS_AS(gaussian_samples(-1.0, 5, d), Error);
}
