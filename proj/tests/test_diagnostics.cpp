#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "loewner/diagnostics.hpp"
#include "loewner/error.hpp"
#include "loewner/io.hpp"
#include "loewner/report.hpp"
#include "loewner/synth.hpp"
#include "oracles.hpp"

using namespace loewner;
using namespace loewner::diagnostics;

namespace {

std::vector<double> brownian_path(std::uint64_t seed, int n) {
  synth::RandomSource src(seed);
  std::vector<double> x(static_cast<std::size_t>(n));
  double acc = 0.0;
  for (auto& v : x) v = acc += src.standard_normal();
  return x;
}

DrivingFunction driver(std::vector<double> t, std::vector<double> v, TimeKind k = TimeKind::Video) {
  DrivingFunction u;
  u.times = std::move(t);
  u.values = std::move(v);
  u.time_kind = k;
  return u;
}

}  // namespace

TEST_CASE("increments") {
  CHECK(increments(std::vector<double>{0, 1, 3}) == std::vector<double>{1, 2});
  CHECK(increments(std::vector<double>{2, 2, 2, 2}) == std::vector<double>{0, 0, 0});
  CHECK_THROWS_WITH_AS(increments(std::vector<double>{1}), doctest::Contains("TooShort"), Error);
  CHECK(increments(driver({0, 1, 2}, {5, 4, 6})) == std::vector<double>{-1, 2});
}

TEST_CASE("normal Q-Q") {
  const int n = 400;
  std::vector<double> exact;
  for (int i = 0; i < n; ++i) exact.push_back(oracle::normal_quantile((i + 0.5) / n));
  const QQResult qq = qq_against_normal(exact);
  CHECK(qq.max_deviation <= 1e-9);
  for (int i = 0; i < n; ++i) CHECK(std::abs(qq.theoretical[i] - exact[i]) < 1e-12);

  synth::RandomSource src(4);
  const std::vector<double> g = synth::gaussian_samples(1.0, 500, src);
  const double base = qq_against_normal(g).max_deviation;
  for (double a : {0.01, 3.0, 250.0}) {
    std::vector<double> t;
    for (double v : g) t.push_back(a * v - 17.0);
    CHECK(qq_against_normal(t).max_deviation == doctest::Approx(base).epsilon(1e-9));
  }
  CHECK_THROWS_WITH_AS(qq_against_normal({1.0, 1.0, 1.0}), doctest::Contains("DegenerateSample"), Error);
  CHECK_THROWS_AS(qq_against_normal({1.0, 2.0}), Error);

  const std::vector<double> heavy = synth::pareto_samples(1.5, 500, src);
  CHECK(qq_against_normal(heavy).max_deviation > 5.0 * base);
}

TEST_CASE("Welch PSD matches a direct-DFT implementation") {
  const std::vector<double> x = brownian_path(31, 1000);
  for (Taper taper : {Taper::Hann, Taper::Rectangular}) {
    for (double overlap : {0.0, 0.5, 0.75}) {
      const int L = 64;
      const PsdEstimate p = welch_psd(x, 0.25, L, overlap, taper);
      const oracle::Periodogram ref = oracle::welch_direct(x, 0.25, L, overlap, taper == Taper::Hann);
      REQUIRE(p.powers.size() == ref.powers.size());
      CHECK(p.segment_count == ref.segments);
      for (std::size_t k = 0; k < p.powers.size(); ++k) {
        CHECK(p.frequencies[k] == doctest::Approx(ref.freqs[k]).epsilon(1e-14));
        CHECK(p.powers[k] == doctest::Approx(ref.powers[k]).epsilon(1e-9));
        CHECK(p.powers[k] >= 0.0);
        if (k > 0) CHECK(p.frequencies[k] > p.frequencies[k - 1]);
      }
      CHECK(p.parseval_max_rel_error <= 1e-9);
      CHECK(p.parseval_spectral == doctest::Approx(p.parseval_signal).epsilon(1e-9));
    }
  }
}

TEST_CASE("Welch PSD basics") {
  SUBCASE("spectral line") {
    const int n = 4096;
    const double dt = 0.5;
    const int L = 256;
    const double f0 = 20.0 / (L * dt);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = std::sin(2.0 * M_PI * f0 * i * dt);
    const PsdEstimate p = welch_psd(x, dt, L, 0.5, Taper::Hann);
    const auto peak = std::max_element(p.powers.begin(), p.powers.end()) - p.powers.begin();
    CHECK(p.frequencies[peak] == doctest::Approx(f0));
  }
  SUBCASE("defaults and errors") {
    CHECK(default_segment_length(4096) == 512);
    CHECK(default_segment_length(100) == 8);
    CHECK(default_segment_length(10) == 8);
    const std::vector<double> x = brownian_path(1, 4096);
    const PsdEstimate p = welch_psd(x, 1.0);
    CHECK(p.segment_length == 512);
    CHECK(p.overlap_fraction == 0.5);
    CHECK(p.segment_count == 15);
    CHECK_THROWS_WITH_AS(welch_psd({}, 1.0), doctest::Contains("EmptySignal"), Error);
    CHECK_THROWS_WITH_AS(welch_psd(std::vector<double>(10, 1.0), 1.0, 16, 0.5, Taper::Hann),
                         doctest::Contains("SegmentTooLong"), Error);
    CHECK_THROWS_AS(welch_psd(x, 1.0, 48, 0.5, Taper::Hann), Error);
    CHECK_THROWS_AS(welch_psd(x, 1.0, 64, 1.0, Taper::Hann), Error);
    CHECK_THROWS_AS(welch_psd(x, 0.0, 64, 0.5, Taper::Hann), Error);
  }
  SUBCASE("white noise is flat, Brownian paths fall as f^-2") {
    double white = 0.0;
    double brown = 0.0;
    for (std::uint64_t seed = 0; seed < 32; ++seed) {
      synth::RandomSource src(seed);
      const std::vector<double> w = synth::gaussian_samples(1.0, 4096, src);
      const PsdEstimate pw = welch_psd(w, 1.0);
      white += loglog_slope(pw, default_fit_range(pw)).beta;
      const PsdEstimate pb = welch_psd(brownian_path(seed + 100, 4096), 1.0);
      brown += loglog_slope(pb, default_fit_range(pb)).beta;
    }
    CHECK(std::abs(white / 32) <= 0.2);
    CHECK(brown / 32 >= 1.7);
    CHECK(brown / 32 <= 2.3);
  }
}

TEST_CASE("Theil-Sen agrees with brute-force pairwise medians") {
  synth::RandomSource src(2);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + trial;
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < n; ++i) {
      x.push_back(src.uniform() * 10.0);
      y.push_back(1.3 * x.back() + src.standard_normal());
    }
    const LineFit f = theil_sen(x, y);
    const oracle::Line ref = oracle::theil_sen(x, y);
    CHECK(f.slope == doctest::Approx(ref.slope).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(ref.intercept).epsilon(1e-12));

    // Both axis translations leave the slope unchanged.
    std::vector<double> xs = x;
    std::vector<double> ys = y;
    for (auto& v : xs) v += 3.5;
    for (auto& v : ys) v -= 8.0;
    CHECK(theil_sen(xs, ys).slope == doctest::Approx(f.slope).epsilon(1e-12));
  }
  CHECK_THROWS_AS(theil_sen({1.0}, {2.0}), Error);
  const LineFit ls = least_squares({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(ls.slope == doctest::Approx(2.0));
  CHECK(ls.intercept == doctest::Approx(1.0));
}

TEST_CASE("log-log slope") {
  PsdEstimate p;
  for (int k = 1; k <= 40; ++k) {
    p.frequencies.push_back(0.01 * k);
    p.powers.push_back(std::pow(0.01 * k, -2.0));
  }
  const FitRange all{p.frequencies.front(), p.frequencies.back()};
  const SlopeFit exact = loglog_slope(p, all);
  CHECK(exact.beta == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(exact.bins_used == 40);
  CHECK(exact.method == "theil-sen");

  PsdEstimate corrupted = p;
  corrupted.powers[17] *= 1e6;
  const SlopeFit robust = loglog_slope(corrupted, all);
  CHECK(std::abs(robust.beta - 2.0) <= 1e-6);
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t k = 0; k < p.frequencies.size(); ++k) {
    lx.push_back(std::log(corrupted.frequencies[k]));
    ly.push_back(std::log(corrupted.powers[k]));
  }
  CHECK(robust.beta == doctest::Approx(-oracle::theil_sen(lx, ly).slope).epsilon(1e-12));

  CHECK_THROWS_WITH_AS(loglog_slope(p, {0.015, 0.025}), doctest::Contains("InsufficientBins"), Error);
  PsdEstimate zero = p;
  zero.powers[3] = 0.0;
  CHECK_THROWS_WITH_AS(loglog_slope(zero, all), doctest::Contains("NonpositivePower"), Error);
  CHECK_THROWS_AS(loglog_slope(p, {0.001, 0.2}), Error);

  const FitRange r = default_fit_range(p);
  CHECK(r.omega_min == p.frequencies[2]);
  CHECK(r.omega_max == doctest::Approx(0.04));
}

TEST_CASE("sampling-rate invariance of beta") {
  const std::vector<double> x = brownian_path(77, 16384);
  std::vector<double> half;
  for (std::size_t i = 0; i < x.size(); i += 2) half.push_back(x[i]);
  const PsdEstimate a = welch_psd(x, 1.0);
  const PsdEstimate b = welch_psd(half, 2.0);
  const double ba = loglog_slope(a, default_fit_range(a)).beta;
  const double bb = loglog_slope(b, default_fit_range(b)).beta;
  CHECK(std::abs(ba - bb) <= 0.15);
}

TEST_CASE("autocorrelation") {
  synth::RandomSource src(6);
  const std::vector<double> g = synth::gaussian_samples(2.0, 300, src);
  const std::vector<double> acf = autocorrelation(g, 10);
  CHECK(acf[0] == 1.0);
  const std::vector<double> ref = oracle::acf(g, 10);
  for (int l = 0; l <= 10; ++l) CHECK(acf[l] == doctest::Approx(ref[l]).epsilon(1e-12));

  std::vector<double> alt;
  for (int i = 0; i < 1000; ++i) alt.push_back(i % 2 ? 1.0 : -1.0);
  CHECK(autocorrelation(alt, 1)[1] == doctest::Approx(-0.999).epsilon(1e-12));

  int inside = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    synth::RandomSource s(seed + 500);
    const auto a = autocorrelation(synth::gaussian_samples(1.0, 10000, s), 20);
    bool ok = true;
    for (int l = 1; l <= 20; ++l) ok &= std::abs(a[l]) <= 4.0 / 100.0;
    inside += ok;
  }
  CHECK(inside >= 38);

  CHECK_THROWS_WITH_AS(autocorrelation({1, 1, 1, 1}, 2), doctest::Contains("DegenerateSample"), Error);
  CHECK_THROWS_AS(autocorrelation({1, 2, 3}, 3), Error);
}

TEST_CASE("variance growth") {
  std::vector<double> t;
  std::vector<double> v;
  for (int i = 0; i < 200; ++i) {
    t.push_back(i * 0.5);
    v.push_back(3.0 * i * 0.5);
  }
  const VarianceGrowth ramp = variance_growth(driver(t, v), 8);
  CHECK(ramp.slope == doctest::Approx(0.0).epsilon(1e-12));
  for (double var : ramp.variances) CHECK(var == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(ramp.mode == VarianceMode::SingleSeriesLag);
  CHECK_FALSE(ramp.estimates_kappa);
  CHECK_THROWS_WITH_AS(variance_growth(driver(t, v), 1), doctest::Contains("TooFewBins"), Error);

  std::vector<DrivingFunction> ensemble;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    synth::RandomSource src(seed);
    ensemble.push_back(synth::brownian_driving(4.0, 1.0, 100, src));
  }
  const VarianceGrowth eg = variance_growth(ensemble, 10);
  CHECK(eg.mode == VarianceMode::Ensemble);
  CHECK(eg.estimates_kappa);
  CHECK(eg.slope >= 3.6);
  CHECK(eg.slope <= 4.4);

  // Single capacity-time paths: the lagged estimate is unbiased for kappa, so
  // its average over seeds settles near 4 (one path alone is noisy).
  double mean_slope = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    synth::RandomSource src(seed + 7000);
    const VarianceGrowth single = variance_growth(synth::brownian_driving(4.0, 100.0, 2000, src), 8);
    CHECK(single.estimates_kappa);
    mean_slope += single.slope / 200.0;
  }
  CHECK(mean_slope >= 3.6);
  CHECK(mean_slope <= 4.4);
}

TEST_CASE("Hill estimator") {
  const std::vector<double> x = {-9.0, 3.0, 0.0, 7.5, 1.2, -2.2, 4.4, 6.1, 0.3, 5.5, -8.8, 2.0, 1.1, 3.3};
  for (int n0 = 10; n0 <= 11; ++n0) {
    CHECK(hill_estimator(x, n0).alpha_hat == doctest::Approx(oracle::hill(x, n0)).epsilon(1e-13));
  }
  CHECK(hill_estimator(x, 10).n == static_cast<int>(x.size()));
  CHECK_THROWS_WITH_AS(hill_estimator(x, 9), doctest::Contains("ThresholdTooSmall"), Error);
  CHECK_THROWS_WITH_AS(hill_estimator(x, 13), doctest::Contains("TooFewPositive"), Error);

  synth::RandomSource src(42);
  const std::vector<double> p = synth::pareto_samples(1.5, 100000, src);
  const HillResult h = hill_estimator(p, 5000);
  CHECK(h.alpha_hat >= 1.35);
  CHECK(h.alpha_hat <= 1.65);
  std::vector<double> scaled = p;
  for (auto& v : scaled) v *= 0.37;
  CHECK(std::abs(hill_estimator(scaled, 5000).alpha_hat - h.alpha_hat) <= 1e-12 * h.alpha_hat);

  const std::vector<double> g = synth::gaussian_samples(1.0, 100000, src);
  CHECK(hill_estimator(g, 5000).alpha_hat >= 2.5);

  CHECK(default_hill_threshold(100000) == 5000);
  CHECK(default_hill_threshold(50) == 10);

  const auto curve = hill_plot(p, 50);
  REQUIRE(!curve.empty());
  CHECK(curve.size() <= 50);
  for (const auto& c : curve) {
    CHECK(c.alpha_hat == doctest::Approx(hill_estimator(p, c.n0).alpha_hat).epsilon(1e-9));
  }
}

TEST_CASE("box-counting dimension") {
  SUBCASE("straight segment") {
    std::vector<Point2> seg;
    for (int i = 0; i < 10000; ++i) seg.push_back({i * 1e-3, 0.5 * i * 1e-3});
    const DimensionEstimate d = box_counting_dimension(seg, default_scales(seg));
    CHECK(std::abs(d.D - 1.0) <= 0.05);
    // Finite-size counts put D a hair below 1, where kappa is undefined.
    if (d.D < 1.0) {
      CHECK_THROWS_WITH_AS(kappa_from_dimension(d), doctest::Contains("OutOfRangeDimension"), Error);
    } else {
      CHECK(std::abs(kappa_from_dimension(d)) <= 0.4);
    }
    CHECK(d.physical);
    for (std::size_t i = 1; i < d.counts.size(); ++i) CHECK(d.counts[i] <= d.counts[i - 1]);
    for (std::size_t i = 0; i < d.counts.size(); ++i) {
      CHECK(d.counts[i] == oracle::box_count(seg, d.scales[i], true));
    }
  }
  SUBCASE("filled raster") {
    std::vector<Point2> sq;
    for (int r = 0; r < 512; ++r) {
      for (int c = 0; c < 512; ++c) sq.push_back({static_cast<double>(c), static_cast<double>(r)});
    }
    const DimensionEstimate d = box_counting_dimension(sq, default_scales(sq), Geometry::PointCloud);
    CHECK(std::abs(d.D - 2.0) <= 0.05);
    CHECK(std::abs(kappa_from_dimension(d) - 8.0) <= 0.4);
    for (std::size_t i = 0; i < d.counts.size(); ++i) {
      CHECK(d.counts[i] == oracle::box_count(sq, d.scales[i], false));
    }
  }
  SUBCASE("Koch curve") {
    const std::vector<Point2> koch = oracle::koch_curve(6);
    const DimensionEstimate d = box_counting_dimension(koch, default_scales(koch));
    CHECK(std::abs(d.D - std::log(4.0) / std::log(3.0)) <= 0.08);
  }
  SUBCASE("translation and scaling invariance") {
    const std::vector<Point2> koch = oracle::koch_curve(5);
    const auto scales = default_scales(koch);
    const double D = box_counting_dimension(koch, scales).D;
    std::vector<Point2> moved;
    for (const auto& p : koch) moved.push_back({p.x * 8.0 + 1000.0, p.y * 8.0 - 40.0});
    std::vector<double> big;
    for (double s : scales) big.push_back(8.0 * s);
    CHECK(box_counting_dimension(moved, big).D == doctest::Approx(D).epsilon(1e-12));
  }
  SUBCASE("scale rules") {
    std::vector<Point2> seg;
    for (int i = 0; i <= 1000; ++i) seg.push_back({static_cast<double>(i), 0.0});
    CHECK_THROWS_WITH_AS(box_counting_dimension(seg, {10, 20}), doctest::Contains("BadScaleRange"), Error);
    CHECK_THROWS_WITH_AS(box_counting_dimension(seg, {10, 20, 50}), doctest::Contains("BadScaleRange"),
                         Error);
    CHECK_THROWS_WITH_AS(box_counting_dimension(seg, {1, 10, 100}), doctest::Contains("BadScaleRange"),
                         Error);
    CHECK_THROWS_WITH_AS(box_counting_dimension(seg, {20, 100, 300}), doctest::Contains("BadScaleRange"),
                         Error);
    CHECK_NOTHROW(box_counting_dimension(seg, {2, 20, 250}));
    CHECK_THROWS_WITH_AS(box_counting_dimension({{1, 1}, {1, 1}}, {1, 2, 30}),
                         doctest::Contains("DegenerateCloud"), Error);
    std::vector<Point2> tiny{{0, 0}, {1, 0}, {2, 0}};
    CHECK_THROWS_WITH_AS(default_scales(tiny), doctest::Contains("BadScaleRange"), Error);
  }
}

TEST_CASE("kappa from dimension") {
  CHECK(kappa_from_dimension(1.0) == 0.0);
  CHECK(kappa_from_dimension(1.5) == 4.0);
  CHECK(kappa_from_dimension(2.0) == 8.0);
  for (int i = 0; i <= 80; ++i) {
    const double kappa = i * 0.1;
    CHECK(kappa_from_dimension(1.0 + kappa / 8.0) == doctest::Approx(kappa).epsilon(1e-14).scale(1.0));
  }
  CHECK_THROWS_WITH_AS(kappa_from_dimension(0.9), doctest::Contains("OutOfRangeDimension"), Error);
  CHECK_THROWS_WITH_AS(kappa_from_dimension(2.01), doctest::Contains("OutOfRangeDimension"), Error);
}

TEST_CASE("driver analysis bundles") {
  AnalysisOptions opt;
  const std::vector<double> path = brownian_path(3, 4096);
  std::vector<double> t;
  for (std::size_t i = 0; i < path.size(); ++i) t.push_back(120.0 * i);
  const DriverDiagnostics d = analyze_driver(driver(t, path), opt);
  CHECK(d.errors.empty());
  REQUIRE(d.psd);
  REQUIRE(d.slope);
  CHECK(d.psd->dt == 120.0);
  CHECK(d.acf.size() == 21);
  CHECK(d.hill->n0 == default_hill_threshold(4095));
  CHECK(d.variance->mode == VarianceMode::SingleSeriesLag);
  CHECK_FALSE(d.variance->estimates_kappa);

  // Gaps: increments are pooled per segment, never across the gap.
  DrivingFunction gappy = driver({0, 1, 2, 5, 6, 7, 8}, {0, 1, 2, 100, 101, 103, 106});
  gappy.segment_starts = {0, 3};
  opt.hill_n0 = 10;
  const DriverDiagnostics g = analyze_driver(gappy, opt);
  CHECK(g.n_segments == 2);
  CHECK(g.analyzed_segment_length == 4);
  REQUIRE(g.qq_increments);
  CHECK(g.qq_increments->empirical.size() == 5);
  CHECK(g.errors.count("hill"));
  CHECK(g.errors.count("beta") + g.errors.count("psd") >= 1);

  const DriverDiagnostics flat = analyze_driver(driver({0, 1, 2, 3}, {5, 5, 5, 5}), AnalysisOptions{});
  CHECK(flat.static_driver);
  CHECK(flat.errors.count("qq"));
}

TEST_CASE("report assembly") {
  ReportEntry ok;
  ok.window_id = 3;
  ok.window_kind = "outer";
  DimensionEstimate d;
  d.D = 1.25;
  ok.attach_dimension(d);
  REQUIRE(ok.kappa);
  CHECK(*ok.kappa == 2.0);

  ReportEntry odd;
  odd.window_id = 1;
  odd.window_kind = "outer";
  DimensionEstimate d2;
  d2.D = 2.35;
  d2.physical = false;
  odd.attach_dimension(d2);
  CHECK_FALSE(odd.kappa);
  CHECK(std::count(odd.flags.begin(), odd.flags.end(), "OutOfRangeDimension") == 1);

  ReportEntry idle;
  idle.window_id = 4;
  idle.status = "InsufficientActivity";

  const DiagnosticsReport r = assemble_report({ok, idle, odd}, {}, ingest::Channel::Network);
  REQUIRE(r.entries.size() == 3);
  CHECK(r.entries[0].window_id == 1);
  CHECK(r.entries[1].window_id == 3);
  CHECK(r.local_D.counts[12] == 1);
  CHECK(r.local_D.counts[23] == 1);
  CHECK(r.local_kappa.counts[4] == 1);
  int kappa_total = 0;
  for (int c : r.local_kappa.counts) kappa_total += c;
  CHECK(kappa_total == 1);

  const auto j = to_json(r, "fixed");
  CHECK(j["schema_version"] == 1);
  CHECK(j["channel"] == "network");
  CHECK(j["entries"][0]["kappa"].is_null());
  CHECK(j["entries"][1]["kappa"] == 2.0);
  for (const char* key : {"beta", "D", "kappa", "alpha_hat", "qq_max_dev", "acf", "var_slope", "window_id",
                          "channel", "time_kind"}) {
    CHECK(j["entries"][1].contains(key));
  }

  CHECK_THROWS_WITH_AS(assemble_report({idle}, {}, ingest::Channel::Pseudopods),
                       doctest::Contains("EmptyAnalysis"), Error);
  ReportEntry global;
  global.window_kind = "global";
  CHECK(assemble_report({idle}, {global}, ingest::Channel::Pseudopods).global.size() == 1);
}

TEST_CASE("CSV serialization round trips") {
  synth::RandomSource src(12);
  const DrivingFunction u = synth::brownian_driving(2.0, 1.0, 50, src);
  const DrivingFunction back = io::parse_driving_csv(io::driving_csv(u));
  CHECK(back.values == u.values);
  CHECK(back.times == u.times);
  CHECK(back.time_kind == TimeKind::Capacity);
  CHECK(io::driving_csv(u).rfind("time,value,time_kind\n", 0) == 0);

  Trace t;
  t.points = {{0.1, 0.0}, {1.0 / 3.0, 2.0}};
  const Trace tb = io::parse_trace_csv(io::trace_csv(t));
  CHECK(tb.points == t.points);
  CHECK(io::format_number(-0.0) == "0");
  CHECK(io::format_number(0.1) == "0.10000000000000001");
  CHECK_THROWS_AS(io::parse_driving_csv("time,value\n1,2\n"), Error);
}
