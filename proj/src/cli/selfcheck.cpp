#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

#include <boost/math/distributions/normal.hpp>

#include "loewner/cli.hpp"
#include "loewner/conformal.hpp"
#include "loewner/diagnostics.hpp"
#include "loewner/error.hpp"
#include "loewner/synth.hpp"

// Fast analytic checks, runnable on any build in well under a minute.

namespace loewner::cli {

namespace {

using namespace loewner::conformal;
using namespace loewner::diagnostics;

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

DrivingFunction constant_driver(double value, double total_time, int n) {
  DrivingFunction u;
  u.time_kind = TimeKind::Capacity;
  for (int k = 0; k <= n; ++k) {
    u.times.push_back(total_time * k / n);
    u.values.push_back(value);
  }
  return u;
}

CheckResult slit_tip() {
  const Trace t = forward_solve(constant_driver(0.0, 1.0, 1000));
  const double err = std::abs(t.points.back() - Complex(0.0, 2.0));
  return {"slit-tip", err <= 1e-3, fmt("|tip - 2i| = %.3g (limit 1e-3)", err)};
}

// Half-plane capacity read from the composed maps at a far point,
// hcap = lim z (g(z) - z), compared with 2 T.
CheckResult hcap_numeric() {
  const DrivingFunction u = constant_driver(0.0, 1.0, 1000);
  const Complex z(0.0, 1e3);
  const double h = (z * (compose_maps(u, z) - z)).real();
  const double expected = hcap_total(u);
  const double err = std::abs(h - expected);
  return {"hcap", err <= 1e-4, fmt("numeric hcap %.9g vs %.9g", h, expected)};
}

CheckResult zipper_slit() {
  Trace slit;
  const int n = 1000;
  for (int k = 0; k <= n; ++k) slit.points.emplace_back(0.0, 2.0 * std::sqrt(static_cast<double>(k) / n));
  const DrivingFunction u = inverse_driving(slit);
  double sup = 0.0;
  for (double v : u.values) sup = std::max(sup, std::abs(v));
  const double T = u.times.back() - u.times.front();
  const bool ok = sup <= 1e-3 && std::abs(T - 1.0) <= 1e-2;
  return {"zipper-slit", ok, fmt("sup|U| = %.3g, T = %.9g", sup, T)};
}

CheckResult conformal_scaling() {
  synth::RandomSource src(11);
  const DrivingFunction u = synth::brownian_driving(2.0, 1.0, 100, src);
  Trace t = forward_solve(u);
  const DrivingFunction a = rescale_capacity(inverse_driving(t), 2.0);
  for (auto& z : t.points) z *= 2.0;
  const DrivingFunction b = inverse_driving(t);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double sv = std::max(1.0, std::abs(a.values[i]));
    const double st = std::max(1.0, std::abs(a.times[i]));
    worst = std::max({worst, std::abs(a.values[i] - b.values[i]) / sv,
                      std::abs(a.times[i] - b.times[i]) / st});
  }
  const bool ok = a.size() == b.size() && worst <= 1e-6;
  return {"conformal-scaling", ok, fmt("max relative mismatch %.3g", worst)};
}

CheckResult parseval() {
  synth::RandomSource src(3);
  std::vector<double> x(2048);
  double acc = 0.0;
  for (auto& v : x) v = acc += src.standard_normal();
  const PsdEstimate p = welch_psd(x, 1.0);
  return {"parseval", p.parseval_max_rel_error <= 1e-9,
          fmt("max relative error %.3g over %.0f segments", p.parseval_max_rel_error,
              static_cast<double>(p.segment_count))};
}

CheckResult theil_sen_exact() {
  std::vector<double> x;
  std::vector<double> y;
  for (int i = 1; i <= 50; ++i) {
    x.push_back(std::log(i));
    y.push_back(1.5 - 2.0 * std::log(i));
  }
  const LineFit f = theil_sen(x, y);
  const double err = std::max(std::abs(f.slope + 2.0), std::abs(f.intercept - 1.5));
  return {"theil-sen-power-law", err <= 1e-12, fmt("slope %.15g, intercept %.15g", f.slope, f.intercept)};
}

CheckResult hill_scale() {
  synth::RandomSource src(5);
  std::vector<double> x = synth::pareto_samples(1.5, 10000, src);
  const double a = hill_estimator(x, 500).alpha_hat;
  for (auto& v : x) v *= 3.7;
  const double b = hill_estimator(x, 500).alpha_hat;
  const double rel = std::abs(a - b) / a;
  return {"hill-scale-invariance", rel <= 1e-12, fmt("alpha %.15g vs %.15g", a, b)};
}

CheckResult dimension_segment() {
  std::vector<Point2> pts;
  for (int i = 0; i <= 2000; ++i) pts.push_back({0.05 * i, 0.02 * i});
  const double D = box_counting_dimension(pts, default_scales(pts)).D;
  return {"dimension-segment", std::abs(D - 1.0) <= 0.05, fmt("D = %.4f (expected 1 +- 0.05)", D)};
}

CheckResult dimension_raster() {
  std::vector<Point2> pts;
  for (int r = 0; r < 512; ++r) {
    for (int c = 0; c < 512; ++c) pts.push_back({static_cast<double>(c), static_cast<double>(r)});
  }
  const double D = box_counting_dimension(pts, default_scales(pts), Geometry::PointCloud).D;
  return {"dimension-raster", std::abs(D - 2.0) <= 0.05, fmt("D = %.4f (expected 2 +- 0.05)", D)};
}

CheckResult kappa_arithmetic() {
  const double k1 = kappa_from_dimension(1.0);
  const double k2 = kappa_from_dimension(1.5);
  const double k3 = kappa_from_dimension(2.0);
  return {"kappa-from-dimension", k1 == 0.0 && k2 == 4.0 && k3 == 8.0,
          fmt("kappa(1.5) = %.17g, kappa(2) = %.17g", k2, k3)};
}

CheckResult qq_fixed_point() {
  const boost::math::normal_distribution<double> nd;
  const int n = 500;
  std::vector<double> x;
  for (int i = 1; i <= n; ++i) x.push_back(boost::math::quantile(nd, (i - 0.5) / n));
  const double dev = qq_against_normal(x).max_deviation;
  return {"qq-exact-quantiles", dev <= 1e-9, fmt("max deviation %.3g", dev)};
}

}  // namespace

std::vector<CheckResult> selfcheck_results() {
  const std::vector<std::pair<const char*, std::function<CheckResult()>>> checks = {
      {"slit-tip", slit_tip},
      {"hcap", hcap_numeric},
      {"zipper-slit", zipper_slit},
      {"conformal-scaling", conformal_scaling},
      {"parseval", parseval},
      {"theil-sen-power-law", theil_sen_exact},
      {"hill-scale-invariance", hill_scale},
      {"dimension-segment", dimension_segment},
      {"dimension-raster", dimension_raster},
      {"kappa-from-dimension", kappa_arithmetic},
      {"qq-exact-quantiles", qq_fixed_point}};
  std::vector<CheckResult> out;
  for (const auto& [name, check] : checks) {
    try {
      out.push_back(check());
    } catch (const Error& e) {
      out.push_back({name, false, e.what()});
    }
  }
  return out;
}

int run_selfcheck(std::ostream& out) {
  int failed = 0;
  for (const auto& r : selfcheck_results()) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    if (!r.passed) ++failed;
  }
  out << (failed == 0 ? "selfcheck passed\n" : "selfcheck failed: " + std::to_string(failed) + " check(s)\n");
  return failed == 0 ? kExitOk : kExitSelfcheck;
}

}  // namespace loewner::cli
