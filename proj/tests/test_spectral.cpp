#include <doctest.h>

#include <cmath>
#include <complex>

#include "cnodal/coarse.hpp"
#include "cnodal/spectral.hpp"
#include "cnodal/trig.hpp"

using namespace cnodal;

namespace {

ScalingRow row(double parameter, std::int64_t trial, double count) {
  ScalingRow r;
  r.parameter = parameter;
  r.trial = trial;
  r.count = count;
  r.resolution = 1;
  r.seed = 0;
  return r;
}

}  // namespace

TEST_CASE("pure power laws are fitted exactly") {
  std::vector<ScalingRow> rows;
  for (double p : {10.0, 100.0, 1000.0})
    rows.push_back(row(p, 0, 3.0 * p * p));
  const ScalingReport rep = fit_scaling(rows, "synthetic");
  CHECK(rep.exponent == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(rep.c1 == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(rep.c2 == doctest::Approx(300.0));  // smallest median
  CHECK(rep.parameter_values == std::vector<double>{10.0, 100.0, 1000.0});
  CHECK(rep.ensemble == "synthetic");
}

TEST_CASE("medians are taken per parameter before fitting") {
  std::vector<ScalingRow> rows;
  for (double p : {10.0, 100.0, 1000.0}) {
    rows.push_back(row(p, 0, p));
    rows.push_back(row(p, 1, p));
    rows.push_back(row(p, 2, 1e6));  // one outlier per parameter
  }
  const ScalingReport rep = fit_scaling(rows, "with outliers");
  CHECK(rep.exponent == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.medians == std::vector<double>{10.0, 100.0, 1000.0});
}

TEST_CASE("empty-count parameters stay in the report but not the fit") {
  std::vector<ScalingRow> rows;
  rows.push_back(row(10.0, 0, 0.0));
  for (double p : {100.0, 1000.0, 10000.0}) rows.push_back(row(p, 0, p / 100.0));
  const ScalingReport rep = fit_scaling(rows, "sparse low end");
  CHECK(rep.exponent == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.medians.front() == 0.0);
  CHECK(rep.c2 == 0.0);

  // Fewer than two positive medians cannot anchor a log-log line.
  std::vector<ScalingRow> dead;
  dead.push_back(row(10.0, 0, 0.0));
  dead.push_back(row(100.0, 0, 0.0));
  dead.push_back(row(1000.0, 0, 5.0));
  CHECK_THROWS_AS(fit_scaling(dead, "dead"), config_error);

  // Fewer than three distinct parameters is a configuration error.
  std::vector<ScalingRow> narrow;
  narrow.push_back(row(10.0, 0, 1.0));
  narrow.push_back(row(100.0, 0, 2.0));
  CHECK_THROWS_AS(fit_scaling(narrow, "narrow"), config_error);
}

TEST_CASE("deterministic anchor: deep counts of sin jx scale as the square root") {
  std::vector<ScalingRow> rows;
  for (int j : {4, 8, 16}) {
    TrigPoly f(1);
    f.set({j}, std::complex<double>(0.0, -0.5));
    f.set({-j}, std::complex<double>(0.0, 0.5));
    GridField g = absolute(sample(f, 64 * j, AxisTopology::torus));
    const index_t m = coarse_m(g, 0.5, 0).count;
    CHECK(m == 2 * j);
    rows.push_back(row(static_cast<double>(j) * j + 1.0, 0,
                       static_cast<double>(m)));
  }
  const ScalingReport rep = fit_scaling(rows, "sin anchor");
  CHECK(rep.exponent > 0.4);
  CHECK(rep.exponent < 0.6);
}

TEST_CASE("sweep drivers produce full row sets and sane exponents") {
  const std::vector<double> lams{10.0, 31.6, 100.0};
  const ScalingReport rep = courant_sweep(1, lams, 0.5, 3, SweepMode::single, 7);
  CHECK(rep.rows.size() == 9);
  CHECK(rep.parameter_values == std::vector<double>{11.0, 32.6, 101.0});
  CHECK(std::isfinite(rep.exponent));
  for (const auto& r : rep.rows) {
    CHECK(r.count >= 0.0);
    CHECK(r.resolution >= 8);
  }
  CHECK(rep.ensemble.find("single") != std::string::npos);

  CHECK_THROWS_AS(courant_sweep(1, {10.0, 20.0}, 0.5, 3, SweepMode::single, 7),
                  config_error);
  CHECK_THROWS_AS(courant_sweep(1, lams, 0.5, 0, SweepMode::single, 7),
                  input_error);
}

TEST_CASE("sweep modes parse both ways") {
  for (const char* name : {"single", "product", "bezout", "critical"}) {
    CHECK(sweep_mode_to_string(sweep_mode_from_string(name)) == name);
  }
  CHECK_THROWS_AS(sweep_mode_from_string("nonsense"), input_error);
}

TEST_CASE("oscillation example agrees with its enumeration oracle") {
  const WigglyReport rep = wiggly_example(4.0, 1.0, {1e-6, 1e-7, 1e-8});
  CHECK(rep.all_agree);
  REQUIRE(rep.rows.size() == 3);
  for (const auto& r : rep.rows) {
    CHECK(r.agree);
    CHECK(r.count == r.oracle_count);
    CHECK(r.count > 0);
  }
  // Counts grow as delta shrinks, roughly like delta^(-1/4).
  CHECK(rep.rows.front().delta > rep.rows.back().delta);
  CHECK(rep.scaling.exponent > 0.15);
  CHECK(rep.scaling.exponent < 0.6);
  CHECK(rep.tracked_zeros >= 2);
  rep.field.validate();
}

TEST_CASE("oscillation example rejects degenerate parameters") {
  CHECK_THROWS_AS(wiggly_example(4.0, 0.0, {1e-6}), input_error);
  CHECK_THROWS_AS(wiggly_example(4.0, 1.0, {}), input_error);
  CHECK_THROWS_AS(wiggly_example(4.0, 1.0, {1e-40}), resolution_error);
  // alpha = k (beta + 1) must hold for an integer k >= 1.
  CHECK_THROWS_AS(wiggly_example(1.0, 3.0, {1e-6}), input_error);
}

TEST_CASE("a single constructed bump is deep and unit sized") {
  SharpnessConfig cfg;
  cfg.n = 1;
  cfg.lambda = 100.0;
  cfg.delta = 1.0;
  cfg.A = 64.0;
  cfg.a1 = 0.9;  // floor(0.9 * sqrt(100/64)) = 1 bump
  const SharpnessResult res = sharpness_construct(cfg, 11);
  CHECK(res.n_bumps == 1);
  CHECK(res.depth_passes == 1);
  CHECK(res.remainder_ok);
  CHECK(res.f.l2_norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.epsilon == doctest::Approx(0.8));
  CHECK(res.parseval_gap <= 1e-9);

  GridField g = absolute(sample(res.f, 8 * nyquist_samples(res.f),
                                AxisTopology::torus));
  const index_t deep = coarse_m(g, 0.9 * res.depth_scale, 0,
                                0.2 * res.depth_scale).count;
  CHECK(deep >= 1);
}

TEST_CASE("bump construction rejects unusable configurations") {
  SharpnessConfig tiny;
  tiny.lambda = 100.0;
  tiny.a1 = 0.1;  // floor gives zero bumps
  CHECK_THROWS_AS(sharpness_construct(tiny, 1), config_error);

  SharpnessConfig dim;
  dim.n = 3;
  CHECK_THROWS_AS(sharpness_construct(dim, 1), input_error);

  SharpnessConfig packed;
  packed.n = 1;
  packed.lambda = 100.0;
  packed.A = 64.0;
  packed.a1 = 40.0;  // wants 50 bumps, the circle fits far fewer
  try {
    sharpness_construct(packed, 1);
    FAIL("packing should be infeasible");
  } catch (const config_error& e) {
    // The failure must report the maximal feasible count.
    CHECK(std::string(e.what()).find("feasible") != std::string::npos);
  }
}

TEST_CASE("profile defaults satisfy the three bump constraints") {
  CHECK(default_bump_profile(0.0) == doctest::Approx(1.0));
  CHECK(default_bump_profile(0.5) == doctest::Approx(-1.0));
  CHECK(default_bump_profile(1.0) == 0.0);
  CHECK(default_bump_profile(1.5) == 0.0);
}
