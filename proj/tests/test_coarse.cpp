#include <doctest.h>

#include <complex>

#include "cnodal/coarse.hpp"
#include "cnodal/grid.hpp"
#include "cnodal/trig.hpp"

using namespace cnodal;

namespace {

TrigPoly sin_poly(int j) {
  TrigPoly f(1);
  f.set({j}, std::complex<double>(0.0, -0.5));
  f.set({-j}, std::complex<double>(0.0, 0.5));
  return f;
}

TrigPoly sin_axis(int n, int axis, int j) {
  TrigPoly f(n);
  FreqVector xi(static_cast<std::size_t>(n), 0);
  xi[static_cast<std::size_t>(axis)] = j;
  f.set(xi, std::complex<double>(0.0, -0.5));
  xi[static_cast<std::size_t>(axis)] = -j;
  f.set(xi, std::complex<double>(0.0, 0.5));
  return f;
}

}  // namespace

TEST_CASE("deep components of |sin jx| number exactly 2j") {
  for (int j : {1, 2, 3, 8}) {
    GridField f = absolute(sample(sin_poly(j), 64 * j, AxisTopology::torus));
    for (double delta : {0.1, 0.5, 0.9}) {
      const CoarseCount c = coarse_m(f, delta, 0);
      CHECK(c.count == 2 * j);
      CHECK(c.delta == delta);
      CHECK(c.degree == 0);
      CHECK(c.eta < delta);
    }
  }
}

TEST_CASE("zero-set components of a split pair number 4jk") {
  // (sin 3x, sin 5y) vanishes on the 60 points (a pi/3, b pi/5); a grid with
  // both 6 and 10 dividing the axis count hits every zero exactly.
  VectorTrigField v;
  v.components.push_back(sin_axis(2, 0, 3));
  v.components.push_back(sin_axis(2, 1, 5));
  GridField f = norm_field(v, 120, AxisTopology::torus);
  const CoarseCount z = coarse_z(f, 0.05, 0, 1e-12);
  CHECK(z.count == 60);
  CHECK(z.eta == 1e-12);
}

TEST_CASE("zero count of |sin x| at small scale is 2") {
  GridField f = absolute(sample(sin_poly(1), 64, AxisTopology::torus));
  CHECK(coarse_z(f, 0.1, 0).count == 2);
  CHECK(coarse_m(f, 0.5, 0).count == 2);
  // Degree 1 on the circle: {|sin| > delta} is a union of arcs, no loops.
  CHECK(coarse_m(f, 0.5, 1).count == 0);
}

TEST_CASE("the measurement cut guards its preconditions") {
  GridField f = absolute(sample(sin_poly(2), 32, AxisTopology::torus));
  CHECK_THROWS_AS(coarse_m(f, 0.05, 0, 0.1), input_error);   // delta <= eta
  CHECK_THROWS_AS(coarse_z(f, 0.1, 0, 0.075), input_error);  // delta <= 2 eta
  CHECK_THROWS_AS(coarse_m(f, -0.5, 0), input_error);
  const double cut = default_zero_cut(f);
  CHECK(cut > 0.0);
  CHECK(cut < 1e-10);
}

TEST_CASE("deep count is monotone non-increasing in delta") {
  TrigPoly f = random_combination(1, 144.0, 99);
  GridField g = absolute(sample(f, 8 * nyquist_samples(f), AxisTopology::torus));
  index_t prev = -1;
  for (double delta : {0.05, 0.1, 0.2, 0.4, 0.8}) {
    const index_t c = coarse_m(g, delta, 0).count;
    if (prev >= 0) CHECK(c <= prev);
    prev = c;
  }
}

TEST_CASE("deep count dominates the zero count at matching scale") {
  // Every zero-set component that survives into {|s| < delta} separates deep
  // components, so m_0 at delta plus 1 bounds z_0 on the circle.
  for (int j : {2, 5}) {
    GridField f = absolute(sample(sin_poly(j), 64 * j, AxisTopology::torus));
    const index_t m = coarse_m(f, 0.5, 0).count;
    const index_t z = coarse_z(f, 0.5, 0).count;
    CHECK(m == 2 * j);
    CHECK(z == 2 * j);
  }
}
