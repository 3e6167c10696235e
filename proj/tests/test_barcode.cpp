#include <doctest.h>

#include <cmath>
#include <random>

#include "cnodal/barcode.hpp"
#include "cnodal/barcode_json.hpp"

using namespace cnodal;

namespace {

// deterministic random barcode for property checks
GradedBarcode random_barcode(std::uint64_t seed, int max_deg = 2, int n = 12,
                             bool allow_infinite = true) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::uniform_int_distribution<int> coin(0, 4);
  GradedBarcode b;
  for (int i = 0; i < n; ++i) {
    double birth = u(rng);
    if (allow_infinite && coin(rng) == 0) {
      b.push_bar(deg(rng), birth, infinite_death);
    } else {
      double len = std::abs(u(rng)) + 1e-3;
      b.push_bar(deg(rng), birth, birth + len);
    }
  }
  return b;
}

GradedBarcode shifted(const GradedBarcode& b, double c) {
  GradedBarcode out;
  for (const Bar& bar : b.bars())
    out.push_bar(bar.degree, bar.birth + c,
                 bar.is_infinite() ? infinite_death : bar.death + c, bar.multiplicity);
  return out;
}

GradedBarcode scaled(const GradedBarcode& b, double s) {
  GradedBarcode out;
  for (const Bar& bar : b.bars())
    out.push_bar(bar.degree, s * bar.birth,
                 bar.is_infinite() ? infinite_death : s * bar.death, bar.multiplicity);
  return out;
}

}  // namespace

TEST_CASE("bar validation") {
  CHECK_THROWS_AS(make_bar(0, 1.0, 0.5), input_error);
  CHECK_THROWS_AS(make_bar(0, 1.0, 1.0), input_error);
  CHECK_THROWS_AS(make_bar(-1, 0.0, 1.0), input_error);
  CHECK_THROWS_AS(make_bar(0, 0.0, 1.0, 0), input_error);
  CHECK_THROWS_AS(make_bar(0, std::nan(""), 1.0), input_error);
  CHECK_THROWS_AS(make_bar(0, infinite_death, infinite_death), input_error);
  Bar b = make_bar(1, 0.5, infinite_death, 3);
  CHECK(b.is_infinite());
  CHECK(b.multiplicity == 3);
}

TEST_CASE("zero-length bars dropped, duplicates merged") {
  GradedBarcode b;
  b.push_bar(0, 1.0, 1.0);  // dropped
  CHECK(b.empty());
  b.push_bar(0, 0.0, 2.0);
  b.push_bar(0, 0.0, 2.0, 2);
  b.push_bar(1, 0.0, 2.0);
  CHECK(b.bars().size() == 2);
  CHECK(b.size() == 4);
  CHECK(b.bars()[0].multiplicity == 3);
  CHECK(b.max_degree() == 1);
}

TEST_CASE("n_delta counts strictly longer bars, infinite always") {
  GradedBarcode b;
  b.push_bar(0, 0.0, 0.5);
  b.push_bar(0, 0.0, 1.0);
  b.push_bar(1, 0.0, infinite_death);
  CHECK(n_delta(b, 0.5) == 2);   // the length-0.5 bar is excluded at delta=0.5
  CHECK(n_delta(b, 0.4) == 3);
  CHECK(n_delta(b, 100.0) == 1);  // only the essential bar
  CHECK(n_delta(b, 0.5, 0) == 1);
  CHECK(n_delta(b, 0.5, 1) == 1);
  CHECK(n_delta(b, 0.5, 2) == 0);
  CHECK_THROWS_AS(n_delta(b, -0.1), input_error);
}

TEST_CASE("n_delta of a six-hump degree-0 barcode") {
  // sublevel barcode of the negated absolute value of a 3-fold oscillation on
  // a circle: five merges at 0 plus one essential class, all born at -1
  GradedBarcode b;
  b.push_bar(0, -1.0, 0.0, 5);
  b.push_bar(0, -1.0, infinite_death);
  CHECK(n_delta(b, 0.5, 0) == 6);
  CHECK(n_delta(b, 0.999, 0) == 6);
  CHECK(n_delta(b, 1.0, 0) == 1);
}

TEST_CASE("windowed counts filter by birth") {
  GradedBarcode b;
  b.push_bar(0, 0.0, 2.0);
  b.push_bar(0, 1.0, 4.0);
  b.push_bar(0, -1.0, infinite_death);
  CHECK(n_delta_window(b, 0.5, CountWindow{0.0, 1.0}) == 2);
  CHECK(n_delta_window(b, 0.5, CountWindow{0.0, 0.5}) == 1);
  CHECK(n_delta_window(b, 2.5, CountWindow{0.0, 1.0}) == 1);
  CHECK(n_delta_window(b, 0.5, CountWindow{-2.0, 1.0}) == 3);
  CHECK_THROWS_AS(n_delta_window(b, 0.5, CountWindow{1.0, 0.0}), input_error);
}

TEST_CASE("n_delta_zero uses a symmetric tolerance window") {
  GradedBarcode b;
  b.push_bar(0, 1e-9, 1.0);
  b.push_bar(0, -1e-9, 1.0);
  b.push_bar(0, 0.5, 2.0);
  CHECK(n_delta_zero(b, 0.1, 1e-8) == 2);
  CHECK(n_delta_zero(b, 0.1, 0.0) == 0);
  CHECK(n_delta_zero(b, 0.1, 1.0) == 3);
  CHECK_THROWS_AS(n_delta_zero(b, 0.1, -1.0), input_error);
}

TEST_CASE("total norm sums lengths, truncating essentials at global max") {
  GradedBarcode b;
  b.push_bar(0, 0.0, 1.0);
  b.push_bar(0, 0.5, infinite_death);
  CHECK(barcode_total_norm(b, 2.0) == doctest::Approx(2.5));
  CHECK_THROWS_AS(barcode_total_norm(b, 0.4), input_error);

  // two essentials born at the same value as the max contribute zero
  GradedBarcode c;
  c.push_bar(0, 0.0, 1.0);
  c.push_bar(0, 0.0, infinite_death);
  c.push_bar(1, 1.0, infinite_death);
  CHECK(barcode_total_norm(c, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("p-norm") {
  GradedBarcode b;
  b.push_bar(0, 0.0, 3.0);
  b.push_bar(0, 0.0, 4.0);
  CHECK(barcode_p_norm(b, 2.0) == doctest::Approx(5.0));
  CHECK(barcode_p_norm(b, 1.0) == doctest::Approx(7.0));
  CHECK_THROWS_AS(barcode_p_norm(b, 0.5), input_error);

  GradedBarcode c;
  c.push_bar(0, 0.0, infinite_death);
  CHECK_THROWS_AS(barcode_p_norm(c, 2.0), input_error);  // needs global_max
  CHECK(barcode_p_norm(c, 2.0, 3.0) == doctest::Approx(3.0));
}

TEST_CASE("kunneth product of two finite degree-0 bars") {
  GradedBarcode b1, b2;
  b1.push_bar(0, 0.0, 2.0);
  b2.push_bar(0, 0.0, 3.0);
  GradedBarcode prod = kunneth_product(b1, b2);
  REQUIRE(prod.bars().size() == 2);
  CHECK(prod.bars()[0] == Bar{0, 0.0, 2.0, 1});
  CHECK(prod.bars()[1] == Bar{1, 3.0, 5.0, 1});
}

TEST_CASE("kunneth with essential bars emits only the first output") {
  GradedBarcode b1, b2;
  b1.push_bar(0, -1.0, infinite_death);
  b1.push_bar(1, 1.0, infinite_death);
  b2.push_bar(0, -1.0, infinite_death);
  b2.push_bar(1, 1.0, infinite_death);
  GradedBarcode prod = kunneth_product(b1, b2);
  // torus-like output: one degree 0, two degree 1, one degree 2
  CHECK(prod.size() == 4);
  CHECK(n_delta(prod, 0.0, 0) == 1);
  CHECK(n_delta(prod, 0.0, 1) == 2);
  CHECK(n_delta(prod, 0.0, 2) == 1);
  CHECK(prod.bars_in_degree(0)[0].birth == -2.0);
  CHECK(prod.bars_in_degree(1)[0].birth == 0.0);
  CHECK(prod.bars_in_degree(2)[0].birth == 2.0);
}

TEST_CASE("kunneth mixed finite/essential") {
  GradedBarcode b1, b2;
  b1.push_bar(0, 0.0, infinite_death);
  b2.push_bar(0, 1.0, 2.0);
  GradedBarcode prod = kunneth_product(b1, b2);
  REQUIRE(prod.bars().size() == 1);
  CHECK(prod.bars()[0] == Bar{0, 1.0, 2.0, 1});
}

TEST_CASE("kunneth output count bound") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    GradedBarcode b1 = random_barcode(seed), b2 = random_barcode(seed + 100);
    GradedBarcode prod = kunneth_product(b1, b2);
    CHECK(prod.size() <= 2 * b1.size() * b2.size());
  }
}

TEST_CASE("dualize on a circle barcode") {
  GradedBarcode b;
  b.push_bar(0, -1.0, infinite_death);
  b.push_bar(1, 1.0, infinite_death);
  GradedBarcode d = dualize(b, 1);
  CHECK(d == b);  // symmetric profile: the dual equals the original
}

TEST_CASE("dualize maps degrees and endpoints") {
  GradedBarcode b;
  b.push_bar(0, 0.25, 1.5, 2);
  b.push_bar(0, -2.0, infinite_death);
  GradedBarcode d = dualize(b, 2);
  REQUIRE(d.bars().size() == 2);
  CHECK(d.bars_in_degree(1)[0] == Bar{1, -1.5, -0.25, 2});
  CHECK(d.bars_in_degree(2)[0] == Bar{2, 2.0, infinite_death, 1});
}

TEST_CASE("dualize is an involution preserving lengths and counts") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    GradedBarcode b = random_barcode(seed, 1, 10);
    int n = 3;
    GradedBarcode d = dualize(b, n);
    CHECK(dualize(d, n) == b);
    CHECK(d.size() == b.size());
    for (double delta : {0.0, 0.3, 1.1})
      CHECK(n_delta(d, delta) == n_delta(b, delta));
  }
}

TEST_CASE("dualize rejects degrees above the manifold dimension") {
  GradedBarcode b;
  b.push_bar(3, 0.0, 1.0);
  CHECK_THROWS_AS(dualize(b, 2), input_error);
  GradedBarcode c;
  c.push_bar(2, 0.0, 1.0);  // finite top-degree bar cannot exist on a closed surface
  CHECK_THROWS_AS(dualize(c, 2), input_error);
  GradedBarcode e;
  e.push_bar(2, 0.0, infinite_death);
  CHECK(dualize(e, 2).bars()[0].degree == 0);
}

TEST_CASE("count monotonicity in delta") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GradedBarcode b = random_barcode(seed);
    double prev = -1;
    index_t prev_count = 0;
    for (double delta : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0}) {
      index_t c = n_delta(b, delta);
      if (prev >= 0) CHECK(c <= prev_count);
      prev = delta;
      prev_count = c;
    }
  }
}

TEST_CASE("shift invariance and scaling covariance of counts") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GradedBarcode b = random_barcode(seed);
    for (double delta : {0.0, 0.4, 1.3}) {
      CHECK(n_delta(shifted(b, 2.75), delta) == n_delta(b, delta));
      CHECK(n_delta(scaled(b, 2.0), 2.0 * delta) == n_delta(b, delta));
    }
  }
}

TEST_CASE("json round trip is exact") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GradedBarcode b = random_barcode(seed);
    GradedBarcode back = barcode_from_string(barcode_to_string(b));
    CHECK(back == b);
  }
  GradedBarcode empty;
  CHECK(barcode_from_string(barcode_to_string(empty)) == empty);
}

TEST_CASE("json parsing rejects malformed input") {
  CHECK_THROWS_AS(barcode_from_string("{}"), input_error);
  CHECK_THROWS_AS(barcode_from_string("[{\"degree\":0,\"birth\":0,\"death\":\"oo\"}]"),
                  input_error);
  CHECK_THROWS_AS(barcode_from_string("not json"), input_error);
  // numeric infinity must be spelled "inf"
  CHECK_THROWS_AS(barcode_from_string("[{\"degree\":0,\"birth\":0,\"death\":1e999}]"),
                  input_error);
}
