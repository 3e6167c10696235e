#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "cnodal/errors.hpp"

namespace cnodal {

using index_t = std::int64_t;

inline constexpr double infinite_death = std::numeric_limits<double>::infinity();

// One bar [birth, death) of a sublevel-set barcode in a fixed homological
// degree. Essential classes carry death == infinite_death; that is the only
// non-finite value a death may take.
struct Bar {
  int degree = 0;
  double birth = 0.0;
  double death = infinite_death;
  index_t multiplicity = 1;

  bool is_infinite() const { return death == infinite_death; }
  double length() const { return death - birth; }

  friend bool operator==(const Bar&, const Bar&) = default;
};

// Validates fields and throws input_error on NaN endpoints, birth >= death,
// negative degree, or multiplicity < 1.
Bar make_bar(int degree, double birth, double death, index_t multiplicity = 1);

// Closed birth interval used by windowed counts; infinite ends allowed.
struct CountWindow {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return lower <= x && x <= upper; }
};

// Multiset of bars, kept sorted by (degree, birth, death) with equal bars
// merged into one entry with summed multiplicity. Zero-length bars are
// silently dropped on insertion; invalid bars are rejected.
class GradedBarcode {
 public:
  GradedBarcode() = default;
  explicit GradedBarcode(std::vector<Bar> bars);

  // Validates and inserts; a bar with birth == death is dropped.
  void push_bar(int degree, double birth, double death, index_t multiplicity = 1);
  void push_bar(const Bar& b) { push_bar(b.degree, b.birth, b.death, b.multiplicity); }

  const std::vector<Bar>& bars() const { return bars_; }
  int max_degree() const { return max_degree_; }

  // Total multiplicity over all entries.
  index_t size() const;
  bool empty() const { return bars_.empty(); }

  // Copies of the bars restricted to one degree.
  std::vector<Bar> bars_in_degree(int degree) const;

  friend bool operator==(const GradedBarcode&, const GradedBarcode&) = default;

 private:
  void normalize();

  std::vector<Bar> bars_;
  int max_degree_ = -1;
};

// Number of bars (with multiplicity) whose length strictly exceeds delta;
// infinite bars always qualify. Optional degree filter. delta < 0 or NaN is
// rejected.
index_t n_delta(const GradedBarcode& b, double delta,
                std::optional<int> degree = std::nullopt);

// Same count restricted to bars whose birth lies in the closed window.
index_t n_delta_window(const GradedBarcode& b, double delta, const CountWindow& window,
                       std::optional<int> degree = std::nullopt);

// Count of bars born within zero_tolerance of 0, i.e. window
// [-zero_tolerance, zero_tolerance]. zero_tolerance < 0 is rejected.
index_t n_delta_zero(const GradedBarcode& b, double delta, double zero_tolerance,
                     std::optional<int> degree = std::nullopt);

// Sum of finite bar lengths plus, for each infinite bar, global_max - birth.
// An infinite bar born after global_max is rejected.
double barcode_total_norm(const GradedBarcode& b, double global_max);

// (sum of length^p over finite bars + sum of (global_max - birth)^p over
// infinite bars)^(1/p). global_max is required when infinite bars are present.
// p must be finite and >= 1.
double barcode_p_norm(const GradedBarcode& b, double p,
                      std::optional<double> global_max = std::nullopt);

// Barcode of a sum f1 + f2 from the barcodes of f1 and f2: a pair of bars
// (a,b) in degree k1 and (c,d) in degree k2 contributes
//   (a+c, min(a+d, b+c))          in degree k1+k2, and
//   (max(a+d, b+c), b+d)          in degree k1+k2+1 when both are finite.
// Outputs with equal endpoints are dropped. Multiplicities multiply.
GradedBarcode kunneth_product(const GradedBarcode& b1, const GradedBarcode& b2);

// Barcode of -f from the barcode of f on a closed n-manifold: a finite bar
// [a,b) in degree r maps to [-b,-a) in degree n-1-r, an infinite bar [c,inf)
// in degree r maps to [-c,inf) in degree n-r. Finite bars of degree >= n and
// any bar of degree > n are rejected. Applying it twice is the identity.
GradedBarcode dualize(const GradedBarcode& b, int manifold_dim);

}  // namespace cnodal
