#pragma once

// Multiscale dyadic approximation on [0,1]^n: recursive subdivision driven
// by an explicit Sobolev smallness criterion, mollified Taylor fits with a
// closed-form remainder constant, and the resulting bar-count certificates.

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "cnodal/grid.hpp"
#include "cnodal/poly.hpp"
#include "cnodal/trig.hpp"

namespace cnodal {

struct DyadicCube {
  int level = 0;
  std::vector<std::int64_t> index;  // per-axis position, 0 <= m < 2^level

  int ndim() const { return static_cast<int>(index.size()); }
  double side() const;
  double lo(std::size_t axis) const;
  double hi(std::size_t axis) const;
  double volume() const;
  std::vector<DyadicCube> children() const;  // the 2^n half-side subcubes
  void validate() const;
};

struct DyadicPartition {
  int n = 1;
  std::vector<DyadicCube> cubes;  // leaves in deterministic traversal order

  // Verifies the leaves tile [0,1]^n exactly (volumes sum to 1 and interiors
  // are pairwise disjoint by the dyadic tree structure).
  void validate() const;
};

struct SobolevParams {
  int k = 1;     // smoothness order
  double p = 2;  // integrability; may be +infinity
  int n = 1;     // ambient dimension

  bool p_infinite() const;
  void validate() const;  // k >= 1, p >= 1, and k*p > n
};

struct MorreyConstants {
  double omega_n = 0;  // volume of the unit n-ball
  double c_n = 0;      // 2^n / omega_n
  double t = 0;        // conjugate exponent, 1/p + 1/t = 1 (t = 1 at p = inf)
  double b_nkp = 0;    // the closed-form remainder constant
  double c_prime = 0;  // b_nkp / k!
};

// Closed-form evaluation; throws input_error when k*p <= n.
MorreyConstants morrey_constant(const SobolevParams& params);

// Field inputs: exact descriptors (trigonometric or polynomial) evaluated
// analytically, or raw samples on [0,1]^n measured by finite differences.
using DyadicInput = std::variant<TrigPoly, MonomialPoly, GridField>;

// (sum_{|alpha|=k} integral_cube |d^alpha f|^p)^{1/p}; max over alpha of the
// sup for p = infinity. Analytic paths are exact (closed form) for p = 2;
// other p use composite Gauss-Legendre with one refinement. Raw grids use
// 4th-order finite differences and need >= k+2 samples per axis in the cube.
double sobolev_seminorm(const DyadicInput& field, const DyadicCube& cube,
                        const SobolevParams& params);

// True iff (vol cube)^{k/n - 1/p} * seminorm < delta / (2 * c_prime), i.e.
// the cube admits a degree-(k-1) polynomial delta/2-approximation.
bool is_good(const DyadicInput& field, const DyadicCube& cube, double delta,
             const SobolevParams& params, const MorreyConstants& consts);

struct MdpNode {
  DyadicCube cube;
  double good_margin = 0;  // delta/(2c') - (vol)^{k/n-1/p} * seminorm
  std::vector<MdpNode> children;

  bool leaf() const { return children.empty(); }
};

struct MdpLevelStats {
  int level = 0;
  std::int64_t bad_count = 0;
  double estimate1 = 0;        // 2^{n l}
  double estimate2 = 0;        // (2c'/delta)^p 2^{-l(kp-n)} S_l^p (finite p)
  double union_seminorm = 0;   // seminorm over the union of bad cubes
  double count_bound = 0;      // (2c' S/delta)^{n/k} (vol B)^{1 - n/(kp)}
  bool ok = true;
};

struct MdpBuild {
  DyadicPartition partition;
  MdpNode root;
  std::vector<MdpLevelStats> levels;
  double global_seminorm = 0;
  double delta = 0;
  SobolevParams params;
};

// Recursively subdivides bad cubes until every leaf is good. Deterministic.
// Throws depth_cap_error past max_level (numeric guard, not truncation).
MdpBuild build_mdp(const DyadicInput& field, double delta,
                   const SobolevParams& params, int max_level = 24);

struct PolyFit {
  int degree_bound = 0;  // fitted polynomial has total degree <= k-1
  std::map<std::vector<int>, double> monomial_coeffs;
  double sup_error = 0;             // measured on a dense grid over the cube
  double quadrature_tolerance = 0;  // coefficient shift under one refinement

  double eval(const std::vector<double>& x) const;
};

// Mollified Taylor fit over the ball of radius fraction*(side/2) centered in
// the cube; the remainder obeys sup_error <= c_prime * side^{k-n/p} * seminorm.
PolyFit averaged_taylor(const DyadicInput& field, const DyadicCube& cube,
                        const SobolevParams& params,
                        double mollifier_radius_fraction = 0.5);

enum class BoundKind { poly, sqrt_poly };

// Bar-count bound for a degree-k polynomial ((k+1)^n/2 + 1/2) or the norm of
// a tuple of them ((2k+1)^n/2 + 1/2) on a box.
double cube_bar_bound(int k, int n, BoundKind kind);

struct MdpCheckReport {
  double delta = 0;
  std::int64_t k_size = 0;   // number of leaves |K|
  double n_actual = 0;       // measured bar count of |field| at 2^{n+1} delta
  double bound = 0;          // per-leaf constant times |K|
  double ratio = 0;          // n_actual / k_size
  bool holds = false;
};

// Builds the partition at delta and compares the measured coarse bar count
// of |field| against the per-leaf bound. Requires an analytic descriptor.
MdpCheckReport mdp_count_check(const DyadicInput& field, double delta,
                               const SobolevParams& params, int max_level = 24);

// JSON tree {level, index, children | leaf, good_margin} and the report CSV
// (delta, K_size, n_actual, bound, ratio).
std::string mdp_to_json_string(const MdpBuild& build, int indent = 2);
std::string mdp_report_csv(const std::vector<MdpCheckReport>& reports);

}  // namespace cnodal
