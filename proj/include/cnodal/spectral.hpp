#pragma once

// Experiment drivers on flat tori: the deep-bump packing construction that
// realizes the lower scaling bound, randomized count-vs-eigenvalue sweeps,
// and the slow-oscillation 1D example, each returning a fitted scaling report.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cnodal/grid.hpp"
#include "cnodal/trig.hpp"

namespace cnodal {

struct SharpnessConfig {
  int n = 1;
  double lambda = 100;  // eigenvalue cutoff
  double delta = 1;     // depth parameter, >= 1
  double A = 64;        // bump-scale factor, > 1; epsilon = sqrt(A/lambda)
  double a1 = 1.0;      // packing density; N = floor(a1 * delta^-2 * epsilon^-n)
  // Radial bump profile with value 1 at 0, -1 at 1/2, support in [0,1).
  // Defaults to the built-in C^2 degree-8 polynomial profile.
  std::function<double(double)> bump_profile;

  void validate() const;
};

// Built-in profile (1-r^2)^3 (1 - (364/27) r^2): value 1 at r=0, -1 at
// r=1/2, triple zero at r=1 (C^2 extension by zero).
double default_bump_profile(double r);

struct SharpnessResult {
  TrigPoly f;                                // unit-L2 band-limited field
  std::vector<std::vector<double>> centers;  // bump centers on the torus
  double epsilon = 0;
  std::int64_t n_bumps = 0;          // N
  std::int64_t grid_resolution = 0;  // synthesis/analysis grid per axis
  double p_l2_norm = 0;              // ||P|| before normalization
  double remainder_l2 = 0;           // ||F - P||
  double remainder_bound = 0;        // lambda^-1 ||Laplacian F||
  bool remainder_ok = false;         // remainder_l2 <= bound
  double parseval_gap = 0;           // | ||F||^2 - ||P||^2 - ||F-P||^2 |
  double tail_linf_bound = 0;        // sum of out-of-band |coefficients|
  std::int64_t depth_passes = 0;     // centers with P >= 1/2 and P <= -1/2 on
                                     // the mid-sphere probes
  double depth_scale = 0;            // 0.5 / ||P||: bump depth of the unit field
};

// Packs N disjoint bumps on the torus (perturbed lattice, deterministic in
// seed), synthesizes their sum on a fine grid, projects onto the modes with
// |xi|^2 <= lambda by discrete Fourier analysis, and returns the normalized
// projection together with the construction certificates. Throws config_error
// when the packing cannot host N balls (message reports the feasible maximum).
SharpnessResult sharpness_construct(const SharpnessConfig& cfg, std::uint64_t seed);

struct ScalingRow {
  double parameter = 0;  // fit abscissa: lambda+1 for eigenvalue sweeps, 1/delta for depth sweeps
  std::int64_t trial = 0;
  std::uint64_t seed = 0;
  double count = 0;
  std::int64_t resolution = 0;
};

struct ScalingReport {
  std::vector<ScalingRow> rows;          // sorted by (parameter, trial)
  std::vector<double> parameter_values;  // distinct, ascending
  std::vector<double> medians;           // median count per parameter value
  double exponent = 0;                   // log-log least-squares slope
  double exponent_ci = 0;                // ~95% half-width (normal approx)
  double c1 = 0;                         // exp(intercept) of the fit
  double c2 = 0;                         // additive floor: smallest median
  std::string ensemble;                  // human-readable ensemble description
};

// Least-squares log-log fit helper shared by the drivers (medians per
// distinct parameter; x = log(parameter), y = log(median); requires >= 3
// distinct parameter values and positive medians).
ScalingReport fit_scaling(std::vector<ScalingRow> rows, std::string ensemble);

enum class SweepMode { single, product, bezout, critical };

SweepMode sweep_mode_from_string(const std::string& s);
std::string sweep_mode_to_string(SweepMode m);

// For each lambda and trial draws the mode's random field (one combination;
// a product of two; an n-tuple; a gradient), samples it at Nyquist-safe
// resolution, and counts deep components (m_0) or zero-carrying components
// (z_0) at the given delta. The report fits count vs (lambda + 1).
ScalingReport courant_sweep(int n, const std::vector<double>& lambda_list,
                            double delta, int trials, SweepMode mode,
                            std::uint64_t seed = 20240901);

struct WigglyRow {
  double delta = 0;
  std::int64_t count = 0;         // measured m_0
  std::int64_t oracle_count = 0;  // direct oscillation enumeration
  bool agree = false;
};

struct WigglyReport {
  ScalingReport scaling;  // parameter = 1/delta
  std::vector<WigglyRow> rows;
  GridField field;                 // the signed sampled field (1D box grid)
  double cut_position = 0;         // left sampling cut
  std::int64_t tracked_zeros = 0;  // zeros sampled exactly (cut index)
  bool all_agree = false;
};

// x^alpha * sin(x^-beta) on (0, 2*pi]: zeros at (m*pi)^{-1/beta} are sampled
// exactly, each oscillation carries its true extremum, and the tail below the
// least relevant depth is cut. Requires alpha = k*(beta+1) for an integer k.
WigglyReport wiggly_example(double alpha, double beta,
                            const std::vector<double>& delta_list);

// One sharpness construction per lambda; count = m_0 of the normalized field
// at 90% of the construction depth. All certificates must hold per row.
ScalingReport sharpness_sweep(int n, const std::vector<double>& lambda_list,
                              double delta, double A, double a1,
                              std::uint64_t seed = 20240901);

}  // namespace cnodal
