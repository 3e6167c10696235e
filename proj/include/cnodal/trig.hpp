#pragma once

// Real trigonometric polynomials on the flat torus T^n = R^n/(2*pi*Z)^n,
// represented by sparse complex Fourier coefficients with conjugate symmetry.
// Frequencies are integer vectors xi; the Laplace eigenvalue of the mode
// e^{i<xi,x>} is |xi|^2, and the span of all modes with |xi|^2 <= lambda is
// the eigenfunction space the sampling and sweep drivers operate on.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "cnodal/grid.hpp"

namespace cnodal {

using FreqVector = std::vector<int>;

double freq_norm_sq(const FreqVector& xi);

struct TrigPoly {
  int n = 1;
  std::map<FreqVector, std::complex<double>> coeffs;
  std::optional<double> lambda_cut;

  TrigPoly() = default;
  explicit TrigPoly(int ndim, std::optional<double> cut = std::nullopt);

  // Inserts (or overwrites) one coefficient; throws input_error on a
  // frequency of the wrong dimension or above lambda_cut.
  void set(const FreqVector& xi, std::complex<double> c);

  std::complex<double> at(const FreqVector& xi) const;

  // Throws input_error unless coefficients are conjugate-symmetric (the
  // function is real-valued) and every frequency obeys lambda_cut.
  void validate() const;

  bool empty() const { return coeffs.empty(); }

  // Largest |xi|^2 actually present (0 for constant/empty polynomials).
  double lambda_content() const;

  double eval(const std::vector<double>& x) const;

  // Term-wise derivative d^alpha: coefficient becomes (i*xi)^alpha * c.
  TrigPoly derivative(const std::vector<int>& alpha) const;

  TrigPoly laplacian() const;

  TrigPoly scaled(double t) const;
  TrigPoly plus(const TrigPoly& other) const;

  // sqrt((2*pi)^n * sum |c_xi|^2)  (Parseval).
  double l2_norm() const;

  // Full Sobolev norm (sum_{|alpha|<=k} ||d^alpha f||_{L^2}^2)^{1/2} via the
  // closed-form Fourier weight sum_{|alpha|<=k} xi^{2 alpha}.
  double sobolev_norm(int k) const;
};

// All integer vectors xi in Z^n with |xi|^2 <= lambda, lexicographically
// sorted (deterministic enumeration order).
std::vector<FreqVector> lattice_modes(int n, double lambda);
std::int64_t lattice_mode_count(int n, double lambda);

// Random real Gaussian combination of all modes with |xi|^2 <= lambda,
// normalized to unit L^2 norm. Deterministic in seed.
TrigPoly random_combination(int n, double lambda, std::uint64_t seed);

// Per-axis sample count demanded of grids that must resolve the extrema of
// f: 8 * ceil(sqrt(max |xi|^2)), i.e. 4x oversampling of the top frequency.
std::int64_t nyquist_samples(const TrigPoly& f);

// Exact evaluation on a regular grid over [0, 2*pi]^n. Torus axes place
// samples at 2*pi*m/N (no seam duplicate); box axes include both endpoints.
// Throws resolution_error when any axis is below the density of
// nyquist_samples. The returned field carries f as its descriptor.
GridField sample(const TrigPoly& f, const std::vector<std::int64_t>& dims,
                 const std::vector<AxisTopology>& topology);
GridField sample(const TrigPoly& f, std::int64_t per_axis, AxisTopology topology);

// Exact evaluation on an arbitrary axis-aligned box (box topology on every
// axis), lo[i] <= x_i <= hi[i]. Same resolution rule, measured in spacing.
GridField sample_box(const TrigPoly& f, const std::vector<double>& lo,
                     const std::vector<double>& hi,
                     const std::vector<std::int64_t>& dims);

// Discrete Fourier analysis of a fully periodic grid: the coefficient of
// each requested mode in the trigonometric interpolant. Recovers the exact
// coefficients of a band-limited field sampled above twice its top frequency.
std::map<FreqVector, std::complex<double>> analyze_modes(
    const GridField& field, const std::vector<FreqVector>& modes);

// Coefficient convolution (pointwise product of the functions). The result's
// lambda_cut is (sum_j sqrt(lambda_j))^2 since frequency vectors add.
TrigPoly product(const std::vector<TrigPoly>& factors);

struct VectorTrigField {
  std::vector<TrigPoly> components;

  int ndim() const;
  void validate() const;  // non-empty, consistent dimension, each component real
};

// (d_1 f, ..., d_n f), each component keeping f's lambda_cut.
VectorTrigField gradient_field(const TrigPoly& f);

// Pointwise Euclidean norm sqrt(sum_i f_i^2) sampled on the grid.
GridField norm_field(const VectorTrigField& v, const std::vector<std::int64_t>& dims,
                     const std::vector<AxisTopology>& topology);
GridField norm_field(const VectorTrigField& v, std::int64_t per_axis,
                     AxisTopology topology);

}  // namespace cnodal
