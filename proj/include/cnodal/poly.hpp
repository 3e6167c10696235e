#pragma once

// Dense-free multivariate polynomials in the monomial basis, used as exact
// test fields: they have closed-form derivatives and box integrals, and
// degree-d polynomials admit the classical bar-count bounds.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "cnodal/errors.hpp"
#include "cnodal/grid.hpp"
#include "cnodal/rng.hpp"

namespace cnodal {

struct MonomialPoly {
  int n = 1;
  std::map<std::vector<int>, double> coeffs;  // exponent vector -> coefficient

  int total_degree() const {
    int best = 0;
    for (const auto& [e, c] : coeffs) {
      (void)c;
      int d = 0;
      for (int v : e) d += v;
      best = std::max(best, d);
    }
    return best;
  }

  void set(const std::vector<int>& expo, double c) {
    if (static_cast<int>(expo.size()) != n)
      throw input_error("monomial exponent dimension mismatch");
    for (int v : expo)
      if (v < 0) throw input_error("monomial exponents must be >= 0");
    if (c == 0.0)
      coeffs.erase(expo);
    else
      coeffs[expo] = c;
  }

  double eval(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n)
      throw input_error("evaluation point dimension mismatch");
    double acc = 0;
    for (const auto& [e, c] : coeffs) {
      double term = c;
      for (int a = 0; a < n; ++a)
        for (int rep = 0; rep < e[static_cast<std::size_t>(a)]; ++rep)
          term *= x[static_cast<std::size_t>(a)];
      acc += term;
    }
    return acc;
  }

  MonomialPoly derivative(const std::vector<int>& alpha) const {
    if (static_cast<int>(alpha.size()) != n)
      throw input_error("derivative multi-index dimension mismatch");
    MonomialPoly out;
    out.n = n;
    for (const auto& [e, c] : coeffs) {
      double factor = 1;
      std::vector<int> reduced(e);
      bool vanished = false;
      for (int a = 0; a < n && !vanished; ++a) {
        for (int rep = 0; rep < alpha[static_cast<std::size_t>(a)]; ++rep) {
          if (reduced[static_cast<std::size_t>(a)] == 0) {
            vanished = true;
            break;
          }
          factor *= reduced[static_cast<std::size_t>(a)];
          --reduced[static_cast<std::size_t>(a)];
        }
      }
      if (!vanished) {
        auto [it, fresh] = out.coeffs.try_emplace(reduced, factor * c);
        if (!fresh) it->second += factor * c;
      }
    }
    for (auto it = out.coeffs.begin(); it != out.coeffs.end();)
      it = it->second == 0.0 ? out.coeffs.erase(it) : std::next(it);
    return out;
  }

  MonomialPoly times(const MonomialPoly& other) const {
    if (other.n != n) throw input_error("polynomial dimension mismatch");
    MonomialPoly out;
    out.n = n;
    for (const auto& [e1, c1] : coeffs)
      for (const auto& [e2, c2] : other.coeffs) {
        std::vector<int> e(e1);
        for (int a = 0; a < n; ++a) e[static_cast<std::size_t>(a)] += e2[static_cast<std::size_t>(a)];
        auto [it, fresh] = out.coeffs.try_emplace(e, c1 * c2);
        if (!fresh) it->second += c1 * c2;
      }
    return out;
  }

  // Exact integral over the axis-aligned box [lo, hi].
  double integral_box(const std::vector<double>& lo, const std::vector<double>& hi) const {
    double acc = 0;
    for (const auto& [e, c] : coeffs) {
      double term = c;
      for (int a = 0; a < n; ++a) {
        const int d = e[static_cast<std::size_t>(a)] + 1;
        term *= (std::pow(hi[static_cast<std::size_t>(a)], d) -
                 std::pow(lo[static_cast<std::size_t>(a)], d)) / d;
      }
      acc += term;
    }
    return acc;
  }

  // Values on a regular closed grid over the box (box topology per axis).
  GridField sample_box(const std::vector<double>& lo, const std::vector<double>& hi,
                       const std::vector<std::int64_t>& dims) const {
    if (static_cast<int>(dims.size()) != n || lo.size() != dims.size() ||
        hi.size() != dims.size())
      throw input_error("sample_box: dims/bounds must match dimension");
    std::vector<double> spacing(dims.size());
    for (std::size_t a = 0; a < dims.size(); ++a) {
      if (dims[a] < 2) throw input_error("sample_box: axis needs >= 2 samples");
      if (!(hi[a] > lo[a])) throw input_error("sample_box: empty axis interval");
      spacing[a] = (hi[a] - lo[a]) / static_cast<double>(dims[a] - 1);
    }
    std::int64_t total = 1;
    for (std::int64_t d : dims) total *= d;
    std::vector<double> samples(static_cast<std::size_t>(total));
    std::vector<std::int64_t> idx(dims.size(), 0);
    std::vector<double> x(dims.size());
    for (std::int64_t flat = 0; flat < total; ++flat) {
      for (std::size_t a = 0; a < dims.size(); ++a) x[a] = lo[a] + spacing[a] * idx[a];
      samples[static_cast<std::size_t>(flat)] = eval(x);
      for (std::size_t a = dims.size(); a-- > 0;) {
        if (++idx[a] < dims[a]) break;
        idx[a] = 0;
      }
    }
    return make_grid_field(dims, spacing,
                           std::vector<AxisTopology>(dims.size(), AxisTopology::box),
                           std::move(samples));
  }
};

// Gaussian coefficients on every monomial of total degree <= max_degree.
inline MonomialPoly random_poly(int n, int max_degree, std::uint64_t seed) {
  if (n < 1 || max_degree < 0) throw input_error("random_poly: bad parameters");
  Rng rng(seed);
  MonomialPoly out;
  out.n = n;
  // enumerate exponents in lexicographic order for determinism
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  while (true) {
    int total = 0;
    for (int v : e) total += v;
    if (total <= max_degree) out.set(e, rng.gaussian());
    std::size_t a = e.size();
    while (a-- > 0) {
      if (++e[a] <= max_degree) break;
      e[a] = 0;
      if (a == 0) return out;
    }
    if (e == std::vector<int>(static_cast<std::size_t>(n), 0)) break;
  }
  return out;
}

}  // namespace cnodal
