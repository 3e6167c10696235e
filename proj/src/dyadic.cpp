#include "cnodal/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "cnodal/barcode.hpp"
#include "cnodal/cubical.hpp"
#include "cnodal/errors.hpp"
#include "cnodal/quadrature.hpp"

namespace cnodal {

namespace {

double factorial(int m) {
  double f = 1;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

double binomial(int a, int b) {
  if (b < 0 || b > a) return 0;
  return factorial(a) / (factorial(b) * factorial(a - b));
}

// All multi-indices alpha >= 0 with |alpha| == total (exact) or <= total.
void enumerate_indices(int n, int total, bool exact, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int axis, int remaining) {
    if (axis == n - 1) {
      if (exact) {
        cur[static_cast<std::size_t>(axis)] = remaining;
        out.push_back(cur);
      } else {
        for (int v = 0; v <= remaining; ++v) {
          cur[static_cast<std::size_t>(axis)] = v;
          out.push_back(cur);
        }
      }
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[static_cast<std::size_t>(axis)] = v;
      rec(axis + 1, remaining - v);
    }
  };
  rec(0, total);
}

int field_dim(const DyadicInput& field) {
  if (const auto* tp = std::get_if<TrigPoly>(&field)) return tp->n;
  if (const auto* mp = std::get_if<MonomialPoly>(&field)) return mp->n;
  return static_cast<int>(std::get<GridField>(field).ndim());
}

bool is_analytic(const DyadicInput& field) {
  return !std::holds_alternative<GridField>(field);
}

using Evaluator = std::function<double(const std::vector<double>&)>;

Evaluator derivative_evaluator(const DyadicInput& field, const std::vector<int>& alpha) {
  if (const auto* tp = std::get_if<TrigPoly>(&field)) {
    auto d = std::make_shared<TrigPoly>(tp->derivative(alpha));
    return [d](const std::vector<double>& x) { return d->eval(x); };
  }
  if (const auto* mp = std::get_if<MonomialPoly>(&field)) {
    auto d = std::make_shared<MonomialPoly>(mp->derivative(alpha));
    return [d](const std::vector<double>& x) { return d->eval(x); };
  }
  throw input_error("analytic derivative requested of a raw grid field");
}

// ---- finite differences for raw grids --------------------------------------

// Fornberg weights: derivative of order m at x0 from values at nodes x.
std::vector<double> fornberg_weights(double x0, const std::vector<double>& x, int m) {
  const int s = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(static_cast<std::size_t>(s),
                                     std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < s; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    double c5 = c4;
    c4 = x[static_cast<std::size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int kk = mn; kk >= 1; --kk)
          c[static_cast<std::size_t>(i)][static_cast<std::size_t>(kk)] =
              c1 * (kk * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(kk - 1)] -
                    c5 * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(kk)]) / c2;
        c[static_cast<std::size_t>(i)][0] = -c1 * c5 * c[static_cast<std::size_t>(i - 1)][0] / c2;
      }
      for (int kk = mn; kk >= 1; --kk)
        c[static_cast<std::size_t>(j)][static_cast<std::size_t>(kk)] =
            (c4 * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(kk)] -
             kk * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(kk - 1)]) / c3;
      c[static_cast<std::size_t>(j)][0] = c4 * c[static_cast<std::size_t>(j)][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) w[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
  return w;
}

// d^alpha of grid samples by per-axis stencils, 4th-order accurate.
std::vector<double> fd_derivative(const GridField& g, const std::vector<int>& alpha) {
  std::vector<double> data = g.samples;
  const std::size_t nd = g.ndim();
  for (std::size_t axis = 0; axis < nd; ++axis) {
    const int m = alpha[axis];
    if (m == 0) continue;
    const std::int64_t n = g.dims[axis];
    const int s = m + 4;
    if (n < s) throw resolution_error("grid too coarse for the requested derivative order");
    const double h = g.spacing[axis];
    // memoized weights per window shift (uniform nodes)
    std::map<std::int64_t, std::vector<double>> wcache;
    auto weights_for = [&](std::int64_t i, std::int64_t start) -> const std::vector<double>& {
      const std::int64_t shift = start - i;
      auto it = wcache.find(shift);
      if (it != wcache.end()) return it->second;
      std::vector<double> nodes(static_cast<std::size_t>(s));
      for (int q = 0; q < s; ++q) nodes[static_cast<std::size_t>(q)] = static_cast<double>(shift + q) * h;
      return wcache.emplace(shift, fornberg_weights(0.0, nodes, m)).first->second;
    };

    std::int64_t stride = 1;
    for (std::size_t b = nd; b-- > axis + 1;) stride *= g.dims[b];
    const std::int64_t block = stride * n;
    const std::int64_t total = static_cast<std::int64_t>(data.size());
    std::vector<double> line(static_cast<std::size_t>(n));
    for (std::int64_t base = 0; base < total; base += block) {
      for (std::int64_t off = 0; off < stride; ++off) {
        for (std::int64_t i = 0; i < n; ++i)
          line[static_cast<std::size_t>(i)] = data[base + off + i * stride];
        for (std::int64_t i = 0; i < n; ++i) {
          std::int64_t start = std::clamp<std::int64_t>(i - s / 2, 0, n - s);
          const std::vector<double>& w = weights_for(i, start);
          double acc = 0;
          for (int q = 0; q < s; ++q) acc += w[static_cast<std::size_t>(q)] * line[static_cast<std::size_t>(start + q)];
          data[base + off + i * stride] = acc;
        }
      }
    }
  }
  return data;
}

void check_unit_box_grid(const GridField& g) {
  g.validate();
  for (std::size_t a = 0; a < g.ndim(); ++a) {
    if (g.topology[a] != AxisTopology::box)
      throw input_error("dyadic approximation expects box grids on [0,1]^n");
    const double span = g.spacing[a] * static_cast<double>(g.dims[a] - 1);
    if (std::abs(span - 1.0) > 1e-9)
      throw input_error("dyadic approximation expects grids spanning [0,1] per axis");
  }
}

// ---- quadrature helpers -----------------------------------------------------

// Composite tensor Gauss-Legendre over a box; calls fn(point, weight).
void tensor_quadrature(const std::vector<double>& lo, const std::vector<double>& hi,
                       int panels, int order,
                       const std::function<void(const std::vector<double>&, double)>& fn) {
  const std::size_t nd = lo.size();
  const GaussRule& rule = gauss_legendre(order);
  const std::size_t ppa = static_cast<std::size_t>(panels) * rule.nodes.size();
  std::vector<std::vector<double>> nodes(nd), weights(nd);
  for (std::size_t a = 0; a < nd; ++a) {
    nodes[a].reserve(ppa);
    weights[a].reserve(ppa);
    const double h = (hi[a] - lo[a]) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo[a] + (p + 0.5) * h;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        nodes[a].push_back(mid + 0.5 * h * rule.nodes[q]);
        weights[a].push_back(0.5 * h * rule.weights[q]);
      }
    }
  }
  std::vector<std::size_t> idx(nd, 0);
  std::vector<double> x(nd);
  while (true) {
    double w = 1;
    for (std::size_t a = 0; a < nd; ++a) {
      x[a] = nodes[a][idx[a]];
      w *= weights[a][idx[a]];
    }
    fn(x, w);
    std::size_t a = nd;
    bool done = true;
    while (a-- > 0) {
      if (++idx[a] < ppa) {
        done = false;
        break;
      }
      idx[a] = 0;
    }
    if (done) break;
  }
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

// Bump profile r -> exp(-eps/(1-r^2)) on [0,1); its integral over the unit
// n-ball, via the radial formula n*omega_n*int r^{n-1} g(r) dr.
double bump_ball_integral(int n, double eps) {
  const double omega = unit_ball_volume(n);
  auto integrand = [&](double r) {
    const double u = 1.0 - r * r;
    if (u <= 0) return 0.0;
    return std::exp(-eps / u) * std::pow(r, n - 1);
  };
  return n * omega * integrate_1d(integrand, 0.0, 1.0, 64, 8);
}

struct BumpProfile {
  double eps = 1.0;        // profile steepness exp(-eps/(1-r^2))
  double ball_integral = 0;  // integral over the unit ball
};

// Steepest profile (largest eps, starting from 1) whose normalized sup obeys
// the mollifier budget sup <= 2 c_n (2 r1)^{-n}, i.e. omega_n e^{-eps} <= 2 I(eps).
BumpProfile select_bump_profile(int n) {
  const double omega = unit_ball_volume(n);
  double eps = 1.0;
  for (int iter = 0; iter < 60; ++iter) {
    const double integral = bump_ball_integral(n, eps);
    if (omega * std::exp(-eps) <= 2.0 * integral) return {eps, integral};
    eps *= 0.5;
  }
  throw config_error("mollifier profile selection failed");
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

// ---- cubes and partitions ---------------------------------------------------

double DyadicCube::side() const { return std::ldexp(1.0, -level); }

double DyadicCube::lo(std::size_t axis) const {
  return static_cast<double>(index[axis]) * side();
}

double DyadicCube::hi(std::size_t axis) const {
  return static_cast<double>(index[axis] + 1) * side();
}

double DyadicCube::volume() const { return std::pow(side(), ndim()); }

std::vector<DyadicCube> DyadicCube::children() const {
  const int n = ndim();
  std::vector<DyadicCube> out;
  out.reserve(static_cast<std::size_t>(1) << n);
  for (std::int64_t corner = 0; corner < (std::int64_t{1} << n); ++corner) {
    DyadicCube c;
    c.level = level + 1;
    c.index.resize(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a)
      c.index[static_cast<std::size_t>(a)] =
          2 * index[static_cast<std::size_t>(a)] + ((corner >> a) & 1);
    out.push_back(std::move(c));
  }
  return out;
}

void DyadicCube::validate() const {
  if (level < 0) throw input_error("dyadic cube level must be >= 0");
  if (index.empty()) throw input_error("dyadic cube needs >= 1 axis");
  if (level > 62) throw input_error("dyadic cube level out of range");
  const std::int64_t cap = std::int64_t{1} << level;
  for (std::int64_t m : index)
    if (m < 0 || m >= cap) throw input_error("dyadic cube index out of range");
}

void DyadicPartition::validate() const {
  if (cubes.empty()) throw input_error("partition has no cubes");
  long double vol = 0;
  for (const DyadicCube& c : cubes) {
    c.validate();
    if (c.ndim() != n) throw input_error("partition cube dimension mismatch");
    vol += static_cast<long double>(std::pow(c.side(), n));
  }
  if (std::abs(static_cast<double>(vol) - 1.0) > 1e-9)
    throw input_error("partition volumes do not tile the unit cube");
  // dyadic cubes overlap exactly when one is an ancestor of the other
  for (std::size_t i = 0; i < cubes.size(); ++i)
    for (std::size_t j = i + 1; j < cubes.size(); ++j) {
      const DyadicCube& a = cubes[i].level <= cubes[j].level ? cubes[i] : cubes[j];
      const DyadicCube& b = cubes[i].level <= cubes[j].level ? cubes[j] : cubes[i];
      const int shift = b.level - a.level;
      bool same = true;
      for (int ax = 0; ax < n && same; ++ax)
        same = (b.index[static_cast<std::size_t>(ax)] >> shift) ==
               a.index[static_cast<std::size_t>(ax)];
      if (same) throw input_error("partition cubes overlap");
    }
}

// ---- parameters and constants ----------------------------------------------

bool SobolevParams::p_infinite() const { return std::isinf(p); }

void SobolevParams::validate() const {
  if (n < 1) throw input_error("dimension must be >= 1");
  if (k < 1) throw input_error("smoothness order k must be >= 1");
  if (!(p >= 1.0)) throw input_error("integrability p must be >= 1");
  const double kp = p_infinite() ? std::numeric_limits<double>::infinity()
                                 : static_cast<double>(k) * p;
  if (!(kp > static_cast<double>(n)))
    throw input_error("need k*p > n (equivalently k > n/p) for the Morrey embedding");
}

MorreyConstants morrey_constant(const SobolevParams& params) {
  params.validate();
  MorreyConstants mc;
  const int n = params.n;
  const int k = params.k;
  mc.omega_n = unit_ball_volume(n);
  mc.c_n = std::pow(2.0, n) / mc.omega_n;

  double glfactor;  // (n*omega_n / (t(k-n)+n))^{1/t}
  if (params.p_infinite()) {
    mc.t = 1.0;
    glfactor = n * mc.omega_n / (1.0 * (k - n) + n);
  } else if (params.p == 1.0) {
    mc.t = std::numeric_limits<double>::infinity();
    glfactor = 1.0;  // limit of the bracket^{1/t} as t -> infinity
  } else {
    mc.t = params.p / (params.p - 1.0);
    const double denom = mc.t * (k - n) + n;  // equals (kp-n)/(p-1) > 0
    glfactor = std::pow(n * mc.omega_n / denom, 1.0 / mc.t);
  }

  const double inv_2p = params.p_infinite() ? 0.0 : 1.0 / (2.0 * params.p);
  mc.b_nkp = 2.0 * k * mc.c_n *
             std::pow(static_cast<double>(n), 0.5 * k - 1.0 - n * inv_2p) *
             glfactor * std::pow(static_cast<double>(n), k);
  mc.c_prime = mc.b_nkp / factorial(k);
  return mc;
}

// ---- seminorms ---------------------------------------------------------------

namespace {

double trig_l2_cube_seminorm_sq(const TrigPoly& f, const DyadicCube& cube, int k) {
  std::vector<std::vector<int>> alphas;
  enumerate_indices(f.n, k, true, alphas);
  const std::size_t nd = static_cast<std::size_t>(f.n);
  std::vector<double> lo(nd), hi(nd);
  for (std::size_t a = 0; a < nd; ++a) {
    lo[a] = cube.lo(a);
    hi[a] = cube.hi(a);
  }
  double total = 0;
  for (const auto& alpha : alphas) {
    TrigPoly d = f.derivative(alpha);
    if (d.coeffs.empty()) continue;
    std::vector<std::pair<FreqVector, std::complex<double>>> modes(d.coeffs.begin(),
                                                                   d.coeffs.end());
    std::complex<double> acc(0, 0);
    for (const auto& [xi, cx] : modes)
      for (const auto& [eta, ce] : modes) {
        std::complex<double> box(1.0, 0.0);
        for (std::size_t a = 0; a < nd; ++a) {
          const double mu = static_cast<double>(xi[a] - eta[a]);
          if (mu == 0.0) {
            box *= hi[a] - lo[a];
          } else {
            const std::complex<double> imu(0.0, mu);
            box *= (std::exp(imu * hi[a]) - std::exp(imu * lo[a])) / imu;
          }
        }
        acc += cx * std::conj(ce) * box;
      }
    total += std::max(0.0, acc.real());
  }
  return total;
}

double poly_l2_cube_seminorm_sq(const MonomialPoly& f, const DyadicCube& cube, int k) {
  std::vector<std::vector<int>> alphas;
  enumerate_indices(f.n, k, true, alphas);
  const std::size_t nd = static_cast<std::size_t>(f.n);
  std::vector<double> lo(nd), hi(nd);
  for (std::size_t a = 0; a < nd; ++a) {
    lo[a] = cube.lo(a);
    hi[a] = cube.hi(a);
  }
  double total = 0;
  for (const auto& alpha : alphas) {
    MonomialPoly d = f.derivative(alpha);
    total += std::max(0.0, d.times(d).integral_box(lo, hi));
  }
  return total;
}

double analytic_seminorm_quadrature(const DyadicInput& field, const DyadicCube& cube,
                                    const SobolevParams& params) {
  std::vector<std::vector<int>> alphas;
  enumerate_indices(params.n, params.k, true, alphas);
  const std::size_t nd = static_cast<std::size_t>(params.n);
  std::vector<double> lo(nd), hi(nd);
  for (std::size_t a = 0; a < nd; ++a) {
    lo[a] = cube.lo(a);
    hi[a] = cube.hi(a);
  }
  std::vector<Evaluator> evals;
  evals.reserve(alphas.size());
  for (const auto& alpha : alphas) evals.push_back(derivative_evaluator(field, alpha));

  if (params.p_infinite()) {
    // dense-grid sup per derivative
    const std::int64_t per_axis = params.n == 1 ? 257 : 65;
    double best = 0;
    std::vector<std::int64_t> idx(nd, 0);
    std::vector<double> x(nd);
    while (true) {
      for (std::size_t a = 0; a < nd; ++a)
        x[a] = lo[a] + (hi[a] - lo[a]) * static_cast<double>(idx[a]) / (per_axis - 1);
      for (const Evaluator& ev : evals) best = std::max(best, std::abs(ev(x)));
      std::size_t a = nd;
      bool done = true;
      while (a-- > 0) {
        if (++idx[a] < per_axis) {
          done = false;
          break;
        }
        idx[a] = 0;
      }
      if (done) break;
    }
    return best;
  }

  const int order = std::max(4, 2 * params.k);
  const int panels = params.n == 1 ? 16 : 8;
  double total = 0;
  for (const Evaluator& ev : evals) {
    double acc = 0;
    tensor_quadrature(lo, hi, panels, order, [&](const std::vector<double>& x, double w) {
      acc += w * std::pow(std::abs(ev(x)), params.p);
    });
    total += acc;
  }
  return std::pow(total, 1.0 / params.p);
}

double grid_seminorm(const GridField& g, const DyadicCube& cube,
                     const SobolevParams& params) {
  check_unit_box_grid(g);
  const std::size_t nd = g.ndim();

  // per-axis index ranges inside the cube
  std::vector<std::vector<std::int64_t>> in_axis(nd);
  for (std::size_t a = 0; a < nd; ++a) {
    const double lo = cube.lo(a), hi = cube.hi(a);
    for (std::int64_t i = 0; i < g.dims[a]; ++i) {
      const double x = g.spacing[a] * static_cast<double>(i);
      if (x >= lo - 1e-12 && x <= hi + 1e-12) in_axis[a].push_back(i);
    }
    if (static_cast<std::int64_t>(in_axis[a].size()) < params.k + 2)
      throw resolution_error("cube holds fewer than k+2 samples per axis");
  }

  std::vector<std::vector<int>> alphas;
  enumerate_indices(params.n, params.k, true, alphas);

  double total = 0;      // finite p accumulator
  double sup_acc = 0;    // p = infinity accumulator
  for (const auto& alpha : alphas) {
    std::vector<double> d = fd_derivative(g, alpha);
    // Riemann sum over the cube: each sample weighted by the overlap of its
    // h-cell with the cube (integrates partial boundary cells correctly).
    std::vector<std::size_t> pos(nd, 0);
    while (true) {
      std::int64_t flat = 0;
      double w = 1;
      for (std::size_t a = 0; a < nd; ++a) {
        const std::int64_t i = in_axis[a][pos[a]];
        flat = flat * g.dims[a] + i;
        const double x = g.spacing[a] * static_cast<double>(i);
        const double cell_lo = std::max(cube.lo(a), x - 0.5 * g.spacing[a]);
        const double cell_hi = std::min(cube.hi(a), x + 0.5 * g.spacing[a]);
        w *= std::max(0.0, cell_hi - cell_lo);
      }
      const double v = std::abs(d[static_cast<std::size_t>(flat)]);
      if (params.p_infinite())
        sup_acc = std::max(sup_acc, v);
      else
        total += w * std::pow(v, params.p);
      std::size_t a = nd;
      bool done = true;
      while (a-- > 0) {
        if (++pos[a] < in_axis[a].size()) {
          done = false;
          break;
        }
        pos[a] = 0;
      }
      if (done) break;
    }
  }
  return params.p_infinite() ? sup_acc : std::pow(total, 1.0 / params.p);
}

}  // namespace

double sobolev_seminorm(const DyadicInput& field, const DyadicCube& cube,
                        const SobolevParams& params) {
  params.validate();
  cube.validate();
  if (cube.ndim() != params.n || field_dim(field) != params.n)
    throw input_error("field/cube/params dimension mismatch");

  if (const auto* tp = std::get_if<TrigPoly>(&field)) {
    tp->validate();
    if (params.p == 2.0)
      return std::sqrt(trig_l2_cube_seminorm_sq(*tp, cube, params.k));
    return analytic_seminorm_quadrature(field, cube, params);
  }
  if (const auto* mp = std::get_if<MonomialPoly>(&field)) {
    if (params.p == 2.0)
      return std::sqrt(poly_l2_cube_seminorm_sq(*mp, cube, params.k));
    return analytic_seminorm_quadrature(field, cube, params);
  }
  return grid_seminorm(std::get<GridField>(field), cube, params);
}

bool is_good(const DyadicInput& field, const DyadicCube& cube, double delta,
             const SobolevParams& params, const MorreyConstants& consts) {
  if (!(delta > 0)) throw input_error("delta must be positive");
  const MorreyConstants expected = morrey_constant(params);
  if (std::abs(consts.c_prime - expected.c_prime) >
      1e-9 * std::max(1.0, expected.c_prime))
    throw input_error("Morrey constants inconsistent with the given parameters");
  const double sem = sobolev_seminorm(field, cube, params);
  const double inv_p = params.p_infinite() ? 0.0 : 1.0 / params.p;
  const double scale = std::pow(cube.volume(), static_cast<double>(params.k) / params.n - inv_p);
  return scale * sem < delta / (2.0 * consts.c_prime);
}

// ---- partition construction ---------------------------------------------------

namespace {

struct LevelAccumulator {
  std::int64_t active = 0;
  std::int64_t bad = 0;
  double bad_pow_sum = 0;   // sum of seminorm^p over bad cubes (finite p)
  double bad_sup = 0;       // max seminorm over bad cubes (p = infinity)
};

}  // namespace

MdpBuild build_mdp(const DyadicInput& field, double delta,
                   const SobolevParams& params, int max_level) {
  params.validate();
  if (!(delta > 0)) throw input_error("delta must be positive");
  if (field_dim(field) != params.n) throw input_error("field/params dimension mismatch");
  if (max_level < 0 || max_level > 40) throw input_error("depth cap out of range");

  const MorreyConstants consts = morrey_constant(params);
  const double threshold = delta / (2.0 * consts.c_prime);
  const double inv_p = params.p_infinite() ? 0.0 : 1.0 / params.p;
  const double vol_exp = static_cast<double>(params.k) / params.n - inv_p;

  std::map<int, LevelAccumulator> levels;
  MdpBuild out;
  out.delta = delta;
  out.params = params;

  std::function<MdpNode(const DyadicCube&)> descend = [&](const DyadicCube& cube) {
    const double sem = sobolev_seminorm(field, cube, params);
    MdpNode node;
    node.cube = cube;
    node.good_margin = threshold - std::pow(cube.volume(), vol_exp) * sem;
    LevelAccumulator& acc = levels[cube.level];
    ++acc.active;
    if (node.good_margin > 0) {
      out.partition.cubes.push_back(cube);
      return node;
    }
    ++acc.bad;
    if (params.p_infinite())
      acc.bad_sup = std::max(acc.bad_sup, sem);
    else
      acc.bad_pow_sum += std::pow(sem, params.p);
    if (cube.level >= max_level)
      throw depth_cap_error("dyadic subdivision exceeded the depth cap");
    for (const DyadicCube& child : cube.children())
      node.children.push_back(descend(child));
    return node;
  };

  DyadicCube root;
  root.level = 0;
  root.index.assign(static_cast<std::size_t>(params.n), 0);
  out.partition.n = params.n;
  out.root = descend(root);
  out.global_seminorm = sobolev_seminorm(field, root, params);

  // Per-level certificates: both counting estimates and the volume-weighted
  // count bound follow from the badness criterion with the same seminorms.
  for (const auto& [level, acc] : levels) {
    MdpLevelStats st;
    st.level = level;
    st.bad_count = acc.bad;
    st.estimate1 = std::pow(2.0, params.n * level);
    if (!params.p_infinite() && acc.bad > 0) {
      st.union_seminorm = std::pow(acc.bad_pow_sum, 1.0 / params.p);
      const double kp_minus_n = static_cast<double>(params.k) * params.p - params.n;
      st.estimate2 = std::pow(2.0 * consts.c_prime / delta, params.p) *
                     std::pow(2.0, -static_cast<double>(level) * kp_minus_n) *
                     acc.bad_pow_sum;
      const double vol_bad =
          static_cast<double>(acc.bad) * std::pow(2.0, -static_cast<double>(params.n) * level);
      st.count_bound =
          std::pow(2.0 * consts.c_prime * st.union_seminorm / delta,
                   static_cast<double>(params.n) / params.k) *
          std::pow(vol_bad, 1.0 - params.n / (static_cast<double>(params.k) * params.p));
      const double slack = 1.0 + 1e-9;
      st.ok = static_cast<double>(acc.bad) <= st.estimate1 * slack &&
              static_cast<double>(acc.bad) <= st.estimate2 * slack &&
              static_cast<double>(acc.bad) <= st.count_bound * slack;
    } else if (params.p_infinite() && acc.bad > 0) {
      st.union_seminorm = acc.bad_sup;
      st.estimate2 = std::numeric_limits<double>::quiet_NaN();
      st.count_bound = std::numeric_limits<double>::quiet_NaN();
      st.ok = static_cast<double>(acc.bad) <= st.estimate1 * (1.0 + 1e-9);
    }
    out.levels.push_back(st);
    if (!st.ok)
      throw std::logic_error("internal bad-cube count certificate failed");
  }
  out.partition.validate();
  return out;
}

// ---- averaged Taylor fit -------------------------------------------------------

double PolyFit::eval(const std::vector<double>& x) const {
  double acc = 0;
  for (const auto& [e, c] : monomial_coeffs) {
    double term = c;
    for (std::size_t a = 0; a < e.size(); ++a)
      for (int rep = 0; rep < e[a]; ++rep) term *= x[a];
    acc += term;
  }
  return acc;
}

namespace {

// One quadrature pass of the mollified Taylor coefficients.
std::map<std::vector<int>, double> taylor_pass(
    const std::vector<Evaluator>& devals, const std::vector<std::vector<int>>& alphas,
    const std::vector<double>& center, double r1, const BumpProfile& bump,
    int panels, int order, int n) {
  const double norm_c = 1.0 / (bump.ball_integral * std::pow(r1, n));
  std::vector<double> lo(center), hi(center);
  for (int a = 0; a < n; ++a) {
    lo[static_cast<std::size_t>(a)] -= r1;
    hi[static_cast<std::size_t>(a)] += r1;
  }
  std::map<std::vector<int>, double> coeffs;
  tensor_quadrature(lo, hi, panels, order, [&](const std::vector<double>& y, double w) {
    double rhat_sq = 0;
    for (int a = 0; a < n; ++a) {
      const double t = (y[static_cast<std::size_t>(a)] - center[static_cast<std::size_t>(a)]) / r1;
      rhat_sq += t * t;
    }
    if (rhat_sq >= 1.0) return;
    const double phi = norm_c * std::exp(-bump.eps / (1.0 - rhat_sq));
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
      const std::vector<int>& alpha = alphas[ai];
      double afact = 1;
      for (int v : alpha) afact *= factorial(v);
      const double base = w * phi * devals[ai](y) / afact;
      // expand (x - y)^alpha into monomials in x
      std::vector<int> beta(alpha.size(), 0);
      while (true) {
        double c = base;
        for (std::size_t a = 0; a < alpha.size(); ++a) {
          c *= binomial(alpha[a], beta[a]) *
               std::pow(-y[a], static_cast<double>(alpha[a] - beta[a]));
        }
        if (c != 0.0) {
          auto [it, fresh] = coeffs.try_emplace(beta, c);
          if (!fresh) it->second += c;
        }
        std::size_t a = alpha.size();
        bool done = true;
        while (a-- > 0) {
          if (++beta[a] <= alpha[a]) {
            done = false;
            break;
          }
          beta[a] = 0;
        }
        if (done) break;
      }
    }
  });
  return coeffs;
}

// Multilinear interpolation evaluator over precomputed grid values.
Evaluator grid_interpolator(std::shared_ptr<const GridField> g,
                            std::shared_ptr<const std::vector<double>> values) {
  return [g, values](const std::vector<double>& x) {
    const std::size_t nd = g->ndim();
    std::vector<std::int64_t> base(nd);
    std::vector<double> frac(nd);
    for (std::size_t a = 0; a < nd; ++a) {
      double pos = x[a] / g->spacing[a];
      pos = std::clamp(pos, 0.0, static_cast<double>(g->dims[a] - 1));
      std::int64_t i = std::min<std::int64_t>(static_cast<std::int64_t>(pos), g->dims[a] - 2);
      base[a] = i;
      frac[a] = pos - static_cast<double>(i);
    }
    double acc = 0;
    for (std::int64_t corner = 0; corner < (std::int64_t{1} << nd); ++corner) {
      double w = 1;
      std::int64_t flat = 0;
      for (std::size_t a = 0; a < nd; ++a) {
        const bool up = (corner >> a) & 1;
        w *= up ? frac[a] : 1.0 - frac[a];
        flat = flat * g->dims[a] + base[a] + (up ? 1 : 0);
      }
      acc += w * (*values)[static_cast<std::size_t>(flat)];
    }
    return acc;
  };
}

}  // namespace

PolyFit averaged_taylor(const DyadicInput& field, const DyadicCube& cube,
                        const SobolevParams& params, double mollifier_radius_fraction) {
  params.validate();
  cube.validate();
  if (cube.ndim() != params.n || field_dim(field) != params.n)
    throw input_error("field/cube/params dimension mismatch");
  if (!(mollifier_radius_fraction > 0) || mollifier_radius_fraction > 1.0)
    throw input_error("mollifier radius fraction must lie in (0, 1]");

  const int n = params.n;
  const int k = params.k;
  const double r1 = mollifier_radius_fraction * cube.side() / 2.0;
  std::vector<double> center(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    center[static_cast<std::size_t>(a)] =
        0.5 * (cube.lo(static_cast<std::size_t>(a)) + cube.hi(static_cast<std::size_t>(a)));

  const BumpProfile bump = select_bump_profile(n);

  std::vector<std::vector<int>> alphas;
  enumerate_indices(n, k - 1, false, alphas);

  // derivative evaluators, analytic or interpolated from finite differences
  std::vector<Evaluator> devals;
  Evaluator feval;
  if (is_analytic(field)) {
    for (const auto& alpha : alphas) devals.push_back(derivative_evaluator(field, alpha));
    if (const auto* tp = std::get_if<TrigPoly>(&field)) {
      auto fp = std::make_shared<TrigPoly>(*tp);
      feval = [fp](const std::vector<double>& x) { return fp->eval(x); };
    } else {
      auto fp = std::make_shared<MonomialPoly>(std::get<MonomialPoly>(field));
      feval = [fp](const std::vector<double>& x) { return fp->eval(x); };
    }
  } else {
    const auto& g = std::get<GridField>(field);
    check_unit_box_grid(g);
    auto gp = std::make_shared<GridField>(g);
    for (const auto& alpha : alphas) {
      auto vals = std::make_shared<std::vector<double>>(fd_derivative(g, alpha));
      devals.push_back(grid_interpolator(gp, vals));
    }
    auto raw = std::make_shared<std::vector<double>>(g.samples);
    feval = grid_interpolator(gp, raw);
  }

  // The bump weight is smooth but non-analytic at the ball edge; composite
  // Gauss-Legendre needs a healthy per-panel order before doubling the panel
  // count actually certifies the coefficients.
  const int order = std::max(8, 2 * k + 2);
  const int coarse_panels = n == 1 ? 12 : 8;
  auto pass1 = taylor_pass(devals, alphas, center, r1, bump, coarse_panels, order, n);
  auto pass2 = taylor_pass(devals, alphas, center, r1, bump, 2 * coarse_panels, order, n);

  double scale = 0, diff = 0;
  for (const auto& [e, c] : pass2) {
    scale = std::max(scale, std::abs(c));
    auto it = pass1.find(e);
    diff = std::max(diff, std::abs(c - (it == pass1.end() ? 0.0 : it->second)));
  }
  for (const auto& [e, c] : pass1)
    if (!pass2.count(e)) diff = std::max(diff, std::abs(c));
  if (diff > 1e-6 * std::max(1.0, scale))
    throw config_error("mollifier quadrature did not converge");

  PolyFit fit;
  fit.degree_bound = k - 1;
  fit.monomial_coeffs = std::move(pass2);
  fit.quadrature_tolerance = diff;

  // measured sup-norm remainder on a dense evaluation grid over the cube
  const std::int64_t per_axis = n == 1 ? 513 : 65;
  std::vector<std::int64_t> idx(static_cast<std::size_t>(n), 0);
  std::vector<double> x(static_cast<std::size_t>(n));
  double sup = 0;
  while (true) {
    for (int a = 0; a < n; ++a) {
      const std::size_t au = static_cast<std::size_t>(a);
      x[au] = cube.lo(au) + (cube.hi(au) - cube.lo(au)) *
                                static_cast<double>(idx[au]) / (per_axis - 1);
    }
    sup = std::max(sup, std::abs(feval(x) - fit.eval(x)));
    std::size_t a = static_cast<std::size_t>(n);
    bool done = true;
    while (a-- > 0) {
      if (++idx[a] < per_axis) {
        done = false;
        break;
      }
      idx[a] = 0;
    }
    if (done) break;
  }
  fit.sup_error = sup;
  return fit;
}

double cube_bar_bound(int k, int n, BoundKind kind) {
  if (k < 1) throw input_error("degree bound k must be >= 1");
  if (n < 1) throw input_error("dimension must be >= 1");
  const double base = kind == BoundKind::poly ? static_cast<double>(k) + 1.0
                                              : 2.0 * k + 1.0;
  return 0.5 * std::pow(base, n) + 0.5;
}

MdpCheckReport mdp_count_check(const DyadicInput& field, double delta,
                               const SobolevParams& params, int max_level) {
  if (!is_analytic(field))
    throw input_error("count check needs an analytic field descriptor");
  MdpBuild build = build_mdp(field, delta, params, max_level);

  // fine grid of |field| over the unit cube
  const int n = params.n;
  std::vector<double> lo(static_cast<std::size_t>(n), 0.0);
  std::vector<double> hi(static_cast<std::size_t>(n), 1.0);
  GridField g;
  if (const auto* tp = std::get_if<TrigPoly>(&field)) {
    const double fc = std::ceil(std::sqrt(tp->lambda_content()));
    const std::int64_t from_freq = 1 + static_cast<std::int64_t>(std::ceil(fc * 32.0 / std::numbers::pi));
    const std::int64_t floor_pts = n == 1 ? 4097 : 513;
    const std::int64_t per_axis = std::max(from_freq, floor_pts);
    g = sample_box(*tp, lo, hi, std::vector<std::int64_t>(static_cast<std::size_t>(n), per_axis));
  } else {
    const std::int64_t per_axis = n == 1 ? 4097 : 513;
    g = std::get<MonomialPoly>(field).sample_box(
        lo, hi, std::vector<std::int64_t>(static_cast<std::size_t>(n), per_axis));
  }
  GridField abs_g = absolute(g);
  GradedBarcode bc = sublevel_barcode(abs_g);

  MdpCheckReport rep;
  rep.delta = delta;
  rep.k_size = static_cast<std::int64_t>(build.partition.cubes.size());
  rep.n_actual = static_cast<double>(n_delta(bc, std::pow(2.0, n + 1) * delta));
  const double per_leaf = 0.5 * std::pow(2.0 * (params.k - 1) + 1.0, n) + 0.5;
  rep.bound = per_leaf * static_cast<double>(rep.k_size);
  rep.ratio = rep.n_actual / static_cast<double>(rep.k_size);
  rep.holds = rep.n_actual <= rep.bound + 1e-9;
  return rep;
}

// ---- serialization ---------------------------------------------------------------

namespace {

nlohmann::json node_to_json(const MdpNode& node) {
  nlohmann::json j;
  j["level"] = node.cube.level;
  j["index"] = node.cube.index;
  j["good_margin"] = node.good_margin;
  if (node.leaf()) {
    j["leaf"] = true;
  } else {
    nlohmann::json kids = nlohmann::json::array();
    for (const MdpNode& c : node.children) kids.push_back(node_to_json(c));
    j["children"] = std::move(kids);
  }
  return j;
}

}  // namespace

std::string mdp_to_json_string(const MdpBuild& build, int indent) {
  nlohmann::json j;
  j["n"] = build.params.n;
  j["k"] = build.params.k;
  if (build.params.p_infinite())
    j["p"] = "inf";
  else
    j["p"] = build.params.p;
  j["delta"] = build.delta;
  j["leaf_count"] = build.partition.cubes.size();
  j["global_seminorm"] = build.global_seminorm;
  j["root"] = node_to_json(build.root);
  return j.dump(indent);
}

std::string mdp_report_csv(const std::vector<MdpCheckReport>& reports) {
  std::ostringstream out;
  out << "delta,K_size,n_actual,bound,ratio\n";
  for (const MdpCheckReport& r : reports) {
    out << fmt_double(r.delta) << ',' << r.k_size << ',' << fmt_double(r.n_actual)
        << ',' << fmt_double(r.bound) << ',' << fmt_double(r.ratio) << '\n';
  }
  return out.str();
}

}  // namespace cnodal
