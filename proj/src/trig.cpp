#include "cnodal/trig.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cnodal/errors.hpp"
#include "cnodal/rng.hpp"

namespace cnodal {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_dim(const TrigPoly& f, const FreqVector& xi) {
  if (static_cast<int>(xi.size()) != f.n)
    throw input_error("frequency vector dimension mismatch");
}

FreqVector negated_freq(const FreqVector& xi) {
  FreqVector m(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) m[i] = -xi[i];
  return m;
}

double volume(int n) { return std::pow(two_pi, n); }

// Axis sample coordinates for grids over [0, 2*pi].
std::vector<double> axis_coords(std::int64_t count, AxisTopology topo) {
  std::vector<double> x(count);
  if (topo == AxisTopology::torus) {
    for (std::int64_t m = 0; m < count; ++m) x[m] = two_pi * m / count;
  } else {
    for (std::int64_t m = 0; m < count; ++m) x[m] = two_pi * m / (count - 1);
  }
  return x;
}

// Evaluates the sparse Fourier sum on a tensor grid by collapsing one axis
// at a time: after processing axis a, each surviving entry maps a frequency
// suffix (axes > a) to partial sums indexed by the samples of axes <= a.
std::vector<double> tensor_eval(const TrigPoly& f,
                                const std::vector<std::vector<double>>& coords) {
  const int n = f.n;
  std::int64_t total = 1;
  for (const auto& c : coords) total *= static_cast<std::int64_t>(c.size());

  using Values = std::vector<std::complex<double>>;
  std::map<FreqVector, Values> state;
  for (const auto& [xi, c] : f.coeffs) state[xi] = Values{c};

  for (int a = 0; a < n; ++a) {
    const auto& xs = coords[a];
    const std::int64_t na = static_cast<std::int64_t>(xs.size());

    // Phase table per distinct frequency on this axis.
    std::map<int, Values> table;
    for (const auto& [xi, vals] : state) {
      const int fa = xi.front();  // leading entry is this axis's frequency
      (void)vals;
      if (!table.count(fa)) {
        Values t(na);
        for (std::int64_t m = 0; m < na; ++m)
          t[m] = std::polar(1.0, fa * xs[m]);
        table.emplace(fa, std::move(t));
      }
    }

    std::map<FreqVector, Values> next;
    for (auto& [xi, vals] : state) {
      const int fa = xi.front();
      FreqVector suffix(xi.begin() + 1, xi.end());
      const Values& phases = table.at(fa);
      auto it = next.find(suffix);
      if (it == next.end())
        it = next.emplace(suffix, Values(vals.size() * na)).first;
      Values& out = it->second;
      for (std::size_t idx = 0; idx < vals.size(); ++idx) {
        const std::complex<double> base = vals[idx];
        std::complex<double>* row = out.data() + idx * na;
        for (std::int64_t m = 0; m < na; ++m) row[m] += base * phases[m];
      }
    }
    state = std::move(next);
  }

  std::vector<double> out(static_cast<std::size_t>(total), 0.0);
  if (!state.empty()) {
    const Values& vals = state.begin()->second;
    for (std::int64_t i = 0; i < total; ++i) out[i] = vals[i].real();
  }
  return out;
}

void check_density(const TrigPoly& f, const std::vector<double>& spacing) {
  const double fc = std::ceil(std::sqrt(f.lambda_content()));
  if (fc < 1.0) return;
  const double limit = (std::numbers::pi / 4.0) / fc * (1.0 + 1e-12);
  for (std::size_t a = 0; a < spacing.size(); ++a) {
    if (spacing[a] > limit) {
      std::ostringstream msg;
      msg << "axis " << a << " spacing " << spacing[a]
          << " too coarse for top frequency " << fc << " (needs <= " << limit
          << ", i.e. >= " << 8 * static_cast<std::int64_t>(fc)
          << " samples per 2*pi period)";
      throw resolution_error(msg.str());
    }
  }
}

}  // namespace

double freq_norm_sq(const FreqVector& xi) {
  double s = 0;
  for (int v : xi) s += static_cast<double>(v) * v;
  return s;
}

TrigPoly::TrigPoly(int ndim, std::optional<double> cut) : n(ndim), lambda_cut(cut) {
  if (ndim < 1) throw input_error("dimension must be >= 1");
  if (cut && *cut < 0) throw input_error("lambda_cut must be >= 0");
}

void TrigPoly::set(const FreqVector& xi, std::complex<double> c) {
  require_dim(*this, xi);
  if (lambda_cut && freq_norm_sq(xi) > *lambda_cut + 1e-9)
    throw input_error("frequency above lambda_cut");
  if (c == std::complex<double>(0.0, 0.0))
    coeffs.erase(xi);
  else
    coeffs[xi] = c;
}

std::complex<double> TrigPoly::at(const FreqVector& xi) const {
  auto it = coeffs.find(xi);
  return it == coeffs.end() ? std::complex<double>(0.0, 0.0) : it->second;
}

void TrigPoly::validate() const {
  double max_mag = 0;
  for (const auto& [xi, c] : coeffs) {
    require_dim(*this, xi);
    if (lambda_cut && freq_norm_sq(xi) > *lambda_cut + 1e-9)
      throw input_error("frequency above lambda_cut");
    max_mag = std::max(max_mag, std::abs(c));
  }
  const double tol = 1e-12 * std::max(1.0, max_mag);
  for (const auto& [xi, c] : coeffs) {
    std::complex<double> mirror = at(negated_freq(xi));
    if (std::abs(mirror - std::conj(c)) > tol)
      throw input_error("coefficients are not conjugate-symmetric");
  }
}

double TrigPoly::lambda_content() const {
  double best = 0;
  for (const auto& [xi, c] : coeffs) {
    (void)c;
    best = std::max(best, freq_norm_sq(xi));
  }
  return best;
}

double TrigPoly::eval(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n)
    throw input_error("evaluation point dimension mismatch");
  std::complex<double> acc(0.0, 0.0);
  for (const auto& [xi, c] : coeffs) {
    double phase = 0;
    for (int a = 0; a < n; ++a) phase += xi[a] * x[a];
    acc += c * std::polar(1.0, phase);
  }
  return acc.real();
}

TrigPoly TrigPoly::derivative(const std::vector<int>& alpha) const {
  if (static_cast<int>(alpha.size()) != n)
    throw input_error("derivative multi-index dimension mismatch");
  for (int a : alpha)
    if (a < 0) throw input_error("derivative orders must be >= 0");
  TrigPoly out(n, lambda_cut);
  for (const auto& [xi, c] : coeffs) {
    std::complex<double> factor(1.0, 0.0);
    for (int a = 0; a < n; ++a)
      for (int rep = 0; rep < alpha[a]; ++rep)
        factor *= std::complex<double>(0.0, static_cast<double>(xi[a]));
    std::complex<double> v = factor * c;
    if (v != std::complex<double>(0.0, 0.0)) out.coeffs[xi] = v;
  }
  return out;
}

TrigPoly TrigPoly::laplacian() const {
  TrigPoly out(n, lambda_cut);
  for (const auto& [xi, c] : coeffs) {
    double ev = freq_norm_sq(xi);
    if (ev > 0) out.coeffs[xi] = -ev * c;
  }
  return out;
}

TrigPoly TrigPoly::scaled(double t) const {
  TrigPoly out(n, lambda_cut);
  if (t == 0.0) return out;
  for (const auto& [xi, c] : coeffs) out.coeffs[xi] = t * c;
  return out;
}

TrigPoly TrigPoly::plus(const TrigPoly& other) const {
  if (other.n != n) throw input_error("dimension mismatch in sum");
  std::optional<double> cut;
  if (lambda_cut && other.lambda_cut)
    cut = std::max(*lambda_cut, *other.lambda_cut);
  TrigPoly out(n, cut);
  out.coeffs = coeffs;
  for (const auto& [xi, c] : other.coeffs) {
    auto [it, fresh] = out.coeffs.try_emplace(xi, c);
    if (!fresh) {
      it->second += c;
      if (it->second == std::complex<double>(0.0, 0.0)) out.coeffs.erase(it);
    }
  }
  return out;
}

double TrigPoly::l2_norm() const {
  double s = 0;
  for (const auto& [xi, c] : coeffs) {
    (void)xi;
    s += std::norm(c);
  }
  return std::sqrt(s * volume(n));
}

double TrigPoly::sobolev_norm(int k) const {
  if (k < 0) throw input_error("smoothness order must be >= 0");
  double s = 0;
  for (const auto& [xi, c] : coeffs) {
    // weight(xi) = sum over multi-indices |alpha| <= k of prod xi_i^{2 a_i},
    // built by a budget DP across the axes.
    std::vector<double> cur(static_cast<std::size_t>(k) + 1, 1.0);
    for (int i = n - 1; i >= 0; --i) {
      const double q = static_cast<double>(xi[i]) * xi[i];
      std::vector<double> nxt(static_cast<std::size_t>(k) + 1, 0.0);
      for (int b = 0; b <= k; ++b) {
        double powq = 1.0, acc = 0.0;
        for (int a = 0; a <= b; ++a) {
          acc += powq * cur[b - a];
          powq *= q;
        }
        nxt[b] = acc;
      }
      cur = std::move(nxt);
    }
    s += cur[k] * std::norm(c);
  }
  return std::sqrt(s * volume(n));
}

std::vector<FreqVector> lattice_modes(int n, double lambda) {
  if (n < 1) throw input_error("dimension must be >= 1");
  if (lambda < 0) throw input_error("lambda must be >= 0");
  std::vector<FreqVector> out;
  const int bound = static_cast<int>(std::floor(std::sqrt(lambda)));
  FreqVector xi(n, -bound);
  // Odometer over the cube [-bound, bound]^n, filtered by |xi|^2 <= lambda;
  // the loop order yields lexicographic output directly.
  while (true) {
    if (freq_norm_sq(xi) <= lambda) out.push_back(xi);
    int axis = n - 1;
    while (axis >= 0 && xi[axis] == bound) {
      xi[axis] = -bound;
      --axis;
    }
    if (axis < 0) break;
    ++xi[axis];
  }
  return out;
}

std::int64_t lattice_mode_count(int n, double lambda) {
  return static_cast<std::int64_t>(lattice_modes(n, lambda).size());
}

TrigPoly random_combination(int n, double lambda, std::uint64_t seed) {
  Rng rng(seed);
  TrigPoly f(n, lambda);
  for (const FreqVector& xi : lattice_modes(n, lambda)) {
    const FreqVector neg = negated_freq(xi);
    if (xi < neg) continue;  // handled from its canonical partner
    if (xi == neg) {
      // the constant mode: real coefficient
      double a = rng.gaussian();
      if (a != 0.0) f.coeffs[xi] = std::complex<double>(a, 0.0);
      continue;
    }
    // a*cos<xi,x> + b*sin<xi,x> split across the conjugate pair
    double a = rng.gaussian();
    double b = rng.gaussian();
    f.coeffs[xi] = std::complex<double>(a / 2.0, -b / 2.0);
    f.coeffs[neg] = std::complex<double>(a / 2.0, b / 2.0);
  }
  double norm = f.l2_norm();
  if (norm == 0.0) {
    f.coeffs[FreqVector(n, 0)] = std::pow(two_pi, -0.5 * n);
    return f;
  }
  return f.scaled(1.0 / norm);
}

std::int64_t nyquist_samples(const TrigPoly& f) {
  const double fc = std::ceil(std::sqrt(f.lambda_content()));
  return 8 * static_cast<std::int64_t>(fc);
}

GridField sample(const TrigPoly& f, const std::vector<std::int64_t>& dims,
                 const std::vector<AxisTopology>& topology) {
  f.validate();
  if (static_cast<int>(dims.size()) != f.n || topology.size() != dims.size())
    throw input_error("sample: dims/topology must match the field dimension");
  std::vector<double> spacing(dims.size());
  std::vector<std::vector<double>> coords(dims.size());
  for (std::size_t a = 0; a < dims.size(); ++a) {
    const std::int64_t min_pts = topology[a] == AxisTopology::torus ? 3 : 2;
    if (dims[a] < min_pts) throw input_error("sample: axis too short");
    spacing[a] = topology[a] == AxisTopology::torus
                     ? two_pi / static_cast<double>(dims[a])
                     : two_pi / static_cast<double>(dims[a] - 1);
    coords[a] = axis_coords(dims[a], topology[a]);
  }
  check_density(f, spacing);
  GridField g = make_grid_field(dims, spacing, topology, tensor_eval(f, coords));
  g.descriptor = std::make_shared<TrigPoly>(f);
  return g;
}

GridField sample(const TrigPoly& f, std::int64_t per_axis, AxisTopology topology) {
  return sample(f, std::vector<std::int64_t>(static_cast<std::size_t>(f.n), per_axis),
                std::vector<AxisTopology>(static_cast<std::size_t>(f.n), topology));
}

GridField sample_box(const TrigPoly& f, const std::vector<double>& lo,
                     const std::vector<double>& hi,
                     const std::vector<std::int64_t>& dims) {
  f.validate();
  if (static_cast<int>(dims.size()) != f.n || lo.size() != dims.size() ||
      hi.size() != dims.size())
    throw input_error("sample_box: dims/bounds must match the field dimension");
  std::vector<double> spacing(dims.size());
  std::vector<std::vector<double>> coords(dims.size());
  for (std::size_t a = 0; a < dims.size(); ++a) {
    if (dims[a] < 2) throw input_error("sample_box: axis needs >= 2 samples");
    if (!(hi[a] > lo[a])) throw input_error("sample_box: empty axis interval");
    spacing[a] = (hi[a] - lo[a]) / static_cast<double>(dims[a] - 1);
    coords[a].resize(static_cast<std::size_t>(dims[a]));
    for (std::int64_t m = 0; m < dims[a]; ++m)
      coords[a][static_cast<std::size_t>(m)] = lo[a] + spacing[a] * m;
  }
  check_density(f, spacing);
  GridField g = make_grid_field(
      dims, spacing,
      std::vector<AxisTopology>(dims.size(), AxisTopology::box),
      tensor_eval(f, coords));
  g.descriptor = std::make_shared<TrigPoly>(f);
  return g;
}

std::map<FreqVector, std::complex<double>> analyze_modes(
    const GridField& field, const std::vector<FreqVector>& modes) {
  field.validate();
  for (AxisTopology t : field.topology)
    if (t != AxisTopology::torus)
      throw input_error("analyze_modes requires fully periodic grids");
  const std::size_t nd = field.ndim();

  std::map<FreqVector, std::complex<double>> out;
  for (const FreqVector& xi : modes) {
    if (xi.size() != nd) throw input_error("analyze_modes: mode dimension mismatch");
    // Per-axis conjugate phase tables for this mode.
    std::vector<std::vector<std::complex<double>>> tab(nd);
    for (std::size_t a = 0; a < nd; ++a) {
      tab[a].resize(static_cast<std::size_t>(field.dims[a]));
      for (std::int64_t m = 0; m < field.dims[a]; ++m)
        tab[a][static_cast<std::size_t>(m)] =
            std::polar(1.0, -xi[a] * two_pi * m / static_cast<double>(field.dims[a]));
    }
    std::complex<double> acc(0.0, 0.0);
    std::vector<std::int64_t> idx(nd, 0);
    std::int64_t flat = 0;
    const std::int64_t total = field.vertex_count();
    while (flat < total) {
      std::complex<double> phase(1.0, 0.0);
      for (std::size_t a = 0; a < nd; ++a)
        phase *= tab[a][static_cast<std::size_t>(idx[a])];
      acc += field.samples[static_cast<std::size_t>(flat)] * phase;
      ++flat;
      for (std::size_t a = nd; a-- > 0;) {
        if (++idx[a] < field.dims[a]) break;
        idx[a] = 0;
      }
    }
    out[xi] = acc / static_cast<double>(total);
  }
  return out;
}

TrigPoly product(const std::vector<TrigPoly>& factors) {
  if (factors.empty()) throw input_error("product needs at least one factor");
  const int n = factors.front().n;
  double sqrt_sum = 0;
  for (const TrigPoly& f : factors) {
    if (f.n != n) throw input_error("product factors must share dimension");
    f.validate();
    sqrt_sum += std::sqrt(f.lambda_cut ? *f.lambda_cut : f.lambda_content());
  }
  TrigPoly acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) {
    TrigPoly next(n);
    for (const auto& [x1, c1] : acc.coeffs)
      for (const auto& [x2, c2] : factors[i].coeffs) {
        FreqVector sum(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) sum[static_cast<std::size_t>(a)] = x1[a] + x2[a];
        auto [it, fresh] = next.coeffs.try_emplace(sum, c1 * c2);
        if (!fresh) {
          it->second += c1 * c2;
          if (it->second == std::complex<double>(0.0, 0.0)) next.coeffs.erase(it);
        }
      }
    acc = std::move(next);
  }
  acc.lambda_cut = sqrt_sum * sqrt_sum;
  return acc;
}

int VectorTrigField::ndim() const {
  return components.empty() ? 0 : components.front().n;
}

void VectorTrigField::validate() const {
  if (components.empty()) throw input_error("vector field needs >= 1 component");
  const int n = components.front().n;
  for (const TrigPoly& f : components) {
    if (f.n != n) throw input_error("vector field components must share dimension");
    f.validate();
  }
}

VectorTrigField gradient_field(const TrigPoly& f) {
  VectorTrigField v;
  for (int a = 0; a < f.n; ++a) {
    std::vector<int> alpha(static_cast<std::size_t>(f.n), 0);
    alpha[static_cast<std::size_t>(a)] = 1;
    v.components.push_back(f.derivative(alpha));
  }
  return v;
}

GridField norm_field(const VectorTrigField& v, const std::vector<std::int64_t>& dims,
                     const std::vector<AxisTopology>& topology) {
  v.validate();
  GridField acc;
  bool first = true;
  for (const TrigPoly& f : v.components) {
    GridField g = sample(f, dims, topology);
    if (first) {
      for (double& s : g.samples) s = s * s;
      acc = std::move(g);
      first = false;
    } else {
      for (std::size_t i = 0; i < acc.samples.size(); ++i)
        acc.samples[i] += g.samples[i] * g.samples[i];
    }
  }
  for (double& s : acc.samples) s = std::sqrt(s);
  acc.descriptor.reset();
  return acc;
}

GridField norm_field(const VectorTrigField& v, std::int64_t per_axis,
                     AxisTopology topology) {
  const int n = v.ndim();
  return norm_field(v, std::vector<std::int64_t>(static_cast<std::size_t>(n), per_axis),
                    std::vector<AxisTopology>(static_cast<std::size_t>(n), topology));
}

}  // namespace cnodal
