#include "cnodal/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "cnodal/coarse.hpp"
#include "cnodal/errors.hpp"
#include "cnodal/fft.hpp"
#include "cnodal/rng.hpp"

namespace cnodal {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676655900577;
constexpr double kPi = 3.14159265358979323846264338327950288;

std::int64_t next_pow2(std::int64_t v) {
  std::int64_t r = 1;
  while (r < v) r <<= 1;
  return r;
}

double torus_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = std::fabs(a[i] - b[i]);
    d = std::min(d, kTwoPi - d);
    s += d * d;
  }
  return std::sqrt(s);
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  if (m == 0) return 0;
  return (m % 2 == 1) ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void require_decade(const std::vector<double>& sorted_params, const char* who) {
  if (sorted_params.size() < 3)
    throw config_error(std::string(who) + ": need at least 3 distinct parameter values");
  if (!(sorted_params.front() > 0))
    throw input_error(std::string(who) + ": parameter values must be positive");
  if (sorted_params.back() < 10.0 * sorted_params.front() * (1.0 - 1e-9))
    throw config_error(std::string(who) + ": parameter values must span at least one decade");
}

}  // namespace

double default_bump_profile(double r) {
  if (r >= 1.0) return 0.0;
  const double r2 = r * r;
  const double a = 1.0 - r2;
  return a * a * a * (1.0 - (364.0 / 27.0) * r2);
}

void SharpnessConfig::validate() const {
  if (n < 1 || n > 2) throw input_error("bump construction supports dimensions 1 and 2");
  if (!(lambda > 0)) throw input_error("bump construction: lambda must be positive");
  if (!(delta >= 1)) throw input_error("bump construction: delta must be >= 1");
  if (!(A > 1)) throw input_error("bump construction: A must exceed 1");
  if (!(a1 > 0)) throw input_error("bump construction: a1 must be positive");
  if (bump_profile) {
    if (std::fabs(bump_profile(0.0) - 1.0) > 1e-9 ||
        std::fabs(bump_profile(0.5) + 1.0) > 1e-9)
      throw input_error(
          "bump construction: profile must equal 1 at r=0 and -1 at r=1/2");
  }
}

SharpnessResult sharpness_construct(const SharpnessConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const int n = cfg.n;
  const double vol = std::pow(kTwoPi, n);
  const double eps = std::sqrt(cfg.A / cfg.lambda);
  const double want = cfg.a1 / (cfg.delta * cfg.delta) * std::pow(eps, -double(n));
  const std::int64_t n_bumps = static_cast<std::int64_t>(std::floor(want));
  if (n_bumps < 1)
    throw config_error(
        "bump construction: requested bump count is zero; raise a1 or lambda");

  // Disjointness needs pairwise center distance >= 4*eps (supports of radius
  // eps plus the mid-sphere shells never touch, with room to spare). Place
  // the bumps on a lattice with 5% slack and a deterministic jitter that
  // preserves the separation.
  const double min_sep = 4.0 * eps;
  const std::int64_t sites =
      static_cast<std::int64_t>(std::floor(kTwoPi / (min_sep * 1.05)));
  double capacity = 0;
  if (sites >= 1) capacity = std::pow(static_cast<double>(sites), n);
  if (static_cast<double>(n_bumps) > capacity) {
    std::ostringstream os;
    os << "bump construction: cannot pack " << n_bumps
       << " disjoint bumps of radius 2*epsilon=" << 2.0 * eps
       << " on the torus; maximum feasible count is "
       << static_cast<std::int64_t>(capacity)
       << " (lower a1 or delta, or raise lambda)";
    throw config_error(os.str());
  }
  const double cell = kTwoPi / static_cast<double>(sites);
  const double jitter = 0.45 * (cell - min_sep);

  Rng rng(seed);
  std::vector<std::vector<double>> centers;
  centers.reserve(static_cast<std::size_t>(n_bumps));
  std::vector<std::int64_t> site(n, 0);
  for (std::int64_t b = 0; b < n_bumps; ++b) {
    std::vector<double> c(n);
    for (int a = 0; a < n; ++a) {
      c[a] = (static_cast<double>(site[a]) + 0.5) * cell +
             jitter * rng.uniform(-1.0, 1.0);
      c[a] = std::fmod(c[a], kTwoPi);
      if (c[a] < 0) c[a] += kTwoPi;
    }
    centers.push_back(std::move(c));
    int a = n - 1;
    while (a >= 0) {
      if (++site[a] < sites) break;
      site[a] = 0;
      --a;
    }
  }
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      if (torus_dist(centers[i], centers[j]) < min_sep * (1.0 - 1e-12))
        throw std::logic_error("internal packing certificate failed");

  // Synthesis grid: power of two, fine enough for the band |xi|^2 <= lambda
  // and for ~8 grid points per bump radius.
  const std::int64_t nyq =
      8 * static_cast<std::int64_t>(std::ceil(std::sqrt(cfg.lambda)));
  const std::int64_t per_bump =
      static_cast<std::int64_t>(std::ceil(8.0 * kTwoPi / eps));
  const std::int64_t R = next_pow2(std::max({nyq, per_bump, std::int64_t(32)}));
  std::int64_t total = 1;
  for (int a = 0; a < n; ++a) total *= R;
  const double h = kTwoPi / static_cast<double>(R);

  const auto profile = [&cfg](double r) {
    return cfg.bump_profile ? cfg.bump_profile(r) : default_bump_profile(r);
  };

  std::vector<std::complex<double>> data(static_cast<std::size_t>(total), 0.0);
  const std::int64_t w = static_cast<std::int64_t>(std::ceil(eps / h)) + 1;
  for (const auto& c : centers) {
    std::vector<std::int64_t> base(n), width(n, 2 * w + 1);
    for (int a = 0; a < n; ++a)
      base[a] = static_cast<std::int64_t>(std::floor(c[a] / h)) - w;
    std::vector<std::int64_t> off(n, 0);
    while (true) {
      double r2 = 0;
      std::int64_t flat = 0;
      for (int a = 0; a < n; ++a) {
        const std::int64_t gi = base[a] + off[a];
        const double d = static_cast<double>(gi) * h - c[a];
        r2 += d * d;
        const std::int64_t gim = ((gi % R) + R) % R;
        flat = flat * R + gim;
      }
      const double r = std::sqrt(r2) / eps;
      if (r < 1.0) data[static_cast<std::size_t>(flat)] += profile(r);
      int a = n - 1;
      while (a >= 0) {
        if (++off[a] < width[a]) break;
        off[a] = 0;
        --a;
      }
      if (a < 0) break;
    }
  }

  double grid_mean_sq = 0;
  for (const auto& z : data) grid_mean_sq += z.real() * z.real();
  grid_mean_sq /= static_cast<double>(total);

  std::vector<std::int64_t> dims(n, R);
  fft_nd(data, dims, false);
  const double scale = 1.0 / static_cast<double>(total);

  double s_in = 0, s_out = 0, s_lap = 0, tail_linf = 0;
  std::map<FreqVector, std::complex<double>> inband;
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t tmp = flat;
    FreqVector xi(n);
    for (int a = n - 1; a >= 0; --a) {
      xi[a] = dft_bin_to_freq(tmp % R, R);
      tmp /= R;
    }
    const std::complex<double> chat = data[static_cast<std::size_t>(flat)] * scale;
    const double q = freq_norm_sq(xi);
    const double mag2 = std::norm(chat);
    s_lap += q * q * mag2;
    if (q <= cfg.lambda) {
      s_in += mag2;
      inband.emplace(std::move(xi), chat);
    } else {
      s_out += mag2;
      tail_linf += std::abs(chat);
    }
  }

  TrigPoly P(n, cfg.lambda);
  for (const auto& [xi, chat] : inband) {
    FreqVector neg(xi.size());
    for (std::size_t a = 0; a < xi.size(); ++a) neg[a] = -xi[a];
    const auto it = inband.find(neg);
    if (it == inband.end())
      throw std::logic_error("internal spectrum symmetry lookup failed");
    P.set(xi, 0.5 * (chat + std::conj(it->second)));
  }
  P.validate();

  SharpnessResult res;
  res.centers = std::move(centers);
  res.epsilon = eps;
  res.n_bumps = n_bumps;
  res.grid_resolution = R;
  res.p_l2_norm = P.l2_norm();
  res.remainder_l2 = std::sqrt(vol * s_out);
  res.remainder_bound = std::sqrt(vol * s_lap) / cfg.lambda;
  res.remainder_ok = res.remainder_l2 <= res.remainder_bound * (1.0 + 1e-12);
  res.parseval_gap =
      std::fabs(vol * grid_mean_sq - res.p_l2_norm * res.p_l2_norm - vol * s_out);
  res.tail_linf_bound = tail_linf;
  if (!(res.p_l2_norm > 0))
    throw config_error("bump construction: projection vanished");
  res.depth_scale = 0.5 / res.p_l2_norm;

  for (const auto& c : res.centers) {
    bool ok = P.eval(c) >= 0.5;
    if (ok && n == 1) {
      for (double s : {-0.5, 0.5}) {
        if (P.eval({c[0] + s * eps}) > -0.5) {
          ok = false;
          break;
        }
      }
    } else if (ok) {
      for (int qi = 0; qi < 16 && ok; ++qi) {
        const double th = kTwoPi * qi / 16.0;
        const std::vector<double> x{c[0] + 0.5 * eps * std::cos(th),
                                    c[1] + 0.5 * eps * std::sin(th)};
        if (P.eval(x) > -0.5) ok = false;
      }
    }
    if (ok) ++res.depth_passes;
  }

  res.f = P.scaled(1.0 / res.p_l2_norm);
  return res;
}

ScalingReport fit_scaling(std::vector<ScalingRow> rows, std::string ensemble) {
  if (rows.empty()) throw config_error("scaling fit: no rows");
  std::sort(rows.begin(), rows.end(), [](const ScalingRow& a, const ScalingRow& b) {
    if (a.parameter != b.parameter) return a.parameter < b.parameter;
    return a.trial < b.trial;
  });

  ScalingReport rep;
  rep.ensemble = std::move(ensemble);
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    std::vector<double> vals;
    while (j < rows.size() && rows[j].parameter == rows[i].parameter)
      vals.push_back(rows[j++].count);
    rep.parameter_values.push_back(rows[i].parameter);
    rep.medians.push_back(median_of(std::move(vals)));
    i = j;
  }
  rep.rows = std::move(rows);
  if (rep.parameter_values.size() < 3)
    throw config_error("scaling fit: need at least 3 distinct parameter values");

  // Zero medians carry no log-scale information (the additive floor of the
  // counting laws); they stay in the report but are excluded from the fit.
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < rep.parameter_values.size(); ++k) {
    if (rep.medians[k] > 0 && rep.parameter_values[k] > 0) {
      xs.push_back(std::log(rep.parameter_values[k]));
      ys.push_back(std::log(rep.medians[k]));
    }
  }
  const std::size_t m = xs.size();
  if (m < 2) throw config_error("scaling fit: fewer than 2 positive medians");

  double mx = 0, my = 0;
  for (std::size_t k = 0; k < m; ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < m; ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  if (!(sxx > 0)) throw config_error("scaling fit: degenerate abscissa");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  rep.exponent = slope;
  rep.c1 = std::exp(intercept);
  if (m > 2) {
    double rss = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const double r = ys[k] - (intercept + slope * xs[k]);
      rss += r * r;
    }
    const double se = std::sqrt(rss / static_cast<double>(m - 2) / sxx);
    rep.exponent_ci = 1.96 * se;
  }
  rep.c2 = *std::min_element(rep.medians.begin(), rep.medians.end());
  return rep;
}

SweepMode sweep_mode_from_string(const std::string& s) {
  if (s == "single") return SweepMode::single;
  if (s == "product") return SweepMode::product;
  if (s == "bezout") return SweepMode::bezout;
  if (s == "critical") return SweepMode::critical;
  throw input_error("unknown sweep mode '" + s +
                    "' (expected single, product, bezout, or critical)");
}

std::string sweep_mode_to_string(SweepMode m) {
  switch (m) {
    case SweepMode::single: return "single";
    case SweepMode::product: return "product";
    case SweepMode::bezout: return "bezout";
    case SweepMode::critical: return "critical";
  }
  throw input_error("unknown sweep mode value");
}

ScalingReport courant_sweep(int n, const std::vector<double>& lambda_list,
                            double delta, int trials, SweepMode mode,
                            std::uint64_t seed) {
  if (n < 1 || n > 3) throw input_error("count sweep: dimension must be 1, 2, or 3");
  if (!(delta > 0)) throw input_error("count sweep: delta must be positive");
  if (trials < 1) throw input_error("count sweep: trials must be >= 1");
  const std::vector<double> lams = sorted_unique(lambda_list);
  require_decade(lams, "count sweep");

  const bool zero_mode = (mode == SweepMode::bezout || mode == SweepMode::critical);
  // Deep-component counts keep the raw unit-L2 scale; the zero-count modes
  // normalize |field| to unit root-mean-square so that delta measures
  // neighborhood width in noise units. The grid must push the values near a
  // zero crossing below the cut eta = delta/5, hence the multipliers.
  const std::int64_t mult_m = (n == 1) ? 8 : 4;
  const std::int64_t mult_z = (delta >= 0.4) ? 8 : 16;
  const double vol = std::pow(kTwoPi, n);

  std::vector<ScalingRow> rows;
  rows.reserve(lams.size() * static_cast<std::size_t>(trials));
  for (std::size_t li = 0; li < lams.size(); ++li) {
    const double lambda = lams[li];
    for (int ti = 0; ti < trials; ++ti) {
      const std::uint64_t s = derive_seed(seed, li, static_cast<std::uint64_t>(ti));
      GridField field;
      if (mode == SweepMode::single) {
        const TrigPoly f = random_combination(n, lambda, s);
        const std::int64_t N = mult_m * std::max<std::int64_t>(nyquist_samples(f), 8);
        field = absolute(sample(f, N, AxisTopology::torus));
      } else if (mode == SweepMode::product) {
        const TrigPoly f1 = random_combination(n, lambda, derive_seed(s, 11, 0));
        const TrigPoly f2 = random_combination(n, lambda, derive_seed(s, 11, 1));
        TrigPoly g = product({f1, f2});
        const double nrm = g.l2_norm();
        if (!(nrm > 0)) throw config_error("count sweep: degenerate product draw");
        g = g.scaled(1.0 / nrm);
        const std::int64_t N = mult_m * std::max<std::int64_t>(nyquist_samples(g), 8);
        field = absolute(sample(g, N, AxisTopology::torus));
      } else {
        VectorTrigField v;
        if (mode == SweepMode::bezout) {
          v.components.reserve(static_cast<std::size_t>(n));
          for (int ci = 0; ci < n; ++ci)
            v.components.push_back(
                random_combination(n, lambda, derive_seed(s, 13, ci)));
        } else {
          v = gradient_field(random_combination(n, lambda, s));
        }
        double tot = 0;
        for (const auto& comp : v.components) {
          const double nc = comp.l2_norm();
          tot += nc * nc;
        }
        if (tot > 0) {
          const double rms = std::sqrt(tot / vol);
          for (auto& comp : v.components) comp = comp.scaled(1.0 / rms);
        }
        double content = 0;
        for (const auto& comp : v.components)
          content = std::max(content, comp.lambda_content());
        const std::int64_t nyq =
            8 * std::max<std::int64_t>(
                    1, static_cast<std::int64_t>(std::ceil(std::sqrt(content))));
        const std::int64_t N = mult_z * std::max<std::int64_t>(nyq, 8);
        field = norm_field(v, N, AxisTopology::torus);
      }

      ScalingRow row;
      row.parameter = lambda + 1.0;
      row.trial = ti;
      row.seed = s;
      row.resolution = field.dims.at(0);
      if (zero_mode)
        row.count = static_cast<double>(coarse_z(field, delta, 0, delta / 5.0).count);
      else
        row.count = static_cast<double>(coarse_m(field, delta, 0, delta / 5.0).count);
      rows.push_back(row);
    }
  }

  std::ostringstream ens;
  ens << "unit-L2 Gaussian combinations of torus modes, |xi|^2 <= lambda, n=" << n
      << "; mode=" << sweep_mode_to_string(mode) << "; "
      << (zero_mode ? "zero-cluster count z0 of the unit-RMS norm field"
                    : "deep-component count m0 of |field|")
      << " at delta=" << delta << " with zero cut delta/5; resolution "
      << (zero_mode ? mult_z : mult_m) << "x Nyquist; " << trials
      << " trials per lambda; fit log median vs log(lambda+1)";
  return fit_scaling(std::move(rows), ens.str());
}

WigglyReport wiggly_example(double alpha, double beta,
                            const std::vector<double>& delta_list) {
  if (!(beta > 0)) throw input_error("oscillation example: beta must be positive");
  if (!(alpha > 0)) throw input_error("oscillation example: alpha must be positive");
  const double k_real = alpha / (beta + 1.0);
  const std::int64_t k = std::llround(k_real);
  if (k < 1 || std::fabs(k_real - static_cast<double>(k)) > 1e-9)
    throw input_error(
        "oscillation example: alpha must equal k*(beta+1) for an integer k >= 1");
  if (delta_list.empty())
    throw input_error("oscillation example: delta list is empty");
  for (double d : delta_list)
    if (!(d > 0)) throw input_error("oscillation example: deltas must be positive");

  const double dmin = *std::min_element(delta_list.begin(), delta_list.end());
  // Zero locations x_m = (m*pi)^{-1/beta}; the depth envelope is x^alpha, so
  // oscillations with (m*pi)^{-alpha/beta} <= dmin/2 can never carry a
  // component at any requested delta and are cut away.
  const double m_real = std::pow(2.0 / dmin, beta / alpha) / kPi;
  if (m_real > 4.0e6)
    throw resolution_error(
        "oscillation example: smallest delta requires more than 4e6 "
        "oscillations; raise the delta list");
  const std::int64_t m_cut = std::max<std::int64_t>(2, static_cast<std::int64_t>(std::ceil(m_real)));

  const auto zero_at = [&](std::int64_t m) {
    return std::pow(static_cast<double>(m) * kPi, -1.0 / beta);
  };
  const auto value_at = [&](double x) {
    return std::pow(x, alpha) * std::sin(std::pow(x, -beta));
  };

  std::vector<double> xs, vals;
  std::vector<double> peaks;  // true per-oscillation depth, ascending in x
  const auto add_zero = [&](double x) {
    xs.push_back(x);
    vals.push_back(0.0);
  };
  // Coarse scan plus golden-section refinement of max |s| on (a, b); inserts
  // every evaluated point so the sampled sequence contains the exact peak.
  const auto process_interval = [&](double a, double b, bool include_b) {
    const int M = 33;
    std::vector<double> pts;
    pts.reserve(M + 2);
    int best = 1;
    double best_v = -1;
    for (int ii = 1; ii <= M; ++ii) {
      const double t = a + (b - a) * ii / (M + 1.0);
      pts.push_back(t);
      const double v = std::fabs(value_at(t));
      if (v > best_v) {
        best_v = v;
        best = ii;
      }
    }
    double lo = a + (b - a) * (best - 1) / (M + 1.0);
    double hi = a + (b - a) * (best + 1) / (M + 1.0);
    const double gr = 0.61803398874989485;
    for (int it = 0; it < 90; ++it) {
      const double c = hi - gr * (hi - lo);
      const double d = lo + gr * (hi - lo);
      if (std::fabs(value_at(c)) < std::fabs(value_at(d)))
        lo = c;
      else
        hi = d;
    }
    pts.push_back(0.5 * (lo + hi));
    if (include_b) pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    double peak = 0;
    for (double p : pts) {
      const double v = value_at(p);
      xs.push_back(p);
      vals.push_back(v);
      peak = std::max(peak, std::fabs(v));
    }
    peaks.push_back(peak);
  };

  add_zero(zero_at(m_cut));
  for (std::int64_t m = m_cut - 1; m >= 1; --m) {
    process_interval(zero_at(m + 1), zero_at(m), false);
    add_zero(zero_at(m));
  }
  process_interval(zero_at(1), kTwoPi, true);

  // Only the value sequence matters for component counting on a 1D path, so
  // the field carries a nominal uniform spacing.
  const std::int64_t P = static_cast<std::int64_t>(xs.size());
  GridField signed_field = make_grid_field(
      {P}, {kTwoPi / static_cast<double>(P)}, {AxisTopology::box}, std::move(vals));
  GridField field = absolute(signed_field);

  WigglyReport rep;
  rep.field = std::move(signed_field);
  rep.cut_position = zero_at(m_cut);
  rep.tracked_zeros = m_cut;
  std::vector<double> deltas = sorted_unique(delta_list);
  std::sort(deltas.begin(), deltas.end(), std::greater<double>());
  std::vector<ScalingRow> rows;
  rep.all_agree = true;
  for (double d : deltas) {
    const std::int64_t count = coarse_m(field, d, 0).count;
    std::int64_t oracle = 0;
    for (double pk : peaks)
      if (pk >= d) ++oracle;
    WigglyRow row;
    row.delta = d;
    row.count = count;
    row.oracle_count = oracle;
    row.agree = (count == oracle);
    rep.all_agree = rep.all_agree && row.agree;
    rep.rows.push_back(row);
    ScalingRow srow;
    srow.parameter = 1.0 / d;
    srow.trial = 0;
    srow.seed = 0;
    srow.count = static_cast<double>(count);
    srow.resolution = P;
    rows.push_back(srow);
  }
  std::ostringstream ens;
  ens << "x^alpha*sin(x^-beta) on (0, 2*pi], alpha=" << alpha << ", beta=" << beta
      << "; exact zeros and refined per-oscillation extrema sampled; "
      << "fit log m0 vs log(1/delta)";
  rep.scaling = fit_scaling(std::move(rows), ens.str());
  return rep;
}

ScalingReport sharpness_sweep(int n, const std::vector<double>& lambda_list,
                              double delta, double A, double a1,
                              std::uint64_t seed) {
  const std::vector<double> lams = sorted_unique(lambda_list);
  require_decade(lams, "bump sweep");

  std::vector<ScalingRow> rows;
  rows.reserve(lams.size());
  for (std::size_t li = 0; li < lams.size(); ++li) {
    SharpnessConfig cfg;
    cfg.n = n;
    cfg.lambda = lams[li];
    cfg.delta = delta;
    cfg.A = A;
    cfg.a1 = a1;
    const std::uint64_t s = derive_seed(seed, li, 0);
    const SharpnessResult res = sharpness_construct(cfg, s);
    if (!res.remainder_ok) {
      std::ostringstream os;
      os << "bump sweep: remainder certificate failed at lambda=" << lams[li];
      throw config_error(os.str());
    }
    if (2 * res.depth_passes < res.n_bumps) {
      std::ostringstream os;
      os << "bump sweep: only " << res.depth_passes << " of " << res.n_bumps
         << " centers pass the depth test at lambda=" << lams[li]
         << "; raise A";
      throw config_error(os.str());
    }
    const std::int64_t N =
        8 * std::max<std::int64_t>(nyquist_samples(res.f), 8);
    const GridField field = absolute(sample(res.f, N, AxisTopology::torus));
    ScalingRow row;
    row.parameter = lams[li] + 1.0;
    row.trial = 0;
    row.seed = s;
    row.count = static_cast<double>(
        coarse_m(field, 0.9 * res.depth_scale, 0, 0.2 * res.depth_scale).count);
    row.resolution = N;
    rows.push_back(row);
  }
  std::ostringstream ens;
  ens << "isolated-bump packing on T^" << n << ", depth parameter delta=" << delta
      << ", A=" << A << ", a1=" << a1
      << "; count = m0 of the unit field at 0.9x construction depth; "
      << "fit log m0 vs log(lambda+1)";
  return fit_scaling(std::move(rows), ens.str());
}

}  // namespace cnodal
