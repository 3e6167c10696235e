#include "cnodal/field_spec.hpp"

#include <complex>
#include <sstream>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cnodal/errors.hpp"
#include "cnodal/spectral.hpp"

namespace cnodal {

namespace {

using nlohmann::json;

json parse_object(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw input_error("field spec: malformed JSON");
  if (!j.is_object()) throw input_error("field spec: expected a JSON object");
  return j;
}

const json& need(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end())
    throw input_error(std::string("field spec: missing key '") + key + "'");
  return *it;
}

double num(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number())
    throw input_error(std::string("field spec: '") + key + "' must be a number");
  return v.get<double>();
}

double num_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? num(j, key) : fallback;
}

std::int64_t integer(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number_integer())
    throw input_error(std::string("field spec: '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::int64_t integer_or(const json& j, const char* key, std::int64_t fallback) {
  return j.contains(key) ? integer(j, key) : fallback;
}

std::string text(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_string())
    throw input_error(std::string("field spec: '") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> num_list(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_array())
    throw input_error(std::string("field spec: '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number())
      throw input_error(std::string("field spec: '") + key +
                        "' must contain numbers only");
    out.push_back(e.get<double>());
  }
  return out;
}

RealizedField realize_trig(const json& j) {
  const int n = static_cast<int>(integer(j, "n"));
  std::optional<double> cut;
  if (j.contains("lambda_cut")) cut = num(j, "lambda_cut");
  TrigPoly f(n, cut);
  const json& entries = need(j, "coefficients");
  if (!entries.is_array() || entries.empty())
    throw input_error("field spec: 'coefficients' must be a non-empty array");
  for (const auto& e : entries) {
    if (!e.is_object())
      throw input_error("field spec: each coefficient must be an object");
    const json& xi_j = need(e, "xi");
    if (!xi_j.is_array() || static_cast<int>(xi_j.size()) != n)
      throw input_error("field spec: 'xi' must be an integer array of length n");
    FreqVector xi;
    for (const auto& c : xi_j) {
      if (!c.is_number_integer())
        throw input_error("field spec: 'xi' entries must be integers");
      xi.push_back(c.get<int>());
    }
    const double re = num_or(e, "re", 0.0);
    const double im = num_or(e, "im", 0.0);
    f.set(xi, std::complex<double>(re, im));
  }
  // Fill in missing conjugate partners so one-sided descriptors stay valid.
  const auto given = f.coeffs;
  for (const auto& [xi, c] : given) {
    FreqVector neg(xi.size());
    for (std::size_t a = 0; a < xi.size(); ++a) neg[a] = -xi[a];
    if (given.find(neg) == given.end()) f.set(neg, std::conj(c));
  }
  f.validate();
  RealizedField out;
  std::ostringstream os;
  os << "trig polynomial, n=" << n << ", " << f.coeffs.size() << " modes";
  out.description = os.str();
  out.trig = std::move(f);
  return out;
}

RealizedField realize_stored_grid(const json& j) {
  RealizedField out;
  if (j.contains("sidecar")) {
    const std::string path = text(j, "sidecar");
    out.grid = read_field_sidecar(path);
    out.description = "grid from sidecar " + path;
    return out;
  }
  std::vector<AxisTopology> topo;
  if (j.contains("topology")) {
    const json& t = need(j, "topology");
    if (!t.is_array())
      throw input_error("field spec: 'topology' must be an array of strings");
    for (const auto& e : t) {
      if (!e.is_string())
        throw input_error("field spec: 'topology' must be an array of strings");
      topo.push_back(topology_from_string(e.get<std::string>()));
    }
  }
  if (j.contains("csv")) {
    const std::string path = text(j, "csv");
    out.grid = read_field_csv(path, num_list(j, "spacing"), topo);
    out.description = "grid from csv " + path;
    return out;
  }
  const json& dims_j = need(j, "dims");
  if (!dims_j.is_array() || dims_j.empty())
    throw input_error("field spec: 'dims' must be a non-empty integer array");
  std::vector<std::int64_t> dims;
  for (const auto& e : dims_j) {
    if (!e.is_number_integer())
      throw input_error("field spec: 'dims' entries must be integers");
    dims.push_back(e.get<std::int64_t>());
  }
  if (topo.empty()) topo.assign(dims.size(), AxisTopology::box);
  out.grid = make_grid_field(dims, num_list(j, "spacing"), topo,
                             num_list(j, "samples"));
  std::ostringstream os;
  os << "inline grid,";
  for (auto d : dims) os << " " << d;
  out.description = os.str();
  return out;
}

RealizedField realize_named(const json& j, std::uint64_t default_seed) {
  const std::string name = text(j, "name");
  RealizedField out;
  if (name == "sin_j" || name == "sin") {
    const int n = static_cast<int>(integer_or(j, "n", 1));
    const int jj = static_cast<int>(integer_or(j, "j", 1));
    if (n < 1 || jj < 1)
      throw input_error("field spec: sin_j needs n >= 1 and j >= 1");
    TrigPoly f(n);
    FreqVector xi(n, 0);
    xi[0] = jj;
    f.set(xi, std::complex<double>(0.0, -0.5));
    xi[0] = -jj;
    f.set(xi, std::complex<double>(0.0, 0.5));
    std::ostringstream os;
    os << "sin(" << jj << "x) on T^" << n;
    out.description = os.str();
    out.trig = std::move(f);
    return out;
  }
  if (name == "wiggly") {
    const double alpha = num_or(j, "alpha", 4.0);
    const double beta = num_or(j, "beta", 1.0);
    const double delta_min = num_or(j, "delta_min", 1e-6);
    WigglyReport rep = wiggly_example(alpha, beta, {delta_min});
    std::ostringstream os;
    os << "x^" << alpha << "*sin(x^-" << beta << ") sampled down to depth "
       << delta_min;
    out.description = os.str();
    out.grid = std::move(rep.field);
    return out;
  }
  if (name == "random_Flambda") {
    const int n = static_cast<int>(integer_or(j, "n", 1));
    const double lambda = num(j, "lambda");
    const std::uint64_t seed = static_cast<std::uint64_t>(
        integer_or(j, "seed", static_cast<std::int64_t>(default_seed)));
    out.trig = random_combination(n, lambda, seed);
    std::ostringstream os;
    os << "random unit-L2 combination, n=" << n << ", lambda=" << lambda
       << ", seed=" << seed;
    out.description = os.str();
    return out;
  }
  if (name == "sharpness") {
    SharpnessConfig cfg;
    cfg.n = static_cast<int>(integer_or(j, "n", 1));
    cfg.lambda = num_or(j, "lambda", 100.0);
    cfg.delta = num_or(j, "delta", 1.0);
    cfg.A = num_or(j, "A", 64.0);
    cfg.a1 = num_or(j, "a1", 1.0);
    const std::uint64_t seed = static_cast<std::uint64_t>(
        integer_or(j, "seed", static_cast<std::int64_t>(default_seed)));
    SharpnessResult res = sharpness_construct(cfg, seed);
    std::ostringstream os;
    os << "bump-packing field, n=" << cfg.n << ", lambda=" << cfg.lambda
       << ", bumps=" << res.n_bumps << ", seed=" << seed;
    out.description = os.str();
    out.trig = std::move(res.f);
    return out;
  }
  throw input_error("field spec: unknown named generator '" + name +
                    "' (expected sin_j, wiggly, random_Flambda, or sharpness)");
}

}  // namespace

RealizedField realize_field(const std::string& json_text,
                            std::uint64_t default_seed) {
  const json j = parse_object(json_text);
  const std::string kind = text(j, "kind");
  if (kind == "trig") return realize_trig(j);
  if (kind == "grid") return realize_stored_grid(j);
  if (kind == "named") return realize_named(j, default_seed);
  throw input_error("field spec: unknown kind '" + kind +
                    "' (expected trig, grid, or named)");
}

GridField realize_grid(const RealizedField& f, std::int64_t mult) {
  if (f.grid) return *f.grid;
  if (!f.trig) throw input_error("field spec: empty realization");
  if (mult < 1) throw input_error("field spec: sampling multiplier must be >= 1");
  const std::int64_t N =
      mult * std::max<std::int64_t>(nyquist_samples(*f.trig), 8);
  return sample(*f.trig, N, AxisTopology::torus);
}

}  // namespace cnodal
