#include "cnodal/grid.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cnodal {

AxisTopology topology_from_string(const std::string& s) {
  if (s == "box") return AxisTopology::box;
  if (s == "torus") return AxisTopology::torus;
  throw input_error("unknown axis topology: " + s);
}

std::string topology_to_string(AxisTopology t) {
  return t == AxisTopology::box ? "box" : "torus";
}

std::int64_t GridField::vertex_count() const {
  std::int64_t n = 1;
  for (std::int64_t d : dims) n *= d;
  return n;
}

void GridField::validate() const {
  if (dims.size() != spacing.size() || dims.size() != topology.size())
    throw input_error("dims, spacing, and topology must have equal length");
  for (std::size_t a = 0; a < dims.size(); ++a) {
    std::int64_t min_len = topology[a] == AxisTopology::torus ? 3 : 2;
    if (dims[a] < min_len)
      throw input_error("axis " + std::to_string(a) + " too short for its topology");
    if (!(spacing[a] > 0) || !std::isfinite(spacing[a]))
      throw input_error("spacing must be positive and finite");
  }
  if (static_cast<std::int64_t>(samples.size()) != vertex_count())
    throw input_error("sample count does not match grid dims");
  for (double v : samples)
    if (std::isnan(v)) throw input_error("grid samples must not contain NaN");
}

GridField make_grid_field(std::vector<std::int64_t> dims, std::vector<double> spacing,
                          std::vector<AxisTopology> topology, std::vector<double> samples) {
  GridField f;
  f.dims = std::move(dims);
  f.spacing = std::move(spacing);
  f.topology = std::move(topology);
  f.samples = std::move(samples);
  f.validate();
  return f;
}

namespace {

GridField map_samples(const GridField& f, double (*op)(double)) {
  GridField out = f;
  out.descriptor.reset();
  for (double& v : out.samples) v = op(v);
  return out;
}

GridField combine(const GridField& f, const GridField& g, double (*op)(double, double)) {
  if (f.dims != g.dims || f.topology != g.topology)
    throw input_error("fields must live on identical grids");
  GridField out = f;
  out.descriptor.reset();
  for (std::size_t i = 0; i < out.samples.size(); ++i)
    out.samples[i] = op(f.samples[i], g.samples[i]);
  return out;
}

}  // namespace

GridField negated(const GridField& f) {
  return map_samples(f, [](double v) { return -v; });
}

GridField absolute(const GridField& f) {
  return map_samples(f, [](double v) { return std::fabs(v); });
}

GridField pointwise_min(const GridField& f, const GridField& g) {
  return combine(f, g, [](double a, double b) { return std::min(a, b); });
}

GridField pointwise_max(const GridField& f, const GridField& g) {
  return combine(f, g, [](double a, double b) { return std::max(a, b); });
}

GridField pointwise_product(const GridField& f, const GridField& g) {
  return combine(f, g, [](double a, double b) { return a * b; });
}

GridField pointwise_hypot(const GridField& f, const GridField& g) {
  return combine(f, g, [](double a, double b) { return std::hypot(a, b); });
}

namespace {

// walks a sub-box of the grid in row-major order
template <typename Fn>
void walk_box(const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& hi,
              const std::vector<std::int64_t>& dims, Fn&& fn) {
  std::size_t n = dims.size();
  std::vector<std::int64_t> idx(lo);
  while (true) {
    std::int64_t linear = 0;
    for (std::size_t a = 0; a < n; ++a) linear = linear * dims[a] + idx[a];
    fn(linear);
    std::size_t a = n;
    while (a > 0) {
      --a;
      if (++idx[a] <= hi[a]) break;
      idx[a] = lo[a];
      if (a == 0) return;
    }
    if (n == 0) return;
  }
}

}  // namespace

GridField slab(const GridField& f, std::size_t axis, std::int64_t lo, std::int64_t hi) {
  f.validate();
  if (axis >= f.ndim()) throw input_error("slab axis out of range");
  if (lo < 0 || hi >= f.dims[axis] || lo > hi) throw input_error("slab range out of bounds");
  GridField out;
  out.dims = f.dims;
  out.dims[axis] = hi - lo + 1;
  out.spacing = f.spacing;
  out.topology = f.topology;
  out.topology[axis] = AxisTopology::box;
  std::vector<std::int64_t> from(f.ndim(), 0), to(f.dims);
  for (std::size_t a = 0; a < f.ndim(); ++a) --to[a];
  from[axis] = lo;
  to[axis] = hi;
  out.samples.reserve(out.vertex_count());
  walk_box(from, to, f.dims, [&](std::int64_t i) { out.samples.push_back(f.samples[i]); });
  return out;
}

GridField slice(const GridField& f, std::size_t axis, std::int64_t index) {
  f.validate();
  if (axis >= f.ndim()) throw input_error("slice axis out of range");
  if (index < 0 || index >= f.dims[axis]) throw input_error("slice index out of bounds");
  GridField out;
  for (std::size_t a = 0; a < f.ndim(); ++a) {
    if (a == axis) continue;
    out.dims.push_back(f.dims[a]);
    out.spacing.push_back(f.spacing[a]);
    out.topology.push_back(f.topology[a]);
  }
  std::vector<std::int64_t> from(f.ndim(), 0), to(f.dims);
  for (std::size_t a = 0; a < f.ndim(); ++a) --to[a];
  from[axis] = to[axis] = index;
  out.samples.reserve(out.vertex_count());
  walk_box(from, to, f.dims, [&](std::int64_t i) { out.samples.push_back(f.samples[i]); });
  return out;
}

// ---- file formats ----------------------------------------------------------

namespace {
static_assert(sizeof(double) == 8, "raw field format requires 64-bit doubles");

nlohmann::json sidecar_json(const GridField& f, const std::string& data_path) {
  nlohmann::json j;
  j["dims"] = f.dims;
  j["spacing"] = f.spacing;
  std::vector<std::string> topo;
  for (AxisTopology t : f.topology) topo.push_back(topology_to_string(t));
  j["topology"] = topo;
  j["data"] = data_path;
  return j;
}

}  // namespace

void write_field_raw(const GridField& f, const std::string& data_path,
                     const std::string& sidecar_path) {
  f.validate();
  std::ofstream data(data_path, std::ios::binary);
  if (!data) throw input_error("cannot open " + data_path + " for writing");
  data.write(reinterpret_cast<const char*>(f.samples.data()),
             static_cast<std::streamsize>(f.samples.size() * sizeof(double)));
  if (!data) throw input_error("short write to " + data_path);
  std::ofstream sidecar(sidecar_path);
  if (!sidecar) throw input_error("cannot open " + sidecar_path + " for writing");
  sidecar << sidecar_json(f, data_path).dump(2) << "\n";
}

GridField read_field_sidecar(const std::string& sidecar_path) {
  std::ifstream in(sidecar_path);
  if (!in) throw input_error("cannot open " + sidecar_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(std::string("sidecar parse failure: ") + e.what());
  }
  GridField f;
  f.dims = j.at("dims").get<std::vector<std::int64_t>>();
  f.spacing = j.at("spacing").get<std::vector<double>>();
  for (const auto& t : j.at("topology")) f.topology.push_back(topology_from_string(t));
  std::string data_path = j.at("data").get<std::string>();
  std::ifstream data(data_path, std::ios::binary);
  if (!data) throw input_error("cannot open field payload " + data_path);
  f.samples.resize(f.vertex_count());
  data.read(reinterpret_cast<char*>(f.samples.data()),
            static_cast<std::streamsize>(f.samples.size() * sizeof(double)));
  if (data.gcount() != static_cast<std::streamsize>(f.samples.size() * sizeof(double)))
    throw input_error("field payload shorter than dims require");
  f.validate();
  return f;
}

void write_field_csv(const GridField& f, const std::string& path) {
  f.validate();
  if (f.ndim() < 1 || f.ndim() > 2)
    throw input_error("CSV format supports 1-D and 2-D fields only");
  std::ofstream out(path);
  if (!out) throw input_error("cannot open " + path + " for writing");
  out.precision(17);
  std::int64_t cols = f.ndim() == 2 ? f.dims[1] : 1;
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    out << f.samples[i];
    out << (((static_cast<std::int64_t>(i) + 1) % cols == 0) ? '\n' : ',');
  }
}

GridField read_field_csv(const std::string& path, std::vector<double> spacing,
                         std::vector<AxisTopology> topology) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        row.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw input_error("CSV parse failure in " + path + ": '" + tok + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw input_error("CSV rows have inconsistent lengths");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw input_error("CSV file is empty");
  GridField f;
  bool one_dim = rows.front().size() == 1;
  if (one_dim) {
    f.dims = {static_cast<std::int64_t>(rows.size())};
    for (const auto& r : rows) f.samples.push_back(r[0]);
  } else {
    f.dims = {static_cast<std::int64_t>(rows.size()),
              static_cast<std::int64_t>(rows.front().size())};
    for (const auto& r : rows) f.samples.insert(f.samples.end(), r.begin(), r.end());
  }
  f.spacing = std::move(spacing);
  f.topology = std::move(topology);
  f.validate();
  return f;
}

}  // namespace cnodal
