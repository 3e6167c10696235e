#include "cnodal/cubical.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace cnodal {

namespace {

constexpr std::uint32_t no_owner = std::numeric_limits<std::uint32_t>::max();

// Cell tables for the full cubical complex of a grid. A cell is a product of
// per-axis vertices and edges; the axes carrying an edge form the cell's mask.
// Global ids are contiguous per mask block, row-major within a block.
struct Lattice {
  std::vector<std::int64_t> dims;
  std::vector<AxisTopology> topo;
  int n = 0;
  std::vector<std::vector<std::int64_t>> extent;  // [mask][axis]
  std::vector<std::uint64_t> offset;              // first id of each mask block
  std::uint64_t total = 0;

  Lattice(const std::vector<std::int64_t>& d, const std::vector<AxisTopology>& t)
      : dims(d), topo(t), n(static_cast<int>(d.size())) {
    std::uint32_t masks = 1u << n;
    extent.resize(masks);
    offset.resize(masks + 1, 0);
    for (std::uint32_t m = 0; m < masks; ++m) {
      extent[m].resize(n);
      std::uint64_t block = 1;
      for (int a = 0; a < n; ++a) {
        std::int64_t e = (m >> a) & 1
                             ? (topo[a] == AxisTopology::torus ? dims[a] : dims[a] - 1)
                             : dims[a];
        extent[m][a] = e;
        block *= static_cast<std::uint64_t>(e);
      }
      offset[m + 1] = offset[m] + block;
    }
    total = offset[masks];
  }

  std::uint64_t id_of(std::uint32_t mask, const std::int64_t* idx) const {
    std::uint64_t linear = 0;
    for (int a = 0; a < n; ++a) linear = linear * extent[mask][a] + idx[a];
    return offset[mask] + linear;
  }

  std::uint32_t mask_of(std::uint64_t id) const {
    std::uint32_t m = 0;
    while (offset[m + 1] <= id) ++m;
    return m;
  }

  void decode(std::uint64_t id, std::uint32_t& mask, std::int64_t* idx) const {
    mask = mask_of(id);
    std::uint64_t linear = id - offset[mask];
    for (int a = n - 1; a >= 0; --a) {
      idx[a] = static_cast<std::int64_t>(linear % extent[mask][a]);
      linear /= extent[mask][a];
    }
  }

  std::int64_t wrap_up(int axis, std::int64_t i) const {
    ++i;
    if (i == dims[axis]) i = 0;  // only reachable on torus axes
    return i;
  }

  // the two facets obtained by collapsing one extended axis
  void facets(std::uint32_t mask, std::int64_t* idx, int axis,
              std::uint64_t& lower, std::uint64_t& upper) const {
    std::uint32_t m2 = mask & ~(1u << axis);
    lower = id_of(m2, idx);
    std::int64_t saved = idx[axis];
    idx[axis] = wrap_up(axis, saved);
    upper = id_of(m2, idx);
    idx[axis] = saved;
  }
};

// odometer over a mixed-radix multi-index, row-major (last axis fastest)
inline bool advance(std::vector<std::int64_t>& idx, const std::vector<std::int64_t>& ext) {
  for (int a = static_cast<int>(idx.size()); a-- > 0;) {
    if (++idx[a] < ext[a]) return true;
    idx[a] = 0;
  }
  return false;
}

struct UnionFind {
  std::vector<std::uint32_t> parent;
  std::vector<double> birth_value;
  std::vector<std::uint32_t> birth_rank;

  explicit UnionFind(std::size_t n)
      : parent(n, no_owner), birth_value(n, 0), birth_rank(n, 0) {}

  void make(std::uint32_t v, double value, std::uint32_t rank) {
    parent[v] = v;
    birth_value[v] = value;
    birth_rank[v] = rank;
  }

  std::uint32_t find(std::uint32_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }

  // elder rule: earlier birth survives; ties resolved by filtration rank
  bool elder(std::uint32_t r1, std::uint32_t r2) const {
    if (birth_value[r1] != birth_value[r2]) return birth_value[r1] < birth_value[r2];
    return birth_rank[r1] < birth_rank[r2];
  }
};

}  // namespace

CubicalFiltration::CubicalFiltration(const GridField& field) {
  field.validate();
  dims_ = field.dims;
  topology_ = field.topology;
  Lattice lat(dims_, topology_);
  if (lat.total >= std::numeric_limits<std::uint32_t>::max())
    throw resolution_error("grid has too many cells for this build");

  values_.resize(lat.total);
  cell_dim_.resize(lat.total);
  mask_offset_.resize(lat.offset.size());
  for (std::size_t i = 0; i < lat.offset.size(); ++i)
    mask_offset_[i] = static_cast<std::uint32_t>(lat.offset[i]);
  mask_extent_ = lat.extent;

  // vertices carry the samples; every higher cell is the max of the two
  // facets along its lowest extended axis
  std::copy(field.samples.begin(), field.samples.end(), values_.begin());
  std::fill(cell_dim_.begin(), cell_dim_.begin() + field.samples.size(), 0);
  std::uint32_t masks = 1u << lat.n;
  for (std::uint32_t m = 1; m < masks; ++m) {
    int axis = std::countr_zero(m);
    std::uint32_t m2 = m & ~(1u << axis);
    std::uint8_t dim = static_cast<std::uint8_t>(std::popcount(m));
    std::vector<std::int64_t> idx(lat.n, 0);
    std::uint64_t id = lat.offset[m];
    do {
      double v1 = values_[lat.id_of(m2, idx.data())];
      std::int64_t saved = idx[axis];
      idx[axis] = lat.wrap_up(axis, saved);
      double v2 = values_[lat.id_of(m2, idx.data())];
      idx[axis] = saved;
      values_[id] = std::max(v1, v2);
      cell_dim_[id] = dim;
      ++id;
    } while (advance(idx, lat.extent[m]));
  }

  auto [mn, mx] = std::minmax_element(field.samples.begin(), field.samples.end());
  min_value_ = *mn;
  max_value_ = *mx;
}

std::int64_t CubicalFiltration::cell_count_of_dim(int d) const {
  std::int64_t count = 0;
  std::uint32_t masks = static_cast<std::uint32_t>(mask_extent_.size());
  for (std::uint32_t m = 0; m < masks; ++m)
    if (std::popcount(m) == d)
      count += static_cast<std::int64_t>(mask_offset_[m + 1]) - mask_offset_[m];
  return count;
}

void CubicalFiltration::compute_barcode() const {
  Lattice lat(dims_, topology_);
  std::uint32_t n_cells = static_cast<std::uint32_t>(lat.total);

  // filtration order: by value, then dimension, then cell id
  std::vector<std::uint32_t> order(n_cells);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (values_[a] != values_[b]) return values_[a] < values_[b];
    if (cell_dim_[a] != cell_dim_[b]) return cell_dim_[a] < cell_dim_[b];
    return a < b;
  });
  std::vector<std::uint32_t> rank(n_cells);
  for (std::uint32_t r = 0; r < n_cells; ++r) rank[order[r]] = r;

  std::vector<Bar> bars;
  std::vector<bool> cleared(n_cells, false);

  // boundary matrix reduction from the top dimension down, with clearing
  int n = lat.n;
  std::vector<std::int64_t> idx(n);
  std::vector<std::uint32_t> scratch;
  for (int d = n; d >= 2; --d) {
    std::vector<std::uint32_t> cols;  // dim-d cells in filtration order
    for (std::uint32_t r = 0; r < n_cells; ++r)
      if (cell_dim_[order[r]] == d) cols.push_back(order[r]);

    std::vector<std::vector<std::uint32_t>> reduced(cols.size());
    std::vector<std::uint32_t> owner(n_cells, no_owner);  // pivot rank -> column slot
    for (std::size_t c = 0; c < cols.size(); ++c) {
      std::uint32_t cell = cols[c];
      if (cleared[cell]) continue;  // paired as a birth by the reduction above

      std::uint32_t mask;
      lat.decode(cell, mask, idx.data());
      std::vector<std::uint32_t> col;
      col.reserve(2 * d);
      for (int a = 0; a < n; ++a) {
        if (!((mask >> a) & 1)) continue;
        std::uint64_t lo, up;
        lat.facets(mask, idx.data(), a, lo, up);
        col.push_back(rank[lo]);
        col.push_back(rank[up]);
      }
      std::sort(col.begin(), col.end());
      // a doubled face (wrap on a length-N torus axis never doubles for N>=3)
      // would cancel over Z/2; keep the general guard anyway
      for (std::size_t i = 0; i + 1 < col.size();) {
        if (col[i] == col[i + 1])
          col.erase(col.begin() + i, col.begin() + i + 2);
        else
          ++i;
      }

      while (!col.empty()) {
        std::uint32_t pivot = col.back();
        std::uint32_t other = owner[pivot];
        if (other == no_owner) {
          owner[pivot] = static_cast<std::uint32_t>(c);
          std::uint32_t birth_cell = order[pivot];
          cleared[birth_cell] = true;
          double birth = values_[birth_cell];
          double death = values_[cell];
          if (death > birth) bars.push_back(Bar{d - 1, birth, death, 1});
          break;
        }
        // symmetric difference with the previously reduced column
        const std::vector<std::uint32_t>& rhs = reduced[other];
        scratch.clear();
        std::set_symmetric_difference(col.begin(), col.end(), rhs.begin(), rhs.end(),
                                      std::back_inserter(scratch));
        col.swap(scratch);
      }
      if (col.empty()) {
        // essential class in degree d
        bars.push_back(Bar{d, values_[cell], infinite_death, 1});
      } else {
        reduced[c] = std::move(col);
      }
    }
  }

  // degree 0 by union-find over vertices and edges, elder rule on merges;
  // edges that close a cycle are the degree-1 births
  std::uint32_t n_vertices = mask_offset_[1];
  UnionFind uf(n_vertices);
  for (std::uint32_t r = 0; r < n_cells; ++r) {
    std::uint32_t cell = order[r];
    int d = cell_dim_[cell];
    if (d == 0) {
      uf.make(cell, values_[cell], r);
    } else if (d == 1) {
      std::uint32_t mask;
      lat.decode(cell, mask, idx.data());
      int axis = std::countr_zero(mask);
      std::uint64_t lo, up;
      lat.facets(mask, idx.data(), axis, lo, up);
      std::uint32_t r1 = uf.find(static_cast<std::uint32_t>(lo));
      std::uint32_t r2 = uf.find(static_cast<std::uint32_t>(up));
      if (r1 == r2) {
        // positive edge: a degree-1 class is born here unless the reduction
        // one dimension up already paired it
        if (n >= 2 && cleared[cell]) continue;
        bars.push_back(Bar{1, values_[cell], infinite_death, 1});
      } else {
        std::uint32_t dying = uf.elder(r1, r2) ? r2 : r1;
        std::uint32_t living = dying == r1 ? r2 : r1;
        double birth = uf.birth_value[dying];
        double death = values_[cell];
        if (death > birth) bars.push_back(Bar{0, birth, death, 1});
        uf.parent[dying] = living;
      }
    }
  }
  for (std::uint32_t v = 0; v < n_vertices; ++v)
    if (uf.parent[v] == v)
      bars.push_back(Bar{0, uf.birth_value[v], infinite_death, 1});

  barcode_ = GradedBarcode(std::move(bars));
  barcode_ready_ = true;
}

const GradedBarcode& CubicalFiltration::barcode() const {
  if (!barcode_ready_) compute_barcode();
  return barcode_;
}

index_t CubicalFiltration::persistent_rank(double s, double t, int degree) const {
  if (std::isnan(s) || std::isnan(t) || s > t)
    throw input_error("persistent_rank requires levels s <= t");
  index_t count = 0;
  for (const Bar& bar : barcode().bars()) {
    if (bar.degree != degree) continue;
    if (bar.birth <= s && (bar.is_infinite() || bar.death > t)) count += bar.multiplicity;
  }
  return count;
}

CubicalFiltration build_filtration(const GridField& field) {
  return CubicalFiltration(field);
}

GradedBarcode sublevel_barcode(const GridField& field) {
  return build_filtration(field).barcode();
}

GradedBarcode sublevel_barcode_degree0(const GridField& field) {
  field.validate();
  Lattice lat(field.dims, field.topology);
  // only vertices and edges participate; reuse the same ordering rules
  std::uint64_t n_low = lat.offset[1];
  for (std::uint32_t m = 1; m < (1u << lat.n); m <<= 1) {
    std::uint64_t block = lat.offset[m + 1] - lat.offset[m];
    n_low += block;
  }
  std::vector<std::uint64_t> ids;
  ids.reserve(n_low);
  for (std::uint64_t id = 0; id < lat.offset[1]; ++id) ids.push_back(id);
  for (int a = 0; a < lat.n; ++a) {
    std::uint32_t m = 1u << a;
    for (std::uint64_t id = lat.offset[m]; id < lat.offset[m + 1]; ++id) ids.push_back(id);
  }

  std::vector<double> value(ids.size());
  std::vector<std::int64_t> idx(lat.n);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::uint64_t id = ids[i];
    if (id < lat.offset[1]) {
      value[i] = field.samples[id];
    } else {
      std::uint32_t mask;
      lat.decode(id, mask, idx.data());
      int axis = std::countr_zero(mask);
      std::uint64_t lo, up;
      lat.facets(mask, idx.data(), axis, lo, up);
      value[i] = std::max(field.samples[lo], field.samples[up]);
    }
  }

  std::vector<std::uint32_t> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (value[a] != value[b]) return value[a] < value[b];
    bool va = ids[a] < lat.offset[1], vb = ids[b] < lat.offset[1];
    if (va != vb) return va;
    return ids[a] < ids[b];
  });

  std::uint32_t n_vertices = static_cast<std::uint32_t>(lat.offset[1]);
  UnionFind uf(n_vertices);
  std::vector<Bar> bars;
  for (std::uint32_t r = 0; r < order.size(); ++r) {
    std::uint32_t i = order[r];
    std::uint64_t id = ids[i];
    if (id < lat.offset[1]) {
      uf.make(static_cast<std::uint32_t>(id), value[i], r);
    } else {
      std::uint32_t mask;
      lat.decode(id, mask, idx.data());
      int axis = std::countr_zero(mask);
      std::uint64_t lo, up;
      lat.facets(mask, idx.data(), axis, lo, up);
      std::uint32_t r1 = uf.find(static_cast<std::uint32_t>(lo));
      std::uint32_t r2 = uf.find(static_cast<std::uint32_t>(up));
      if (r1 == r2) continue;
      std::uint32_t dying = uf.elder(r1, r2) ? r2 : r1;
      std::uint32_t living = dying == r1 ? r2 : r1;
      if (value[i] > uf.birth_value[dying])
        bars.push_back(Bar{0, uf.birth_value[dying], value[i], 1});
      uf.parent[dying] = living;
    }
  }
  for (std::uint32_t v = 0; v < n_vertices; ++v)
    if (uf.parent[v] == v) bars.push_back(Bar{0, uf.birth_value[v], infinite_death, 1});
  return GradedBarcode(std::move(bars));
}

}  // namespace cnodal
