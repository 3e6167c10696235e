#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cnodal/barcode.hpp"
#include "cnodal/grid.hpp"

namespace cnodal {

// Lower-star filtration of the full cubical complex of a grid: a cell enters
// at the max of its incident vertex values. Cells are ordered by
// (value, dimension, cell id), which puts every face before its cofaces and
// breaks value ties deterministically.
class CubicalFiltration {
 public:
  explicit CubicalFiltration(const GridField& field);

  std::size_t ndim() const { return dims_.size(); }
  std::int64_t cell_count() const { return static_cast<std::int64_t>(values_.size()); }
  std::int64_t cell_count_of_dim(int d) const;

  // Sublevel-set persistence barcode over Z/2. Degree 0 comes from a
  // union-find pass, higher degrees from boundary matrix reduction with the
  // clearing optimization, run from the top dimension down.
  const GradedBarcode& barcode() const;

  // Rank of the map H_r({f <= s}) -> H_r({f <= t}), s <= t: the number of
  // degree-r bars born at or before s that die after t.
  index_t persistent_rank(double s, double t, int degree) const;

  double min_value() const { return min_value_; }
  double max_value() const { return max_value_; }

 private:
  void compute_barcode() const;

  std::vector<std::int64_t> dims_;
  std::vector<AxisTopology> topology_;

  // per-mask cell tables
  std::vector<std::uint32_t> mask_offset_;        // first global id of each mask block
  std::vector<std::vector<std::int64_t>> mask_extent_;  // per-axis cell counts for a mask

  std::vector<double> values_;      // by global cell id
  std::vector<std::uint8_t> cell_dim_;
  double min_value_ = 0, max_value_ = 0;

  mutable GradedBarcode barcode_;
  mutable bool barcode_ready_ = false;

  friend class FiltrationAccess;
};

CubicalFiltration build_filtration(const GridField& field);

GradedBarcode sublevel_barcode(const GridField& field);

// Degree-0 sublevel barcode only (union-find, no matrix reduction). Identical
// to the degree-0 part of sublevel_barcode but much faster on large grids.
GradedBarcode sublevel_barcode_degree0(const GridField& field);

}  // namespace cnodal
