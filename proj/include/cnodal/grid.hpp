#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cnodal/errors.hpp"

namespace cnodal {

struct TrigPoly;  // defined in trig.hpp

enum class AxisTopology { box, torus };

AxisTopology topology_from_string(const std::string& s);
std::string topology_to_string(AxisTopology t);

// Scalar samples on a regular grid, row-major with the last axis fastest.
// Each axis is independently a closed interval (box) or periodic (torus);
// torus axes wrap by index arithmetic, there are no duplicated seam samples.
struct GridField {
  std::vector<std::int64_t> dims;         // vertices per axis
  std::vector<double> spacing;            // sample step per axis
  std::vector<AxisTopology> topology;     // per axis
  std::vector<double> samples;            // row-major values
  std::shared_ptr<const TrigPoly> descriptor;  // optional exact generator

  std::size_t ndim() const { return dims.size(); }
  std::int64_t vertex_count() const;

  double value(std::int64_t linear_index) const { return samples[linear_index]; }

  // Throws input_error on NaN samples, dims/samples mismatch, non-positive
  // spacing, or axes too short for their topology (box >= 2, torus >= 3).
  void validate() const;
};

GridField make_grid_field(std::vector<std::int64_t> dims, std::vector<double> spacing,
                          std::vector<AxisTopology> topology, std::vector<double> samples);

// Pointwise transforms (descriptor is not carried over).
GridField negated(const GridField& f);
GridField absolute(const GridField& f);

// Pointwise combinations of two fields on identical grids.
GridField pointwise_min(const GridField& f, const GridField& g);
GridField pointwise_max(const GridField& f, const GridField& g);
GridField pointwise_product(const GridField& f, const GridField& g);
GridField pointwise_hypot(const GridField& f, const GridField& g);

// Closed sub-slab [lo, hi] along one axis (that axis becomes a box axis).
GridField slab(const GridField& f, std::size_t axis, std::int64_t lo, std::int64_t hi);

// Slice at a fixed index along one axis; the result has one axis fewer.
GridField slice(const GridField& f, std::size_t axis, std::int64_t index);

// ---- file formats ----------------------------------------------------------

// Raw little-endian float64 payload plus a JSON sidecar carrying
// {dims, spacing, topology, data}. The sidecar references the payload path.
void write_field_raw(const GridField& f, const std::string& data_path,
                     const std::string& sidecar_path);
GridField read_field_sidecar(const std::string& sidecar_path);

// CSV: 1-D fields one value per line; 2-D fields one row per leading index.
// Grid metadata is not stored in CSV; callers supply spacing/topology.
void write_field_csv(const GridField& f, const std::string& path);
GridField read_field_csv(const std::string& path, std::vector<double> spacing,
                         std::vector<AxisTopology> topology);

}  // namespace cnodal
