#pragma once

#include <optional>

#include "cnodal/cubical.hpp"

namespace cnodal {

// Result of a coarse nodal-structure count at scale delta.
struct CoarseCount {
  index_t count = 0;
  double delta = 0;
  double eta = 0;  // zero-measurement cut actually used
  int degree = 0;
};

// Zero-measurement cut: a small multiple of machine epsilon times the sup
// norm, large enough to absorb evaluation noise at exact zeros.
double default_zero_cut(const GridField& abs_field);

// Rank of H_r({|s| > delta}) -> H_r({|s| > 0}), measured as the persistent
// rank of the sublevel filtration of -|s| from level -delta to level -eta.
// The field must be the non-negative |s|; requires delta > eta.
CoarseCount coarse_m(const GridField& abs_field, double delta, int degree,
                     std::optional<double> eta_override = std::nullopt);

// Rank of H_r({|s| = 0}) -> H_r({|s| < delta}), measured as the persistent
// rank of the sublevel filtration of |s| from level eta to level delta - eta.
// Requires delta > 2 * eta.
CoarseCount coarse_z(const GridField& abs_field, double delta, int degree,
                     std::optional<double> eta_override = std::nullopt);

}  // namespace cnodal
