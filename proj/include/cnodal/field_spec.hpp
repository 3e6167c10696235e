#pragma once

// JSON mini-language for describing input fields on the command line:
//   {"kind": "trig",  "n": 1, "coefficients": [{"xi": [3], "im": -0.5}, ...]}
//   {"kind": "grid",  "sidecar": "field.json"}            (raw payload + sidecar)
//   {"kind": "grid",  "csv": "field.csv", "spacing": [..], "topology": ["box"]}
//   {"kind": "grid",  "dims": [..], "spacing": [..], "topology": [..], "samples": [..]}
//   {"kind": "named", "name": "sin_j" | "wiggly" | "random_Flambda" | "sharpness", ...}

#include <cstdint>
#include <optional>
#include <string>

#include "cnodal/grid.hpp"
#include "cnodal/trig.hpp"

namespace cnodal {

// A field realized from a descriptor: an analytic representation when the
// source is trigonometric, stored samples when the source is a grid.
struct RealizedField {
  std::optional<TrigPoly> trig;
  std::optional<GridField> grid;
  std::string description;  // one-line origin note for output headers
};

// Parses a descriptor. `default_seed` feeds the randomized generators when
// the descriptor does not carry its own "seed" key. Throws input_error on
// malformed or unknown descriptors.
RealizedField realize_field(const std::string& json_text,
                            std::uint64_t default_seed = 20240901);

// Grid samples of the realization: stored grids pass through unchanged;
// analytic fields are sampled on the torus at mult x the Nyquist rule
// (at least 8 points per axis).
GridField realize_grid(const RealizedField& f, std::int64_t mult = 2);

}  // namespace cnodal
