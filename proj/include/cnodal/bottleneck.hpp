#pragma once

#include "cnodal/barcode.hpp"

namespace cnodal {

// Exact bottleneck distance between the degree-d parts of two barcodes.
// Bars may be matched to each other when both endpoint differences are within
// eps (infinite deaths only match infinite deaths) or erased against the
// diagonal when their half-length is within eps. Computed by a binary search
// over the finite set of candidate eps values, with feasibility decided by
// maximum bipartite matching. Returns +inf when the essential bar counts
// differ.
double bottleneck_distance_in_degree(const GradedBarcode& b1, const GradedBarcode& b2,
                                     int degree);

// Max of bottleneck_distance_in_degree over all degrees present in either
// barcode; bars of different degrees are never matched.
double bottleneck_distance(const GradedBarcode& b1, const GradedBarcode& b2);

}  // namespace cnodal
