#pragma once

#include <string>

#include <json.hpp>

#include "cnodal/barcode.hpp"

namespace cnodal {

// Barcode wire format: a JSON array of {degree, birth, death, multiplicity}
// where death is either a number or the string "inf". Round-trips exactly.
nlohmann::json barcode_to_json(const GradedBarcode& b);
GradedBarcode barcode_from_json(const nlohmann::json& j);

std::string barcode_to_string(const GradedBarcode& b, int indent = 2);
GradedBarcode barcode_from_string(const std::string& text);

}  // namespace cnodal
