#include "cnodal/barcode_json.hpp"

#include <cmath>

namespace cnodal {

using nlohmann::json;

json barcode_to_json(const GradedBarcode& b) {
  json arr = json::array();
  for (const Bar& bar : b.bars()) {
    json row;
    row["degree"] = bar.degree;
    row["birth"] = bar.birth;
    if (bar.is_infinite())
      row["death"] = "inf";
    else
      row["death"] = bar.death;
    row["multiplicity"] = bar.multiplicity;
    arr.push_back(std::move(row));
  }
  return arr;
}

GradedBarcode barcode_from_json(const json& j) {
  if (!j.is_array()) throw input_error("barcode JSON must be an array");
  std::vector<Bar> bars;
  for (const json& row : j) {
    if (!row.is_object()) throw input_error("barcode JSON entries must be objects");
    Bar bar;
    bar.degree = row.at("degree").get<int>();
    bar.birth = row.at("birth").get<double>();
    const json& death = row.at("death");
    if (death.is_string()) {
      if (death.get<std::string>() != "inf")
        throw input_error("barcode death must be a number or \"inf\"");
      bar.death = infinite_death;
    } else {
      bar.death = death.get<double>();
      if (!std::isfinite(bar.death))
        throw input_error("numeric barcode death must be finite; use \"inf\"");
    }
    bar.multiplicity = row.value("multiplicity", index_t{1});
    bars.push_back(bar);
  }
  return GradedBarcode(std::move(bars));
}

std::string barcode_to_string(const GradedBarcode& b, int indent) {
  return barcode_to_json(b).dump(indent);
}

GradedBarcode barcode_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    // Covers syntax errors and unrepresentable numbers alike; callers rely
    // on every malformed input surfacing through the same error category.
    throw input_error(std::string("barcode JSON parse failure: ") + e.what());
  }
  return barcode_from_json(j);
}

}  // namespace cnodal
