#include "cnodal/barcode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cnodal {

namespace {

void check_bar_fields(int degree, double birth, double death, index_t multiplicity) {
  if (std::isnan(birth) || std::isnan(death))
    throw input_error("bar endpoints must not be NaN");
  if (!std::isfinite(birth))
    throw input_error("bar birth must be finite");
  if (death < birth)
    throw input_error("bar death " + std::to_string(death) + " precedes birth " +
                      std::to_string(birth));
  if (degree < 0) throw input_error("bar degree must be non-negative");
  if (multiplicity < 1) throw input_error("bar multiplicity must be >= 1");
}

void check_delta(double delta) {
  if (std::isnan(delta) || delta < 0) throw input_error("delta must be >= 0");
}

bool bar_before(const Bar& a, const Bar& b) {
  if (a.degree != b.degree) return a.degree < b.degree;
  if (a.birth != b.birth) return a.birth < b.birth;
  return a.death < b.death;
}

}  // namespace

Bar make_bar(int degree, double birth, double death, index_t multiplicity) {
  check_bar_fields(degree, birth, death, multiplicity);
  if (death == birth) throw input_error("bar must have positive length");
  return Bar{degree, birth, death, multiplicity};
}

GradedBarcode::GradedBarcode(std::vector<Bar> bars) {
  for (const Bar& b : bars) {
    check_bar_fields(b.degree, b.birth, b.death, b.multiplicity);
    if (b.death == b.birth) continue;  // degenerate bars are dropped
    bars_.push_back(b);
  }
  normalize();
}

void GradedBarcode::push_bar(int degree, double birth, double death, index_t multiplicity) {
  check_bar_fields(degree, birth, death, multiplicity);
  if (death == birth) return;
  bars_.push_back(Bar{degree, birth, death, multiplicity});
  normalize();
}

void GradedBarcode::normalize() {
  std::sort(bars_.begin(), bars_.end(), bar_before);
  std::vector<Bar> merged;
  merged.reserve(bars_.size());
  for (const Bar& b : bars_) {
    if (!merged.empty() && merged.back().degree == b.degree &&
        merged.back().birth == b.birth && merged.back().death == b.death) {
      merged.back().multiplicity += b.multiplicity;
    } else {
      merged.push_back(b);
    }
  }
  bars_.swap(merged);
  max_degree_ = -1;
  for (const Bar& b : bars_) max_degree_ = std::max(max_degree_, b.degree);
}

index_t GradedBarcode::size() const {
  index_t total = 0;
  for (const Bar& b : bars_) total += b.multiplicity;
  return total;
}

std::vector<Bar> GradedBarcode::bars_in_degree(int degree) const {
  std::vector<Bar> out;
  for (const Bar& b : bars_)
    if (b.degree == degree) out.push_back(b);
  return out;
}

index_t n_delta(const GradedBarcode& b, double delta, std::optional<int> degree) {
  check_delta(delta);
  index_t count = 0;
  for (const Bar& bar : b.bars()) {
    if (degree && bar.degree != *degree) continue;
    if (bar.is_infinite() || bar.length() > delta) count += bar.multiplicity;
  }
  return count;
}

index_t n_delta_window(const GradedBarcode& b, double delta, const CountWindow& window,
                       std::optional<int> degree) {
  check_delta(delta);
  if (std::isnan(window.lower) || std::isnan(window.upper) || window.lower > window.upper)
    throw input_error("count window must satisfy lower <= upper");
  index_t count = 0;
  for (const Bar& bar : b.bars()) {
    if (degree && bar.degree != *degree) continue;
    if (!window.contains(bar.birth)) continue;
    if (bar.is_infinite() || bar.length() > delta) count += bar.multiplicity;
  }
  return count;
}

index_t n_delta_zero(const GradedBarcode& b, double delta, double zero_tolerance,
                     std::optional<int> degree) {
  if (std::isnan(zero_tolerance) || zero_tolerance < 0)
    throw input_error("zero_tolerance must be >= 0");
  return n_delta_window(b, delta, CountWindow{-zero_tolerance, zero_tolerance}, degree);
}

double barcode_total_norm(const GradedBarcode& b, double global_max) {
  if (std::isnan(global_max)) throw input_error("global_max must not be NaN");
  double total = 0;
  for (const Bar& bar : b.bars()) {
    if (bar.is_infinite()) {
      if (bar.birth > global_max)
        throw input_error("infinite bar born after global_max");
      total += static_cast<double>(bar.multiplicity) * (global_max - bar.birth);
    } else {
      total += static_cast<double>(bar.multiplicity) * bar.length();
    }
  }
  return total;
}

double barcode_p_norm(const GradedBarcode& b, double p, std::optional<double> global_max) {
  if (std::isnan(p) || !std::isfinite(p) || p < 1)
    throw input_error("p must be finite and >= 1");
  double sum = 0;
  for (const Bar& bar : b.bars()) {
    double len;
    if (bar.is_infinite()) {
      if (!global_max)
        throw input_error("barcode has infinite bars; global_max is required");
      if (bar.birth > *global_max)
        throw input_error("infinite bar born after global_max");
      len = *global_max - bar.birth;
    } else {
      len = bar.length();
    }
    sum += static_cast<double>(bar.multiplicity) * std::pow(len, p);
  }
  return std::pow(sum, 1.0 / p);
}

GradedBarcode kunneth_product(const GradedBarcode& b1, const GradedBarcode& b2) {
  GradedBarcode out;
  for (const Bar& x : b1.bars()) {
    for (const Bar& y : b2.bars()) {
      index_t mult = x.multiplicity * y.multiplicity;
      double a = x.birth, bb = x.death;
      double c = y.birth, d = y.death;
      double first_birth = a + c;
      double first_death = std::min(a + d, bb + c);  // inf-aware
      if (first_death > first_birth)
        out.push_bar(x.degree + y.degree, first_birth, first_death, mult);
      if (!x.is_infinite() && !y.is_infinite()) {
        double second_birth = std::max(a + d, bb + c);
        double second_death = bb + d;
        if (second_death > second_birth)
          out.push_bar(x.degree + y.degree + 1, second_birth, second_death, mult);
      }
    }
  }
  return out;
}

GradedBarcode dualize(const GradedBarcode& b, int manifold_dim) {
  if (manifold_dim < 0) throw input_error("manifold dimension must be >= 0");
  GradedBarcode out;
  for (const Bar& bar : b.bars()) {
    if (bar.degree > manifold_dim)
      throw input_error("cannot dualize a bar of degree above the manifold dimension");
    if (bar.is_infinite()) {
      out.push_bar(manifold_dim - bar.degree, -bar.birth, infinite_death, bar.multiplicity);
    } else {
      if (bar.degree > manifold_dim - 1)
        throw input_error("cannot dualize a finite bar of top degree");
      out.push_bar(manifold_dim - 1 - bar.degree, -bar.death, -bar.birth, bar.multiplicity);
    }
  }
  return out;
}

}  // namespace cnodal
