#include "cnodal/coarse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cnodal {

namespace {

void check_non_negative(const GridField& f) {
  for (double v : f.samples)
    if (v < 0) throw input_error("coarse counts expect the non-negative field |s|");
}

index_t rank_from_barcode(const GradedBarcode& b, double s, double t, int degree) {
  index_t count = 0;
  for (const Bar& bar : b.bars()) {
    if (bar.degree != degree) continue;
    if (bar.birth <= s && (bar.is_infinite() || bar.death > t)) count += bar.multiplicity;
  }
  return count;
}

}  // namespace

double default_zero_cut(const GridField& abs_field) {
  // Must dominate the evaluation noise of analytic fields at their true
  // zeros (about |x| * eps for trigonometric samples) yet stay far below any
  // depth worth counting; 2^10 eps * sup covers both by several orders.
  double m = 0;
  for (double v : abs_field.samples) m = std::max(m, std::fabs(v));
  return 1024.0 * std::numeric_limits<double>::epsilon() * m;
}

CoarseCount coarse_m(const GridField& abs_field, double delta, int degree,
                     std::optional<double> eta_override) {
  abs_field.validate();
  check_non_negative(abs_field);
  if (degree < 0) throw input_error("degree must be >= 0");
  if (!(delta > 0) || !std::isfinite(delta)) throw input_error("delta must be positive");
  double eta = eta_override ? *eta_override : default_zero_cut(abs_field);
  if (eta < 0) throw input_error("eta must be >= 0");
  if (delta <= eta)
    throw input_error("delta must exceed the zero cut eta");

  GridField neg = negated(abs_field);
  CoarseCount out;
  out.delta = delta;
  out.eta = eta;
  out.degree = degree;
  if (degree == 0) {
    out.count = rank_from_barcode(sublevel_barcode_degree0(neg), -delta, -eta, 0);
  } else {
    out.count = build_filtration(neg).persistent_rank(-delta, -eta, degree);
  }
  return out;
}

CoarseCount coarse_z(const GridField& abs_field, double delta, int degree,
                     std::optional<double> eta_override) {
  abs_field.validate();
  check_non_negative(abs_field);
  if (degree < 0) throw input_error("degree must be >= 0");
  if (!(delta > 0) || !std::isfinite(delta)) throw input_error("delta must be positive");
  double eta = eta_override ? *eta_override : default_zero_cut(abs_field);
  if (eta < 0) throw input_error("eta must be >= 0");
  if (delta <= 2 * eta)
    throw input_error("delta must exceed twice the zero cut eta");

  CoarseCount out;
  out.delta = delta;
  out.eta = eta;
  out.degree = degree;
  if (degree == 0) {
    out.count = rank_from_barcode(sublevel_barcode_degree0(abs_field), eta, delta - eta, 0);
  } else {
    out.count = build_filtration(abs_field).persistent_rank(eta, delta - eta, degree);
  }
  return out;
}

}  // namespace cnodal
