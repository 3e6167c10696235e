#include "cnodal/checks.hpp"

#include <algorithm>
#include <cmath>

namespace cnodal {

namespace {

double clamp_delta(double d) { return d < 0 ? 0.0 : d; }

CountWindow widen(const CountWindow& z, double lo_shift, double hi_shift) {
  return CountWindow{z.lower + lo_shift, z.upper + hi_shift};
}

}  // namespace

index_t InequalityRow::rhs_total() const {
  index_t total = 0;
  for (index_t t : rhs_terms) total += t;
  return total;
}

SubadditivityReport subadditivity_check(const GradedBarcode& u, const GradedBarcode& v,
                                        const GradedBarcode& w, double delta,
                                        const std::vector<CountWindow>& windows,
                                        double slack) {
  if (!(delta > 0) || !std::isfinite(delta)) throw input_error("delta must be positive");
  if (slack < 0) throw input_error("slack must be >= 0");
  double rhs_delta = clamp_delta(delta - slack);

  SubadditivityReport rep;
  rep.main.label = "count subadditivity";
  rep.main.lhs = n_delta(v, 2 * delta);
  rep.main.rhs_terms = {n_delta(u, rhs_delta), n_delta(w, rhs_delta)};
  rep.main.holds = rep.main.lhs <= rep.main.rhs_total();

  rep.all_hold = rep.main.holds;
  for (const CountWindow& z : windows) {
    WindowedRow row;
    row.z = z;
    row.lhs = n_delta_window(v, 2 * delta, z);
    row.rhs_u = n_delta_window(u, rhs_delta, widen(z, -delta - slack, delta + slack));
    row.rhs_w = n_delta_window(w, rhs_delta, widen(z, -2 * delta - slack, slack));
    row.holds = row.lhs <= row.rhs_u + row.rhs_w;
    rep.all_hold = rep.all_hold && row.holds;
    rep.windowed.push_back(row);
  }
  return rep;
}

MvTwoSetReport mv_two_set_check(const GridField& field, std::size_t split_axis,
                                std::int64_t split_index, double delta,
                                const std::vector<CountWindow>& windows, double slack) {
  field.validate();
  if (split_axis >= field.ndim()) throw input_error("split axis out of range");
  if (field.topology[split_axis] != AxisTopology::box)
    throw input_error("two-set split requires box topology on the split axis");
  if (split_index < 1 || split_index > field.dims[split_axis] - 2)
    throw input_error("split index must leave at least two layers on each side");
  if (!(delta > 0) || !std::isfinite(delta)) throw input_error("delta must be positive");

  GradedBarcode whole = sublevel_barcode(field);
  GradedBarcode b1 = sublevel_barcode(slab(field, split_axis, 0, split_index));
  GradedBarcode b2 =
      sublevel_barcode(slab(field, split_axis, split_index, field.dims[split_axis] - 1));
  GradedBarcode cap = sublevel_barcode(slice(field, split_axis, split_index));

  double rhs_delta = clamp_delta(delta - slack);

  MvTwoSetReport rep;
  rep.main.label = "two-set covering bound";
  rep.main.lhs = n_delta(whole, 2 * delta);
  rep.main.rhs_terms = {n_delta(b1, rhs_delta), n_delta(b2, rhs_delta),
                        n_delta(cap, rhs_delta)};
  rep.main.holds = rep.main.lhs <= rep.main.rhs_total();

  rep.degree0.label = "degree-0 covering bound";
  rep.degree0.lhs = n_delta(whole, delta, 0);
  rep.degree0.rhs_terms = {n_delta(b1, rhs_delta, 0), n_delta(b2, rhs_delta, 0)};
  rep.degree0.holds = rep.degree0.lhs <= rep.degree0.rhs_total();

  // exactness of ... -> H(A1) + H(A2) -> H(A1 u A2) -> H(A1 n A2) -> ...
  // at the middle slot feeds the windowed subadditivity transfer
  GradedBarcode u;
  for (const Bar& bar : b1.bars()) u.push_bar(bar);
  for (const Bar& bar : b2.bars()) u.push_bar(bar);
  SubadditivityReport sub = subadditivity_check(u, whole, cap, delta, windows, slack);
  rep.windowed = sub.windowed;

  rep.all_hold = rep.main.holds && rep.degree0.holds && sub.all_hold;
  return rep;
}

MinProductReport min_product_check(const GridField& f, const GridField& g,
                                   const std::vector<double>& c_sweep,
                                   double zero_tolerance) {
  f.validate();
  g.validate();
  if (f.dims != g.dims || f.topology != g.topology)
    throw input_error("fields must live on identical grids");
  for (double v : f.samples)
    if (v < 0) throw input_error("min/product transfer expects non-negative fields");
  for (double v : g.samples)
    if (v < 0) throw input_error("min/product transfer expects non-negative fields");
  if (zero_tolerance < 0) throw input_error("zero_tolerance must be >= 0");

  const double sqrt2 = std::sqrt(2.0);
  GridField vmin = pointwise_min(f, g);
  GridField umax = pointwise_max(f, g);
  GridField w = pointwise_hypot(f, g);
  GridField h = pointwise_product(f, g);

  MinProductReport rep;
  for (std::size_t i = 0; i < umax.samples.size(); ++i) {
    rep.K = std::max(rep.K, umax.samples[i]);
    if (umax.samples[i] > 0)
      rep.sandwich_max_ratio = std::max(rep.sandwich_max_ratio, w.samples[i] / umax.samples[i]);
  }
  if (rep.K == 0) throw input_error("both fields vanish identically; K would be 0");

  GradedBarcode b_v = sublevel_barcode(vmin);
  GradedBarcode b_u = sublevel_barcode(umax);
  GradedBarcode b_w = sublevel_barcode(w);
  GradedBarcode b_h = sublevel_barcode(h);
  GradedBarcode b_f = sublevel_barcode(f);
  GradedBarcode b_g = sublevel_barcode(g);

  rep.all_hold = true;
  for (double c : c_sweep) {
    if (!(c > 0) || !std::isfinite(c)) throw input_error("thresholds must be positive");

    InequalityRow product;
    product.label = "product-to-min transfer";
    product.lhs = n_delta_zero(b_h, c, zero_tolerance * rep.K);
    product.rhs_terms = {n_delta_zero(b_v, c / rep.K, zero_tolerance)};
    product.holds = product.lhs <= product.rhs_total();
    rep.rows.push_back(product);

    InequalityRow inter1;
    inter1.label = "max-to-hypot transfer";
    inter1.lhs = n_delta_zero(b_u, c, zero_tolerance);
    inter1.rhs_terms = {n_delta_zero(b_w, c / sqrt2, zero_tolerance * sqrt2)};
    inter1.holds = inter1.lhs <= inter1.rhs_total();
    rep.rows.push_back(inter1);

    InequalityRow inter2;
    inter2.label = "hypot-to-max transfer";
    inter2.lhs = n_delta_zero(b_w, c, zero_tolerance * sqrt2);
    inter2.rhs_terms = {n_delta_zero(b_u, c / sqrt2, zero_tolerance)};
    inter2.holds = inter2.lhs <= inter2.rhs_total();
    rep.rows.push_back(inter2);

    InequalityRow improved;
    improved.label = "improved min split";
    improved.lhs = n_delta_zero(b_v, 2 * c, zero_tolerance);
    improved.rhs_terms = {n_delta_zero(b_w, c / sqrt2, zero_tolerance * sqrt2),
                          n_delta(b_f, c), n_delta(b_g, c)};
    improved.holds = improved.lhs <= improved.rhs_total();
    rep.rows.push_back(improved);

    rep.all_hold = rep.all_hold && product.holds && inter1.holds && inter2.holds &&
                   improved.holds;
  }
  return rep;
}

}  // namespace cnodal
