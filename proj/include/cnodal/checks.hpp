#pragma once

#include <vector>

#include "cnodal/cubical.hpp"

namespace cnodal {

// One verified counting inequality: lhs <= sum of rhs terms.
struct InequalityRow {
  std::string label;
  index_t lhs = 0;
  std::vector<index_t> rhs_terms;
  bool holds = false;

  index_t rhs_total() const;
};

// Windowed refinement row: lhs over window z, rhs over shifted windows.
struct WindowedRow {
  CountWindow z;
  index_t lhs = 0;
  index_t rhs_u = 0;
  index_t rhs_w = 0;
  bool holds = false;
};

// Count subadditivity along an exact sequence U -> V -> W:
//   N_{2 delta}(V) <= N_delta(U) + N_delta(W)
// plus, per requested window Z,
//   N_{2 delta}(V, Z) <= N_delta(U, Z + [-delta, delta]) + N_delta(W, Z + [-2 delta, 0]).
// rhs counts use delta - slack and rhs windows grow by slack to absorb
// floating-point ties; slack = 0 gives the literal inequalities.
struct SubadditivityReport {
  InequalityRow main;
  std::vector<WindowedRow> windowed;
  bool all_hold = false;
};

SubadditivityReport subadditivity_check(const GradedBarcode& u, const GradedBarcode& v,
                                        const GradedBarcode& w, double delta,
                                        const std::vector<CountWindow>& windows = {},
                                        double slack = 0.0);

// Splits the grid along one box axis into closed halves A1, A2 overlapping in
// one slice, and checks the two-set covering bound
//   N_{2 delta}(whole) <= N_delta(A1) + N_delta(A2) + N_delta(A1 cap A2)
// together with the degree-0 sharpening N_{0,delta}(whole) <= N_{0,delta}(A1)
// + N_{0,delta}(A2) and the windowed refinement on the induced sequence.
struct MvTwoSetReport {
  InequalityRow main;
  InequalityRow degree0;
  std::vector<WindowedRow> windowed;
  bool all_hold = false;
};

MvTwoSetReport mv_two_set_check(const GridField& field, std::size_t split_axis,
                                std::int64_t split_index, double delta,
                                const std::vector<CountWindow>& windows = {},
                                double slack = 0.0);

// Checks the zero-born count transfer between combinations of two
// non-negative fields on one grid, per threshold c in c_sweep:
//   product rule:   N0_c(f*g)      <= N0_{c/K}(min(f,g)),   K = max max(f,g)
//   sqrt interleave: N0_c(max(f,g)) <= N0_{c/sqrt2}(hypot),  both directions
//   improved split: N0_{2c}(min)   <= N0_{c/sqrt2}(hypot) + N_c(f) + N_c(g)
// Bars count as zero-born when birth <= zero_tolerance; the rhs tolerance is
// scaled by the same factor as its delta. K == 0 (both fields identically
// zero) is rejected.
struct MinProductReport {
  double K = 0;
  double sandwich_max_ratio = 0;  // max over the grid of hypot / max, 0 where both vanish
  std::vector<InequalityRow> rows;
  bool all_hold = false;
};

MinProductReport min_product_check(const GridField& f, const GridField& g,
                                   const std::vector<double>& c_sweep,
                                   double zero_tolerance);

}  // namespace cnodal
