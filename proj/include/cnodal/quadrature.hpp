#pragma once

#include <functional>
#include <vector>

namespace cnodal {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Cached; order >= 1.
const GaussRule& gauss_legendre(int order);

// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
double integrate_1d(const std::function<double(double)>& fn, double a, double b,
                    int panels, int order);

}  // namespace cnodal
