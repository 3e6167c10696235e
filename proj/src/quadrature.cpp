#include "cnodal/quadrature.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include <boost/math/special_functions/legendre.hpp>

namespace cnodal {

const GaussRule& gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  if (order == 1) {
    rule.nodes = {0.0};
    rule.weights = {2.0};
  } else {
    // positive zeros from boost, mirrored; w = 2 / ((1 - x^2) P_l'(x)^2)
    auto zeros = boost::math::legendre_p_zeros<double>(order);
    for (double z : zeros) {
      double dp = boost::math::legendre_p_prime(order, z);
      double w = 2.0 / ((1.0 - z * z) * dp * dp);
      if (z == 0.0) {
        rule.nodes.push_back(0.0);
        rule.weights.push_back(w);
      } else {
        rule.nodes.push_back(-z);
        rule.weights.push_back(w);
        rule.nodes.push_back(z);
        rule.weights.push_back(w);
      }
    }
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

double integrate_1d(const std::function<double(double)>& fn, double a, double b,
                    int panels, int order) {
  const GaussRule& rule = gauss_legendre(order);
  double h = (b - a) / panels;
  double total = 0;
  for (int p = 0; p < panels; ++p) {
    double lo = a + p * h;
    double mid = lo + h / 2, half = h / 2;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      total += rule.weights[i] * fn(mid + half * rule.nodes[i]);
  }
  return total * ((b - a) / (2.0 * panels));
}

}  // namespace cnodal
