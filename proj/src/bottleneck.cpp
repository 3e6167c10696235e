#include "cnodal/bottleneck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <vector>

namespace cnodal {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct Pt {
  double birth;
  double death;  // inf for essential bars
};

// max-metric cost between two bars; +inf when exactly one death is infinite.
double pair_cost(const Pt& a, const Pt& b) {
  bool ai = a.death == inf, bi = b.death == inf;
  if (ai != bi) return inf;
  double dd = ai ? 0.0 : std::fabs(a.death - b.death);
  return std::max(std::fabs(a.birth - b.birth), dd);
}

// cost of erasing a bar against the diagonal; essential bars cannot be erased.
double diag_cost(const Pt& a) {
  return a.death == inf ? inf : (a.death - a.birth) / 2.0;
}

// Decides whether an eps-matching exists via Hopcroft-Karp on the augmented
// bipartite graph: left = A bars + one diagonal slot per B bar, right = B bars
// + one diagonal slot per A bar. Diagonal slots pair freely with each other.
class Feasibility {
 public:
  Feasibility(const std::vector<Pt>& a, const std::vector<Pt>& b) : a_(a), b_(b) {}

  bool feasible(double eps) {
    eps_ = eps;
    int nl = static_cast<int>(a_.size() + b_.size());
    int nr = nl;
    match_l_.assign(nl, -1);
    match_r_.assign(nr, -1);
    int matched = 0;
    while (true) {
      if (!bfs()) break;
      for (int u = 0; u < nl; ++u)
        if (match_l_[u] < 0 && dfs(u)) ++matched;
    }
    return matched == nl;
  }

 private:
  static constexpr int unreached = std::numeric_limits<int>::max();

  bool left_is_bar(int u) const { return u < static_cast<int>(a_.size()); }

  // right node ids: [0, nB) are B bars, [nB, nB+nA) are diagonal slots
  bool edge_to_right_bar(int u, int j) const {
    if (left_is_bar(u)) return pair_cost(a_[u], b_[j]) <= eps_;
    // diagonal slot of B bar j' only connects to its own bar
    return (u - static_cast<int>(a_.size())) == j && diag_cost(b_[j]) <= eps_;
  }

  template <typename Visit>
  void for_each_neighbor(int u, Visit visit) const {
    int na = static_cast<int>(a_.size());
    int nb = static_cast<int>(b_.size());
    if (left_is_bar(u)) {
      for (int j = 0; j < nb; ++j)
        if (pair_cost(a_[u], b_[j]) <= eps_ && visit(j)) return;
      if (diag_cost(a_[u]) <= eps_ && visit(nb + u)) return;
    } else {
      int j = u - na;
      if (diag_cost(b_[j]) <= eps_ && visit(j)) return;
      for (int i = 0; i < na; ++i)  // diagonal slots pair freely
        if (visit(nb + i)) return;
    }
  }

  bool bfs() {
    int nl = static_cast<int>(a_.size() + b_.size());
    dist_.assign(nl, unreached);
    std::queue<int> q;
    for (int u = 0; u < nl; ++u)
      if (match_l_[u] < 0) {
        dist_[u] = 0;
        q.push(u);
      }
    bool found_free = false;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for_each_neighbor(u, [&](int v) {
        int w = match_r_[v];
        if (w < 0) {
          found_free = true;
        } else if (dist_[w] == unreached) {
          dist_[w] = dist_[u] + 1;
          q.push(w);
        }
        return false;
      });
    }
    return found_free;
  }

  bool dfs(int u) {
    bool augmented = false;
    for_each_neighbor(u, [&](int v) {
      int w = match_r_[v];
      if (w < 0 || (dist_[w] == dist_[u] + 1 && dfs(w))) {
        match_l_[u] = v;
        match_r_[v] = u;
        augmented = true;
        return true;
      }
      return false;
    });
    if (!augmented) dist_[u] = unreached;
    return augmented;
  }

  const std::vector<Pt>& a_;
  const std::vector<Pt>& b_;
  double eps_ = 0;
  std::vector<int> match_l_, match_r_, dist_;
};

std::vector<Pt> expand_degree(const GradedBarcode& b, int degree) {
  std::vector<Pt> out;
  for (const Bar& bar : b.bars()) {
    if (bar.degree != degree) continue;
    for (index_t m = 0; m < bar.multiplicity; ++m) out.push_back(Pt{bar.birth, bar.death});
  }
  return out;
}

index_t essential_count(const std::vector<Pt>& pts) {
  index_t n = 0;
  for (const Pt& p : pts)
    if (p.death == inf) ++n;
  return n;
}

}  // namespace

double bottleneck_distance_in_degree(const GradedBarcode& b1, const GradedBarcode& b2,
                                     int degree) {
  std::vector<Pt> a = expand_degree(b1, degree);
  std::vector<Pt> b = expand_degree(b2, degree);
  if (a.empty() && b.empty()) return 0.0;
  if (essential_count(a) != essential_count(b)) return inf;

  // every achievable optimum is an endpoint difference or a half-length
  std::set<double> cand = {0.0};
  for (const Pt& x : a) {
    for (const Pt& y : b) {
      double c = pair_cost(x, y);
      if (std::isfinite(c)) cand.insert(c);
    }
    double d = diag_cost(x);
    if (std::isfinite(d)) cand.insert(d);
  }
  for (const Pt& y : b) {
    double d = diag_cost(y);
    if (std::isfinite(d)) cand.insert(d);
  }

  std::vector<double> cs(cand.begin(), cand.end());
  Feasibility f(a, b);
  // invariant: feasible at cs[hi]; search the smallest feasible candidate
  std::size_t lo = 0, hi = cs.size() - 1;
  if (!f.feasible(cs[hi])) return inf;  // cannot happen with equal essential counts
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (f.feasible(cs[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return cs[lo];
}

double bottleneck_distance(const GradedBarcode& b1, const GradedBarcode& b2) {
  int top = std::max(b1.max_degree(), b2.max_degree());
  double best = 0.0;
  for (int d = 0; d <= top; ++d)
    best = std::max(best, bottleneck_distance_in_degree(b1, b2, d));
  return best;
}

}  // namespace cnodal
