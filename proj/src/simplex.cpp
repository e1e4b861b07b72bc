#include "alc/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "alc/common.hpp"

namespace alc {

namespace {

// Tree over n sources, m sinks and one root. Arc ids: real arcs
// k = i * m + j run source i -> sink j; artificial arc K + u joins node u
// with the root (source -> root, root -> sink).
class Solver {
 public:
  Solver(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c,
         double tol)
      : n_(int(a.size())), m_(int(b.size())), c_(c) {
    N_ = n_ + m_ + 1;
    root_ = N_ - 1;
    K_ = std::size_t(n_) * m_;
    double cmax = 0.0;
    for (double x : c) cmax = std::max(cmax, std::abs(x));
    eps_ = tol > 0.0 ? tol : 1e-13 * (1.0 + cmax);
    big_ = 1.0 + 2.0 * cmax * N_;

    flow_.assign(K_ + N_ - 1, 0.0);
    in_tree_.assign(K_ + N_ - 1, 0);
    parent_.assign(N_, -1);
    pred_.assign(N_, -1);
    up_.assign(N_, 0);
    depth_.assign(N_, 0);
    pi_.assign(N_, 0.0);
    kids_.assign(N_, {});
    for (int u = 0; u < n_ + m_; ++u) {
      const std::size_t e = K_ + u;
      parent_[u] = root_;
      pred_[u] = long(e);
      depth_[u] = 1;
      in_tree_[e] = 1;
      kids_[root_].push_back(u);
      if (u < n_) {
        up_[u] = 1;
        flow_[e] = a[u];
        pi_[u] = -big_;
      } else {
        up_[u] = 0;
        flow_[e] = b[u - n_];
        pi_[u] = big_;
      }
    }
    block_ = std::max<std::size_t>(10, std::size_t(std::sqrt(double(K_))));
  }

  void run() {
    std::size_t next = 0;
    for (;;) {
      std::size_t best = K_;
      double best_rc = -eps_;
      std::size_t scanned = 0, in_block = 0;
      while (scanned < K_) {
        const std::size_t e = next;
        next = next + 1 == K_ ? 0 : next + 1;
        ++scanned;
        if (!in_tree_[e]) {
          const double rc = reduced(e);
          if (rc < best_rc) {
            best_rc = rc;
            best = e;
          }
        }
        if (++in_block == block_) {
          if (best != K_) break;
          in_block = 0;
        }
      }
      if (best == K_) break;
      pivot(best);
      ++pivots_;
    }
  }

  SimplexResult result() const {
    SimplexResult r;
    r.pivots = pivots_;
    r.u.assign(pi_.begin(), pi_.begin() + n_);
    r.v.assign(pi_.begin() + n_, pi_.begin() + n_ + m_);
    for (std::size_t e = 0; e < K_; ++e)
      if (flow_[e] > 0.0) {
        r.flow.push_back({int(e / m_), int(e % m_), flow_[e]});
        r.cost += flow_[e] * c_[e];
      }
    return r;
  }

 private:
  int tail(std::size_t e) const { return e < K_ ? int(e / m_) : (e - K_ < std::size_t(n_) ? int(e - K_) : root_); }
  int head(std::size_t e) const { return e < K_ ? n_ + int(e % m_) : (e - K_ < std::size_t(n_) ? root_ : int(e - K_)); }
  double cost(std::size_t e) const { return e < K_ ? c_[e] : big_; }
  double reduced(std::size_t e) const { return cost(e) + pi_[tail(e)] - pi_[head(e)]; }

  void pivot(std::size_t in) {
    const int s = tail(in), t = head(in);
    // Join node.
    int p = s, q = t;
    while (p != q) {
      if (depth_[p] >= depth_[q]) p = parent_[p];
      else q = parent_[q];
    }
    const int join = p;
    // Flow travels join -> s -> t -> join. On the s side arcs pointing up
    // decrease; on the t side arcs pointing down decrease. The last blocking
    // arc in cycle order keeps the tree strongly feasible.
    double delta = kInf;
    int out_node = -1;
    int side = 0;
    for (int u = s; u != join; u = parent_[u]) {
      if (up_[u] && flow_[pred_[u]] < delta) {
        delta = flow_[pred_[u]];
        out_node = u;
        side = 1;
      }
    }
    for (int u = t; u != join; u = parent_[u]) {
      if (!up_[u] && flow_[pred_[u]] <= delta) {
        delta = flow_[pred_[u]];
        out_node = u;
        side = 2;
      }
    }
    if (side == 0) throw NonConvergence("transport problem is unbounded");

    if (delta > 0.0) {
      flow_[in] += delta;
      for (int u = s; u != join; u = parent_[u]) flow_[pred_[u]] += up_[u] ? -delta : delta;
      for (int u = t; u != join; u = parent_[u]) flow_[pred_[u]] += up_[u] ? delta : -delta;
    }
    const std::size_t out = std::size_t(pred_[out_node]);
    flow_[out] = 0.0;
    in_tree_[out] = 0;
    in_tree_[in] = 1;

    // Re-hang the path from the entering endpoint on the cut side up to out_node.
    const int first = side == 1 ? s : t;
    const int other = side == 1 ? t : s;
    unlink(parent_[out_node], out_node);
    int u = first;
    long e_new = long(in);
    int par_new = other;
    bool up_new = side == 1;  // first == s means s -> t points from child to parent
    for (;;) {
      const int old_par = parent_[u];
      const long old_pred = pred_[u];
      const bool old_up = up_[u];
      if (u != out_node) unlink(old_par, u);
      parent_[u] = par_new;
      pred_[u] = e_new;
      up_[u] = up_new;
      kids_[par_new].push_back(u);
      if (u == out_node) break;
      par_new = u;
      e_new = old_pred;
      up_new = !old_up;
      u = old_par;
    }
    refresh(first);
  }

  void unlink(int par, int child) {
    auto& k = kids_[par];
    auto it = std::find(k.begin(), k.end(), child);
    *it = k.back();
    k.pop_back();
  }

  void refresh(int top) {
    stack_.clear();
    stack_.push_back(top);
    while (!stack_.empty()) {
      const int u = stack_.back();
      stack_.pop_back();
      const int p = parent_[u];
      const double ce = cost(std::size_t(pred_[u]));
      pi_[u] = up_[u] ? pi_[p] - ce : pi_[p] + ce;
      depth_[u] = depth_[p] + 1;
      for (int k : kids_[u]) stack_.push_back(k);
    }
  }

  int n_, m_, N_, root_;
  std::size_t K_;
  const std::vector<double>& c_;
  double eps_, big_;
  std::size_t block_;
  long pivots_ = 0;
  std::vector<double> flow_;
  std::vector<unsigned char> in_tree_;
  std::vector<int> parent_;
  std::vector<long> pred_;
  std::vector<unsigned char> up_;
  std::vector<int> depth_;
  std::vector<double> pi_;
  std::vector<std::vector<int>> kids_;
  std::vector<int> stack_;
};

}  // namespace

SimplexResult network_simplex(const std::vector<double>& a, const std::vector<double>& b,
                              const std::vector<double>& cost, double tolerance) {
  if (a.empty() || b.empty()) throw InvalidInput("transport needs nonempty supports");
  if (cost.size() != a.size() * b.size()) throw InvalidInput("cost matrix has the wrong size");
  for (double w : a)
    if (!(w > 0.0)) throw InvalidInput("transport weights must be positive");
  for (double w : b)
    if (!(w > 0.0)) throw InvalidInput("transport weights must be positive");
  Solver s(a, b, cost, tolerance);
  s.run();
  return s.result();
}

}  // namespace alc
