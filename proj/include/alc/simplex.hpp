#pragma once

#include <vector>

namespace alc {

// Balanced uncapacitated transportation problem
//   min sum c_ij x_ij  s.t.  sum_j x_ij = a_i,  sum_i x_ij = b_j,  x >= 0
// solved by the primal network simplex method on a strongly feasible
// spanning tree (big-M artificial root, block pricing). All weights must be
// positive and the totals equal up to rounding.
struct SimplexResult {
  struct Entry {
    int i;
    int j;
    double x;
  };
  std::vector<Entry> flow;  // positive entries, sorted by (i, j)
  std::vector<double> u;    // row potentials
  std::vector<double> v;    // column potentials; c_ij >= v_j - u_i up to `tolerance`
  double cost = 0.0;        // sum c_ij x_ij
  long pivots = 0;
};

// cost is row-major n x m. `tolerance` is the reduced-cost threshold below
// which an arc is considered to price out.
SimplexResult network_simplex(const std::vector<double>& a, const std::vector<double>& b,
                              const std::vector<double>& cost, double tolerance = 0.0);

}  // namespace alc
