#include <omp.h>

#include "kernels_impl.hpp"

namespace alc::kernels {

void lft_line(const double* v, std::ptrdiff_t step, int n, const double* a, const double* q, int m,
              double* out, std::ptrdiff_t out_step, int* arg, std::vector<int>& hull) {
  // Lower convex hull of the finite points (a_i, v_i); points on a chord are
  // dropped so the leftmost of a collinear run survives as the tie winner.
  hull.clear();
  for (int i = 0; i < n; ++i) {
    const double vi = v[i * step];
    if (!(vi < std::numeric_limits<double>::infinity())) continue;
    while (hull.size() >= 2) {
      const int p = hull[hull.size() - 2];
      const int c = hull.back();
      const double lhs = (v[c * step] - v[p * step]) * (a[i] - a[p]);
      const double rhs = (vi - v[p * step]) * (a[c] - a[p]);
      if (lhs >= rhs) hull.pop_back();
      else break;
    }
    hull.push_back(i);
  }
  if (hull.empty()) {
    for (int j = 0; j < m; ++j) {
      out[j * out_step] = -std::numeric_limits<double>::infinity();
      if (arg) arg[j * out_step] = -1;
    }
    return;
  }
  std::size_t p = 0;
  for (int j = 0; j < m; ++j) {
    const double y = q[j];
    double cur = a[hull[p]] * y - v[hull[p] * step];
    while (p + 1 < hull.size()) {
      const double nxt = a[hull[p + 1]] * y - v[hull[p + 1] * step];
      if (nxt > cur) {
        ++p;
        cur = nxt;
      } else {
        break;
      }
    }
    out[j * out_step] = cur;
    if (arg) arg[j * out_step] = hull[p];
  }
}

int set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
  return omp_get_max_threads();
}

namespace serial {

double trapezoid(const TrapezoidArgs& a) {
  std::vector<double> part(std::max(a.m0 - 1, 0));
  for (int r = 0; r + 1 < a.m0; ++r) part[r] = detail::trapezoid_row(a, r);
  double s = 0.0;
  for (double p : part) s += p;
  return s;
}

void lft_rows(const LftArgs& a) {
  std::vector<int> hull;
  for (int r = 0; r < a.rows; ++r) detail::lft_row(a, r, hull);
}

void max_affine(const MaxAffineArgs& a) {
  for (int k = 0; k < a.npts; ++k) detail::max_affine_point(a, k);
}

void sinkhorn_half(const SinkhornArgs& a) {
  for (int r = 0; r < a.rows; ++r) detail::sinkhorn_row(a, r);
}

void correlation_cost(const double* x, int n, const double* y, int m, int dim, double* cost) {
  for (int i = 0; i < n; ++i) detail::correlation_row(x, y, m, dim, i, cost);
}

}  // namespace serial
}  // namespace alc::kernels
