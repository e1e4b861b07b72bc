#include "kernels_impl.hpp"

namespace alc::kernels::omp {

double trapezoid(const TrapezoidArgs& a) {
  const int rows = std::max(a.m0 - 1, 0);
  std::vector<double> part(rows);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < rows; ++r) part[r] = detail::trapezoid_row(a, r);
  double s = 0.0;
  for (double p : part) s += p;
  return s;
}

void lft_rows(const LftArgs& a) {
#pragma omp parallel
  {
    std::vector<int> hull;
#pragma omp for schedule(static)
    for (int r = 0; r < a.rows; ++r) detail::lft_row(a, r, hull);
  }
}

void max_affine(const MaxAffineArgs& a) {
#pragma omp parallel for schedule(static)
  for (int k = 0; k < a.npts; ++k) detail::max_affine_point(a, k);
}

void sinkhorn_half(const SinkhornArgs& a) {
#pragma omp parallel for schedule(static)
  for (int r = 0; r < a.rows; ++r) detail::sinkhorn_row(a, r);
}

void correlation_cost(const double* x, int n, const double* y, int m, int dim, double* cost) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) detail::correlation_row(x, y, m, dim, i, cost);
}

}  // namespace alc::kernels::omp
