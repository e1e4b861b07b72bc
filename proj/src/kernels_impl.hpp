#pragma once

// Per-item bodies shared by the serial and OpenMP kernel variants.

#include <algorithm>
#include <cmath>
#include <limits>

#include "alc/kernels.hpp"

namespace alc::kernels::detail {

inline double trapezoid_row(const TrapezoidArgs& a, int r) {
  const int i = a.idx0[r];
  const int ip = a.idx0[r + 1];
  const double w0 = a.x0[r + 1] - a.x0[r];
  auto ok = [&](int i0, int i1) {
    return a.mask == nullptr || a.mask[std::size_t(i0) * a.n1 + i1] != 0;
  };
  auto v = [&](int i0, int i1) { return a.values[std::size_t(i0) * a.n1 + i1]; };
  if (a.m1 == 1) {
    const int c = a.idx1[0];
    if (!ok(i, c) || !ok(ip, c)) return 0.0;
    return 0.5 * w0 * (v(i, c) + v(ip, c));
  }
  double s = 0.0;
  for (int c = 0; c + 1 < a.m1; ++c) {
    const int j = a.idx1[c];
    const int jp = a.idx1[c + 1];
    if (!ok(i, j) || !ok(i, jp) || !ok(ip, j) || !ok(ip, jp)) continue;
    const double w1 = a.x1[c + 1] - a.x1[c];
    s += 0.25 * w0 * w1 * (v(i, j) + v(i, jp) + v(ip, j) + v(ip, jp));
  }
  return s;
}

inline void lft_row(const LftArgs& a, int r, std::vector<int>& hull) {
  const int* argp = a.arg ? a.arg + r * a.out_stride : nullptr;
  lft_line(a.values + r * a.in_stride, a.in_step, a.n, a.a, a.q, a.m, a.out + r * a.out_stride,
           a.out_step, const_cast<int*>(argp), hull);
}

inline void max_affine_point(const MaxAffineArgs& a, int k) {
  double best = -std::numeric_limits<double>::infinity();
  int arg = -1;
  const double* x = a.x + std::size_t(k) * a.dim;
  for (int j = 0; j < a.nsl; ++j) {
    const double* y = a.y + std::size_t(j) * a.dim;
    double s = x[0] * y[0];
    if (a.dim == 2) s += x[1] * y[1];
    s -= a.psi[j];
    if (s > best) {
      best = s;
      arg = j;
    }
  }
  a.val[k] = best;
  if (a.arg) a.arg[k] = arg;
}

inline void sinkhorn_row(const SinkhornArgs& a, int r) {
  const double* c = a.cost + r * a.stride;
  double mx = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < a.cols; ++k) mx = std::max(mx, (a.pot[k] - c[k * a.step]) / a.eps);
  double s = 0.0;
  for (int k = 0; k < a.cols; ++k) s += std::exp((a.pot[k] - c[k * a.step]) / a.eps - mx);
  a.out[r] = a.eps * (a.logw[r] - mx - std::log(s));
}

inline void correlation_row(const double* x, const double* y, int m, int dim, int i, double* cost) {
  const double* xi = x + std::size_t(i) * dim;
  for (int j = 0; j < m; ++j) {
    const double* yj = y + std::size_t(j) * dim;
    double s = xi[0] * yj[0];
    if (dim == 2) s += xi[1] * yj[1];
    cost[std::size_t(i) * m + j] = -s;
  }
}

}  // namespace alc::kernels::detail
