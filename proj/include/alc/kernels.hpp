#pragma once

#include <cstddef>
#include <vector>

// Data-parallel inner loops. Every kernel exists twice with identical
// signatures: `serial` is the reference, `omp` splits the outer loop across
// threads. Both write each output slot from exactly one iteration and reduce
// through per-row partials summed in fixed order, so results are bitwise
// equal for any thread count.

namespace alc::kernels {

// Trapezoid rule over a tensor subset of a row-major n0 x n1 array.
// idx0/idx1 select nodes per axis (increasing); x0/x1 are their coordinates.
// A cell contributes only when every corner has mask != 0 (mask may be null).
// m1 == 1 means a one-dimensional integral along axis 0.
struct TrapezoidArgs {
  const double* values;
  const unsigned char* mask;
  int n1;
  const int* idx0;
  int m0;
  const int* idx1;
  int m1;
  const double* x0;
  const double* x1;
};

// Discrete Legendre transform of many rows sharing abscissae a (length n,
// increasing): out[r][j] = max_i a[i] q[j] - v[r][i] over finite v, with the
// smallest maximising i stored in arg. Queries q (length m) must increase.
// Rows that are entirely +inf yield -inf and arg -1.
struct LftArgs {
  const double* values;  // rows x n, stride `in_stride` between row starts, `in_step` within
  std::ptrdiff_t in_stride;
  std::ptrdiff_t in_step;
  int rows;
  int n;
  const double* a;
  const double* q;
  int m;
  double* out;  // rows x m with out_stride / out_step
  std::ptrdiff_t out_stride;
  std::ptrdiff_t out_step;
  int* arg;  // same layout as out; may be null
};

// Max-affine evaluation: val[k] = max_j <x_k, y_j> - psi_j, arg[k] = first maximiser.
struct MaxAffineArgs {
  const double* x;  // npts x dim
  int npts;
  const double* y;  // nsl x dim
  const double* psi;
  int nsl;
  int dim;
  double* val;
  int* arg;
};

// Log-domain Sinkhorn half step: out[r] = eps * (log w[r] - LSE_c (pot[c] - C[r][c]) / eps)
// where C is given row-major with row stride `stride` and column step `step`.
struct SinkhornArgs {
  const double* cost;
  std::ptrdiff_t stride;
  std::ptrdiff_t step;
  int rows;
  int cols;
  const double* pot;
  const double* logw;
  double eps;
  double* out;
};

namespace serial {
double trapezoid(const TrapezoidArgs& a);
void lft_rows(const LftArgs& a);
void max_affine(const MaxAffineArgs& a);
void sinkhorn_half(const SinkhornArgs& a);
void correlation_cost(const double* x, int n, const double* y, int m, int dim, double* cost);
}  // namespace serial

namespace omp {
double trapezoid(const TrapezoidArgs& a);
void lft_rows(const LftArgs& a);
void max_affine(const MaxAffineArgs& a);
void sinkhorn_half(const SinkhornArgs& a);
void correlation_cost(const double* x, int n, const double* y, int m, int dim, double* cost);
}  // namespace omp

// Kernels used by the library.
namespace active = omp;

// One-dimensional transform of a single sequence, used by both variants.
void lft_line(const double* v, std::ptrdiff_t step, int n, const double* a, const double* q, int m,
              double* out, std::ptrdiff_t out_step, int* arg, std::vector<int>& hull);

int set_threads(int n);  // returns the thread count in effect

}  // namespace alc::kernels
