#include <algorithm>
#include <cstring>
#include <random>

#include "alc/common.hpp"
#include "alc/kernels.hpp"
#include "doctest.h"

using namespace alc;
namespace K = alc::kernels;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> uniform(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> U(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = U(rng);
  return v;
}

const int kThreads[] = {1, 2, 3, 8};

}  // namespace

TEST_CASE("trapezoid: serial and parallel agree bitwise") {
  std::mt19937_64 rng(1);
  const int n0 = 97, n1 = 83;
  auto vals = uniform(rng, std::size_t(n0) * n1, -1, 1);
  std::vector<unsigned char> mask(vals.size());
  for (std::size_t k = 0; k < mask.size(); ++k) mask[k] = (rng() % 10) != 0;
  std::vector<int> i0, i1;
  std::vector<double> x0, x1;
  for (int i = 0; i < n0; i += 2) i0.push_back(i), x0.push_back(0.1 * i);
  for (int j = 0; j < n1; ++j) i1.push_back(j), x1.push_back(0.05 * j * j);
  K::TrapezoidArgs a{vals.data(), mask.data(), n1, i0.data(), int(i0.size()),
                     i1.data(), int(i1.size()), x0.data(), x1.data()};
  const double ref = K::serial::trapezoid(a);
  CHECK(std::isfinite(ref));
  for (int t : kThreads) {
    K::set_threads(t);
    CHECK(K::omp::trapezoid(a) == ref);
  }
  // One-dimensional use.
  K::TrapezoidArgs b = a;
  b.m1 = 1;
  b.mask = nullptr;
  const double r1 = K::serial::trapezoid(b);
  K::set_threads(4);
  CHECK(K::omp::trapezoid(b) == r1);
}

TEST_CASE("row Legendre transforms agree bitwise") {
  std::mt19937_64 rng(2);
  const int rows = 37, n = 120, m = 151;
  std::vector<double> a(n), q(m);
  for (int i = 0; i < n; ++i) a[i] = -3 + 6.0 * i / (n - 1);
  for (int j = 0; j < m; ++j) q[j] = -5 + 10.0 * j / (m - 1);
  auto v = uniform(rng, std::size_t(rows) * n, 0, 4);
  for (int r = 0; r < rows; ++r)
    for (int i = 0; i < n; ++i) {
      v[r * n + i] += a[i] * a[i];
      if (r % 5 == 0 && (i < 10 || i > 100)) v[r * n + i] = kInf;
    }
  std::fill(v.begin() + 3 * n, v.begin() + 4 * n, kInf);
  std::vector<double> out_s(std::size_t(rows) * m), out_p(out_s.size());
  std::vector<int> arg_s(out_s.size()), arg_p(out_s.size());
  K::LftArgs L{v.data(), n, 1, rows, n, a.data(), q.data(), m, out_s.data(), m, 1, arg_s.data()};
  K::serial::lft_rows(L);
  CHECK(out_s[3 * m] == -kInf);
  CHECK(arg_s[3 * m] == -1);
  // Oracle: brute force on a few rows.
  for (int r : {0, 1, 7}) {
    for (int j = 0; j < m; ++j) {
      double best = -kInf;
      for (int i = 0; i < n; ++i)
        if (v[r * n + i] < kInf) best = std::max(best, a[i] * q[j] - v[r * n + i]);
      CHECK(out_s[r * m + j] == doctest::Approx(best).epsilon(1e-14));
    }
  }
  for (int t : kThreads) {
    K::set_threads(t);
    L.out = out_p.data();
    L.arg = arg_p.data();
    K::omp::lft_rows(L);
    CHECK(same_bits(out_s, out_p));
    CHECK(arg_s == arg_p);
  }
}

TEST_CASE("max-affine and correlation cost agree bitwise") {
  std::mt19937_64 rng(3);
  const int npts = 2001, nsl = 64, dim = 2;
  auto x = uniform(rng, std::size_t(npts) * dim, -5, 5);
  auto y = uniform(rng, std::size_t(nsl) * dim, -2, 2);
  auto psi = uniform(rng, nsl, -1, 1);
  std::vector<double> vs(npts), vp(npts);
  std::vector<int> as(npts), ap(npts);
  K::serial::max_affine({x.data(), npts, y.data(), psi.data(), nsl, dim, vs.data(), as.data()});
  for (int t : kThreads) {
    K::set_threads(t);
    K::omp::max_affine({x.data(), npts, y.data(), psi.data(), nsl, dim, vp.data(), ap.data()});
    CHECK(same_bits(vs, vp));
    CHECK(as == ap);
  }
  std::vector<double> cs(std::size_t(npts) * nsl), cp(cs.size());
  K::serial::correlation_cost(x.data(), npts, y.data(), nsl, dim, cs.data());
  K::set_threads(5);
  K::omp::correlation_cost(x.data(), npts, y.data(), nsl, dim, cp.data());
  CHECK(same_bits(cs, cp));
  CHECK(cs[nsl + 3] == doctest::Approx(-(x[2] * y[6] + x[3] * y[7])));
}

TEST_CASE("Sinkhorn half step agrees bitwise, rows and columns") {
  std::mt19937_64 rng(4);
  const int n = 300, m = 211;
  auto C = uniform(rng, std::size_t(n) * m, -3, 3);
  auto g = uniform(rng, m, -1, 1);
  auto f = uniform(rng, n, -1, 1);
  std::vector<double> lw(n), lv(m);
  for (auto& w : lw) w = std::log(1.0 / n);
  for (auto& w : lv) w = std::log(1.0 / m);
  std::vector<double> rs(n), rp(n), cs(m), cp(m);
  K::serial::sinkhorn_half({C.data(), m, 1, n, m, g.data(), lw.data(), 0.05, rs.data()});
  K::serial::sinkhorn_half({C.data(), 1, m, m, n, f.data(), lv.data(), 0.05, cs.data()});
  for (int t : kThreads) {
    K::set_threads(t);
    K::omp::sinkhorn_half({C.data(), m, 1, n, m, g.data(), lw.data(), 0.05, rp.data()});
    K::omp::sinkhorn_half({C.data(), 1, m, m, n, f.data(), lv.data(), 0.05, cp.data()});
    CHECK(same_bits(rs, rp));
    CHECK(same_bits(cs, cp));
  }
  // Oracle for row 0: eps (log w - LSE((g - C)/eps)).
  double mx = -kInf, s = 0;
  for (int j = 0; j < m; ++j) mx = std::max(mx, (g[j] - C[j]) / 0.05);
  for (int j = 0; j < m; ++j) s += std::exp((g[j] - C[j]) / 0.05 - mx);
  CHECK(rs[0] == doctest::Approx(0.05 * (lw[0] - mx - std::log(s))).epsilon(1e-12));
}
