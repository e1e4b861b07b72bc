#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "alc/kernels.hpp"

namespace K = alc::kernels;

namespace {

std::vector<double> uniform(std::size_t n, double lo, double hi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = U(rng);
  return v;
}

// Rows of a square grid transformed onto a dual grid twice as fine.
template <void (*Fn)(const K::LftArgs&)>
void BM_lft_rows(benchmark::State& st) {
  const int n = int(st.range(0)), m = 2 * n;
  std::vector<double> a(n), q(m);
  for (int i = 0; i < n; ++i) a[i] = -1 + 2.0 * i / (n - 1);
  for (int j = 0; j < m; ++j) q[j] = -3 + 6.0 * j / (m - 1);
  auto v = uniform(std::size_t(n) * n, 0, 1, 1);
  for (int r = 0; r < n; ++r)
    for (int i = 0; i < n; ++i) v[std::size_t(r) * n + i] += a[i] * a[i];
  std::vector<double> out(std::size_t(n) * m);
  std::vector<int> arg(out.size());
  K::LftArgs L{v.data(), n, 1, n, n, a.data(), q.data(), m, out.data(), m, 1, arg.data()};
  for (auto _ : st) {
    Fn(L);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * std::int64_t(n) * (n + m));
}

template <void (*Fn)(const K::MaxAffineArgs&)>
void BM_max_affine(benchmark::State& st) {
  const int npts = int(st.range(0)), nsl = 256;
  auto x = uniform(std::size_t(npts) * 2, -5, 5, 2);
  auto y = uniform(std::size_t(nsl) * 2, -2, 2, 3);
  auto psi = uniform(nsl, -1, 1, 4);
  std::vector<double> val(npts);
  std::vector<int> arg(npts);
  for (auto _ : st) {
    Fn({x.data(), npts, y.data(), psi.data(), nsl, 2, val.data(), arg.data()});
    benchmark::DoNotOptimize(val.data());
  }
  st.SetItemsProcessed(st.iterations() * std::int64_t(npts) * nsl);
}

template <void (*Fn)(const K::SinkhornArgs&)>
void BM_sinkhorn_half(benchmark::State& st) {
  const int n = int(st.range(0)), m = n;
  auto C = uniform(std::size_t(n) * m, -3, 3, 5);
  auto g = uniform(m, -1, 1, 6);
  std::vector<double> lw(n, -std::log(double(n))), out(n);
  for (auto _ : st) {
    Fn({C.data(), m, 1, n, m, g.data(), lw.data(), 0.01, out.data()});
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * std::int64_t(n) * m);
}

template <double (*Fn)(const K::TrapezoidArgs&)>
void BM_trapezoid(benchmark::State& st) {
  const int n = int(st.range(0));
  auto v = uniform(std::size_t(n) * n, 0, 1, 7);
  std::vector<int> idx(n);
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) idx[i] = i, x[i] = double(i) / (n - 1);
  K::TrapezoidArgs a{v.data(), nullptr, n, idx.data(), n, idx.data(), n, x.data(), x.data()};
  for (auto _ : st) benchmark::DoNotOptimize(Fn(a));
  st.SetItemsProcessed(st.iterations() * std::int64_t(n) * n);
}

}  // namespace

BENCHMARK(BM_lft_rows<K::serial::lft_rows>)->Name("lft_rows/serial")->Arg(256)->Arg(1024);
BENCHMARK(BM_lft_rows<K::omp::lft_rows>)->Name("lft_rows/omp")->Arg(256)->Arg(1024)->UseRealTime();
BENCHMARK(BM_max_affine<K::serial::max_affine>)->Name("max_affine/serial")->Arg(1 << 14);
BENCHMARK(BM_max_affine<K::omp::max_affine>)->Name("max_affine/omp")->Arg(1 << 14)->UseRealTime();
BENCHMARK(BM_sinkhorn_half<K::serial::sinkhorn_half>)->Name("sinkhorn_half/serial")->Arg(1024);
BENCHMARK(BM_sinkhorn_half<K::omp::sinkhorn_half>)->Name("sinkhorn_half/omp")->Arg(1024)->UseRealTime();
BENCHMARK(BM_trapezoid<K::serial::trapezoid>)->Name("trapezoid/serial")->Arg(1024);
BENCHMARK(BM_trapezoid<K::omp::trapezoid>)->Name("trapezoid/omp")->Arg(1024)->UseRealTime();

BENCHMARK_MAIN();
