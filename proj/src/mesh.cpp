#include "alc/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace alc {

PsiCalculus::PsiCalculus(double alpha) : alpha_(alpha) {}

double PsiCalculus::psi(double t) const { return std::pow(1.0 - alpha_ * t, 1.0 / alpha_); }
double PsiCalculus::density(double t) const {
  return std::pow(1.0 - alpha_ * t, (1.0 - alpha_) / alpha_);
}
double PsiCalculus::H(double t) const {
  return std::pow(1.0 - alpha_ * t, 1.0 / alpha_ + 1.0) / (1.0 + alpha_);
}
double PsiCalculus::dH(double t) const { return -psi(t); }
double PsiCalculus::d3H(double t) const {
  const double a = alpha_;
  return -(1.0 - a) * std::pow(1.0 - a * t, (1.0 - 2.0 * a) / a);
}
double PsiCalculus::d4H(double t) const {
  const double a = alpha_;
  return (1.0 - a) * (1.0 - 2.0 * a) * std::pow(1.0 - a * t, (1.0 - 3.0 * a) / a);
}

namespace {
// Below this relative spread divided differences fall back to series forms.
constexpr double kSpread = 1e-3;
}  // namespace

double PsiCalculus::dd1(double p, double q) const {
  const double m = 0.5 * (p + q), d = q - p;
  if (std::abs(alpha_ * d) < kSpread * (1.0 - alpha_ * m)) return dH(m) + d3H(m) * d * d / 24.0;
  return (H(q) - H(p)) / d;
}

double PsiCalculus::segment_density(double a, double b, double len) const {
  const double m = 0.5 * (a + b), d = b - a;
  if (std::abs(alpha_ * d) < kSpread * (1.0 - alpha_ * m))
    return len * (density(m) + d4H(m) * d * d / 24.0);
  return len * (dH(b) - dH(a)) / d;
}

double PsiCalculus::segment_psi(double a, double b, double len) const { return -len * dd1(a, b); }

double PsiCalculus::triangle_density(double a, double b, double c, double area) const {
  double v[3] = {a, b, c};
  std::sort(v, v + 3);
  const double m = (v[0] + v[1] + v[2]) / 3.0;
  if (std::abs(alpha_ * (v[2] - v[0])) < kSpread * (1.0 - alpha_ * m)) {
    // Degree-5 seven-point rule.
    static const double w[3] = {0.225, 0.132394152788506, 0.125939180544827};
    static const double p1[2] = {0.059715871789770, 0.470142064105115};
    static const double p2[2] = {0.797426985353087, 0.101286507323456};
    double s = w[0] * density(m);
    for (int r = 0; r < 3; ++r) {
      const double l1 = p1[1] * (v[0] + v[1] + v[2]) + (p1[0] - p1[1]) * v[r];
      const double l2 = p2[1] * (v[0] + v[1] + v[2]) + (p2[0] - p2[1]) * v[r];
      s += w[1] * density(l1) + w[2] * density(l2);
    }
    return area * s;
  }
  return 2.0 * area * (dd1(v[1], v[2]) - dd1(v[0], v[1])) / (v[2] - v[0]);
}

namespace {

PlMesh mesh_1d(const GridFunction& phi, const PsiCalculus& pc, double kink_tol) {
  PlMesh out;
  const Grid& G = phi.grid();
  const auto box = phi.finite_box();
  const int lo = box[0][0], hi = box[0][1];
  const double h = G.spacing(0);
  const double tol = kink_tol < 0.0 ? 10.0 * h : kink_tol;
  out.touches_grid_boundary = lo == 0 || hi == G.count(0) - 1;

  const int nc = hi - lo;
  std::vector<double> s(nc), m(nc);
  for (int c = 0; c < nc; ++c) {
    const double a = phi.at(lo + c), b = phi.at(lo + c + 1);
    s[c] = (b - a) / h;
    m[c] = pc.segment_density(a, b, h);
  }
  for (int c = 0; c < nc; ++c) {
    const bool inner = c > 0 && c + 1 < nc;
    bool kink = inner && s[c + 1] - s[c - 1] > tol;
    if (kink && c >= 2) kink = std::abs(s[c - 1] - s[c - 2]) <= tol;
    if (kink && c + 2 < nc) kink = std::abs(s[c + 2] - s[c + 1]) <= tol;
    if (!kink) {
      out.pieces.push_back({{s[c], 0.0}, m[c], h});
      continue;
    }
    double wl = h * (s[c + 1] - s[c]) / (s[c + 1] - s[c - 1]);
    // Kinks sitting on a node leave rounding dust in the other half.
    if (wl < 1e-9 * h) wl = 0.0;
    if (wl > (1.0 - 1e-9) * h) wl = h;
    const double wr = h - wl;
    if (wl > 0.0) out.pieces.push_back({{s[c - 1], 0.0}, m[c] * wl / h, wl});
    if (wr > 0.0) out.pieces.push_back({{s[c + 1], 0.0}, m[c] * wr / h, wr});
  }
  out.facets.push_back({{-1.0, 0.0}, 1.0, pc.psi(phi.at(lo))});
  out.facets.push_back({{1.0, 0.0}, 1.0, pc.psi(phi.at(hi))});
  return out;
}

PlMesh mesh_2d(const GridFunction& phi, const PsiCalculus& pc) {
  PlMesh out;
  const Grid& G = phi.grid();
  const int n0 = G.count(0), n1 = G.count(1);
  const double h0 = G.spacing(0), h1 = G.spacing(1);
  const double area = 0.5 * h0 * h1;
  auto fin = [&](int i, int j) { return phi.finite(G.index(i, j)); };

  for (std::size_t k = 0; k < G.size(); ++k) {
    auto mi = G.multi(k);
    if (phi.finite(k) && (mi[0] == 0 || mi[1] == 0 || mi[0] == n0 - 1 || mi[1] == n1 - 1))
      out.touches_grid_boundary = true;
  }

  // Two triangles per cell; slots filled in parallel, compacted in order.
  const std::size_t ncell = std::size_t(n0 - 1) * (n1 - 1);
  std::vector<Piece> slot(2 * ncell);
  std::vector<unsigned char> used(2 * ncell, 0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n0 - 1; ++i)
    for (int j = 0; j < n1 - 1; ++j) {
      const std::size_t c = std::size_t(i) * (n1 - 1) + j;
      const double a = phi.at(i, j), b = phi.at(i + 1, j), cc = phi.at(i, j + 1),
                   d = phi.at(i + 1, j + 1);
      if (fin(i, j) && fin(i + 1, j) && fin(i + 1, j + 1)) {
        slot[2 * c] = {{(b - a) / h0, (d - b) / h1}, pc.triangle_density(a, b, d, area), area};
        used[2 * c] = 1;
      }
      if (fin(i, j) && fin(i + 1, j + 1) && fin(i, j + 1)) {
        slot[2 * c + 1] = {{(d - cc) / h0, (cc - a) / h1}, pc.triangle_density(a, d, cc, area), area};
        used[2 * c + 1] = 1;
      }
    }
  for (std::size_t t = 0; t < slot.size(); ++t)
    if (used[t]) out.pieces.push_back(slot[t]);

  auto tri = [&](int i, int j, int which) -> bool {
    if (i < 0 || j < 0 || i >= n0 - 1 || j >= n1 - 1) return false;
    return used[2 * (std::size_t(i) * (n1 - 1) + j) + which] != 0;
  };
  // Axis-0 edges (i,j)-(i+1,j): lower triangle of cell (i,j), upper of (i,j-1).
  for (int i = 0; i + 1 < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      const bool up = tri(i, j, 0), down = tri(i, j - 1, 1);
      if (up == down) continue;
      out.facets.push_back(
          {{0.0, up ? -1.0 : 1.0}, h0, pc.segment_psi(phi.at(i, j), phi.at(i + 1, j), h0)});
    }
  // Axis-1 edges (i,j)-(i,j+1): upper triangle of cell (i,j), lower of (i-1,j).
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j + 1 < n1; ++j) {
      const bool right = tri(i, j, 1), left = tri(i - 1, j, 0);
      if (right == left) continue;
      out.facets.push_back(
          {{right ? -1.0 : 1.0, 0.0}, h1, pc.segment_psi(phi.at(i, j), phi.at(i, j + 1), h1)});
    }
  // Diagonals.
  const double dl = std::hypot(h0, h1);
  for (int i = 0; i + 1 < n0; ++i)
    for (int j = 0; j + 1 < n1; ++j) {
      const bool lower = tri(i, j, 0), upper = tri(i, j, 1);
      if (lower == upper) continue;
      const Vec nrm = lower ? Vec{-h1 / dl, h0 / dl} : Vec{h1 / dl, -h0 / dl};
      out.facets.push_back({nrm, dl, pc.segment_psi(phi.at(i, j), phi.at(i + 1, j + 1), dl)});
    }
  return out;
}

}  // namespace

PlMesh pl_mesh(const GridFunction& base, double alpha, double kink_tol) {
  PsiCalculus pc(alpha);
  return base.dim() == 1 ? mesh_1d(base, pc, kink_tol) : mesh_2d(base, pc);
}

}  // namespace alc
