#include "alc/measure.hpp"

#include <algorithm>
#include <numeric>

namespace alc {

double DiscreteMeasure::total() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

Vec DiscreteMeasure::barycenter() const {
  Vec b{0.0, 0.0};
  const double t = total();
  if (t <= 0.0) return b;
  for (std::size_t k = 0; k < size(); ++k)
    for (int d = 0; d < dim; ++d) b[d] += weights[k] * points[k][d];
  for (int d = 0; d < dim; ++d) b[d] /= t;
  return b;
}

double DiscreteMeasure::first_moment() const {
  double s = 0.0;
  for (std::size_t k = 0; k < size(); ++k) s += weights[k] * norm(points[k], dim);
  return s;
}

double DiscreteMeasure::diameter() const {
  double d = 0.0;
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = a + 1; b < size(); ++b) d = std::max(d, dist(points[a], points[b], dim));
  return d;
}

DiscreteMeasure DiscreteMeasure::normalized() const {
  DiscreteMeasure m = *this;
  const double t = total();
  if (t <= 0.0) throw PreconditionError("cannot normalise a measure of zero mass");
  for (double& w : m.weights) w /= t;
  return m;
}

DiscreteMeasure DiscreteMeasure::merged(double tol) const {
  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points[a] < points[b];
  });
  DiscreteMeasure out;
  out.dim = dim;
  out.unit = unit;
  Vec head{};  // first point of the current group
  Vec moment{};
  auto close = [&](const Vec& a, const Vec& b) {
    for (int d = 0; d < dim; ++d)
      if (std::abs(a[d] - b[d]) > tol * (1.0 + std::abs(a[d]))) return false;
    return true;
  };
  auto flush = [&]() {
    if (out.points.empty()) return;
    for (int d = 0; d < dim; ++d) out.points.back()[d] = moment[d] / out.weights.back();
  };
  for (std::size_t k : order) {
    if (weights[k] == 0.0) continue;
    if (!out.points.empty() && close(head, points[k])) {
      out.weights.back() += weights[k];
    } else {
      flush();
      head = points[k];
      moment = {0.0, 0.0};
      out.add(points[k], weights[k]);
    }
    for (int d = 0; d < dim; ++d) moment[d] += weights[k] * points[k][d];
  }
  flush();
  return out;
}

void DiscreteMeasure::validate() const {
  if (dim != 1 && dim != 2) throw InvalidInput("measure dimension must be 1 or 2");
  if (points.size() != weights.size()) throw InvalidInput("measure points and weights differ in size");
  for (std::size_t k = 0; k < size(); ++k) {
    if (!std::isfinite(weights[k]) || weights[k] < 0.0)
      throw InvalidInput("measure weights must be finite and non-negative");
    for (int d = 0; d < dim; ++d)
      if (!std::isfinite(points[k][d])) throw InvalidInput("measure points must be finite");
  }
}

DiscreteMeasure bin_measure(const DiscreteMeasure& m, const Grid& bins) {
  if (bins.dim() != m.dim) throw InvalidInput("bin grid dimension mismatch");
  std::vector<double> mass(bins.size(), 0.0);
  for (std::size_t k = 0; k < m.size(); ++k) {
    const Vec& p = m.points[k];
    if (!bins.contains(p, 1e-12 * bins.diameter()))
      throw PreconditionError("measure point outside the bin grid");
    int i[2] = {0, 0};
    double t[2] = {0.0, 0.0};
    for (int d = 0; d < m.dim; ++d) {
      const Axis& a = bins.axis(d);
      const double s = (p[d] - a.min) / a.spacing();
      i[d] = std::clamp(int(std::floor(s)), 0, a.count - 2);
      t[d] = std::clamp(s - i[d], 0.0, 1.0);
    }
    const double w = m.weights[k];
    if (m.dim == 1) {
      mass[i[0]] += w * (1.0 - t[0]);
      mass[i[0] + 1] += w * t[0];
    } else {
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          mass[bins.index(i[0] + a, i[1] + b)] +=
              w * (a ? t[0] : 1.0 - t[0]) * (b ? t[1] : 1.0 - t[1]);
    }
  }
  DiscreteMeasure out;
  out.dim = m.dim;
  for (std::size_t k = 0; k < mass.size(); ++k)
    if (mass[k] > 0.0) out.add(bins.point(k), mass[k]);
  return out;
}

}  // namespace alc
