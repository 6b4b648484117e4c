#include "specid/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace specid {

namespace {

double cross(cdouble o, cdouble a, cdouble b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) -
         (a.imag() - o.imag()) * (b.real() - o.real());
}

double segment_distance(cdouble z, cdouble a, cdouble b) {
  const cdouble ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(z - a);
  double t = ((z - a) * std::conj(ab)).real() / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(z - (a + t * ab));
}

void set_segment(HullRegion& h, cdouble a, cdouble b) {
  h.degenerate = true;
  h.area = 0.0;
  h.vertices = (a == b) ? ComplexList{a} : ComplexList{a, b};
  h.centroid = 0.5 * (a + b);
  h.second_moment = (a * a + a * b + b * b) / 3.0;
}

}  // namespace

HullRegion convex_hull(const ComplexList& points, bool mirror) {
  ComplexList pts = points;
  if (mirror) {
    for (const auto& z : points) pts.push_back(std::conj(z));
  }
  HullRegion h;
  if (pts.empty()) {
    h.degenerate = true;
    return h;
  }
  std::sort(pts.begin(), pts.end(), complex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  if (pts.size() < 3) {
    set_segment(h, pts.front(), pts.back());
    return h;
  }

  ComplexList hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);

  // Moments about the vertex mean, shifted back afterwards.
  cdouble shift = 0.0;
  for (const auto& v : hull) shift += v;
  shift /= static_cast<double>(hull.size());

  double area2 = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  double extent = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const cdouble p = hull[i] - shift;
    const cdouble q = hull[(i + 1) % hull.size()] - shift;
    const double x0 = p.real(), y0 = p.imag(), x1 = q.real(), y1 = q.imag();
    const double c = x0 * y1 - x1 * y0;
    area2 += c;
    sx += (x0 + x1) * c;
    sy += (y0 + y1) * c;
    sxx += (x0 * x0 + x0 * x1 + x1 * x1) * c;
    syy += (y0 * y0 + y0 * y1 + y1 * y1) * c;
    sxy += (x0 * y1 + 2.0 * x0 * y0 + 2.0 * x1 * y1 + x1 * y0) * c;
    extent = std::max(extent, std::abs(p));
  }
  const double area = 0.5 * area2;
  if (hull.size() < 3 || !(area > 1e-12 * extent * extent)) {
    // Collinear input: keep the two extreme points.
    cdouble a = pts.front(), b = pts.back();
    double best = -1.0;
    for (const auto& u : hull) {
      for (const auto& v : hull) {
        if (std::abs(u - v) > best) {
          best = std::abs(u - v);
          a = u;
          b = v;
        }
      }
    }
    if (complex_less(b, a)) std::swap(a, b);
    set_segment(h, a, b);
    return h;
  }
  const cdouble mean_w(sx / (6.0 * area), sy / (6.0 * area));
  const double ixx = sxx / 12.0, iyy = syy / 12.0, ixy = sxy / 24.0;
  const cdouble mean_w2((ixx - iyy) / area, 2.0 * ixy / area);

  h.vertices = std::move(hull);
  h.area = area;
  h.centroid = mean_w + shift;
  h.second_moment = mean_w2 + 2.0 * shift * mean_w + shift * shift;
  h.degenerate = false;
  return h;
}

double HullRegion::distance(cdouble z) const {
  if (vertices.empty()) return std::numeric_limits<double>::infinity();
  if (vertices.size() == 1) return std::abs(z - vertices.front());
  if (degenerate || vertices.size() == 2) {
    return segment_distance(z, vertices.front(), vertices.back());
  }
  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const cdouble a = vertices[i];
    const cdouble b = vertices[(i + 1) % vertices.size()];
    if (cross(a, b, z) < 0.0) inside = false;
    best = std::min(best, segment_distance(z, a, b));
  }
  return inside ? 0.0 : best;
}

bool HullRegion::contains(cdouble z, double tolerance) const {
  return distance(z) <= tolerance;
}

}  // namespace specid
