#include "nearsphere/planar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace nsph {

namespace {

constexpr double kPiPlane = 3.14159265358979323846;

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }
double orient(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  return cross(b - a, c - a);
}

bool on_segment(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& p) {
  return p.x() >= std::min(a.x(), b.x()) && p.x() <= std::max(a.x(), b.x()) && p.y() >= std::min(a.y(), b.y()) &&
         p.y() <= std::max(a.y(), b.y());
}

bool segments_touch(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c,
                    const Eigen::Vector2d& d) {
  const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (a + t * ab - p).norm();
}

}  // namespace

double signed_area(const Eigen::Matrix2Xd& v) {
  double s = 0.0;
  const Eigen::Index n = v.cols();
  for (Eigen::Index i = 0; i < n; ++i) s += cross(v.col(i), v.col((i + 1) % n));
  return 0.5 * s;
}

bool is_simple(const Polygon& P) {
  const Eigen::Index n = P.size();
  if (n < 3) return false;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) {
        // neighbours share exactly one vertex; reject folding back onto each other
        const Eigen::Index k = (i == 0 && j == n - 1) ? i : j;  // shared vertex
        const Eigen::Vector2d s = P[k], a = P[k - 1], b = P[k + 1];
        if (orient(a, s, b) == 0 && (a - s).dot(b - s) > 0) return false;
        continue;
      }
      if (segments_touch(P[i], P[i + 1], P[j], P[j + 1])) return false;
    }
  return true;
}

Polygon make_polygon(const Eigen::Matrix2Xd& vertices) {
  Polygon P{vertices};
  if (P.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
  if (!P.v.allFinite()) throw std::invalid_argument("polygon has non-finite vertices");
  const double A = signed_area(P.v);
  if (A == 0.0) throw std::invalid_argument("degenerate polygon (zero area)");
  if (A < 0) P.v = P.v.rowwise().reverse().eval();
  if (!is_simple(P)) throw std::invalid_argument("polygon is not simple");
  return P;
}

bool is_convex(const Polygon& P) {
  for (Eigen::Index i = 0; i < P.size(); ++i)
    if (orient(P[i - 1], P[i], P[i + 1]) < 0) return false;
  return true;
}

double area(const Polygon& P) { return signed_area(P.v); }

double polygon_perimeter(const Polygon& P) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < P.size(); ++i) s += (P[i + 1] - P[i]).norm();
  return s;
}

Eigen::Vector2d centroid(const Polygon& P) {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (Eigen::Index i = 0; i < P.size(); ++i) c += (P[i] + P[i + 1]) * cross(P[i], P[i + 1]);
  return c / (6.0 * area(P));
}

bool contains(const Polygon& P, const Eigen::Vector2d& x) {
  bool in = false;
  for (Eigen::Index i = 0; i < P.size(); ++i) {
    const Eigen::Vector2d a = P[i], b = P[i + 1];
    if ((a.y() > x.y()) != (b.y() > x.y())) {
      const double xi = a.x() + (x.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (x.x() < xi) in = !in;
    }
  }
  return in;
}

double boundary_distance(const Polygon& P, const Eigen::Vector2d& x) {
  double d = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < P.size(); ++i) d = std::min(d, point_segment_distance(x, P[i], P[i + 1]));
  return d;
}

Polygon translate(const Polygon& P, const Eigen::Vector2d& z) { return {P.v.colwise() + z}; }
Polygon scale(const Polygon& P, double s) { return {s * P.v}; }

Polygon convex_hull(const Polygon& P) {
  if (P.size() >= 3 && is_convex(P) && signed_area(P.v) > 0) return P;
  std::vector<Eigen::Vector2d> pts(P.size());
  for (Eigen::Index i = 0; i < P.size(); ++i) pts[i] = P.v.col(i);
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw std::invalid_argument("convex_hull: fewer than 3 distinct points");
  std::vector<Eigen::Vector2d> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && orient(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && orient(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  if (h.size() < 3) throw std::invalid_argument("convex_hull: collinear input");
  Polygon out;
  out.v.resize(2, Eigen::Index(h.size()));
  for (std::size_t i = 0; i < h.size(); ++i) out.v.col(Eigen::Index(i)) = h[i];
  return out;
}

double intersection_area(const Polygon& P, const Polygon& C) {
  std::vector<Eigen::Vector2d> poly(P.size());
  for (Eigen::Index i = 0; i < P.size(); ++i) poly[i] = P.v.col(i);
  for (Eigen::Index e = 0; e < C.size() && !poly.empty(); ++e) {
    const Eigen::Vector2d a = C[e], b = C[e + 1];
    auto side = [&](const Eigen::Vector2d& p) { return orient(a, b, p); };
    std::vector<Eigen::Vector2d> out;
    out.reserve(poly.size() + 4);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Eigen::Vector2d cur = poly[i], prev = poly[(i + poly.size() - 1) % poly.size()];
      const double sc = side(cur), sp = side(prev);
      if (sc >= 0) {
        if (sp < 0) out.push_back(prev + (cur - prev) * (sp / (sp - sc)));
        out.push_back(cur);
      } else if (sp >= 0) {
        out.push_back(prev + (cur - prev) * (sp / (sp - sc)));
      }
    }
    poly.swap(out);
  }
  if (poly.size() < 3) return 0.0;
  Eigen::Matrix2Xd m(2, Eigen::Index(poly.size()));
  for (std::size_t i = 0; i < poly.size(); ++i) m.col(Eigen::Index(i)) = poly[i];
  return std::max(0.0, signed_area(m));
}

double symdiff_2d(const Polygon& E, const Polygon& F) {
  if (!is_convex(F)) throw std::invalid_argument("symdiff_2d: F must be convex");
  if (E.v.cols() == F.v.cols() && E.v == F.v) return 0.0;
  return std::max(0.0, area(E) + area(F) - 2.0 * intersection_area(E, F));
}

Eigen::Vector2d interior_point(const Polygon& P, int samples) {
  const Eigen::Vector2d lo = P.v.rowwise().minCoeff(), hi = P.v.rowwise().maxCoeff();
  for (int m = samples; m <= 16 * samples; m *= 2) {
    double best = -1.0;
    Eigen::Vector2d arg = Eigen::Vector2d::Zero();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const Eigen::Vector2d x(lo.x() + (i + 0.5) * (hi.x() - lo.x()) / m, lo.y() + (j + 0.5) * (hi.y() - lo.y()) / m);
        if (!contains(P, x)) continue;
        const double d = boundary_distance(P, x);
        if (d > best) best = d, arg = x;
      }
    if (best > 0) return arg;
  }
  throw std::invalid_argument("interior_point: no interior sample found");
}

PlaneReport appendix_check(const Polygon& E) {
  PlaneReport r;
  const Polygon H = convex_hull(E);
  r.convex_input = H.v.cols() == E.v.cols() && H.v == E.v;
  r.area_E = area(E);
  r.perimeter_E = polygon_perimeter(E);
  r.area_hull = area(H);
  r.perimeter_hull = polygon_perimeter(H);
  r.hull_minus_E = r.convex_input ? 0.0 : r.area_hull - r.area_E;
  r.lhs1 = r.perimeter_E / std::sqrt(r.area_E) - r.perimeter_hull / std::sqrt(r.area_hull);
  r.rhs1 = std::sqrt(kPiPlane) * r.hull_minus_E / std::sqrt(r.area_hull * r.area_E);
  r.slack1 = r.lhs1 - r.rhs1;

  // |E| = pi, interior point at the origin
  const double s = std::sqrt(kPiPlane / r.area_E);
  r.origin = interior_point(E);
  const Polygon En = scale(translate(E, -r.origin), s);
  const Polygon Hn = r.convex_input ? En : scale(translate(H, -r.origin), s);
  const double AEn = area(En);
  r.area_hull_n = area(Hn);
  r.theta = r.convex_input ? 1.0 : std::sqrt(AEn / r.area_hull_n);
  const Polygon F = r.convex_input ? Hn : scale(Hn, r.theta);
  r.small_hull = r.area_hull_n <= 2 * kPiPlane;
  r.perimeter_En = polygon_perimeter(En);
  r.perimeter_F = polygon_perimeter(F);
  r.symdiff_EF = symdiff_2d(En, F);
  r.lhs2 = r.perimeter_En - r.perimeter_F;
  r.rhs2 = r.symdiff_EF / (2 * std::sqrt(2.0));
  r.slack2 = r.lhs2 - r.rhs2;

  const double FinH = intersection_area(F, Hn);
  r.F_outside_hull = std::max(0.0, area(F) - FinH);
  r.nested_defect = std::abs((r.area_hull_n - FinH) - (r.area_hull_n - area(F)));
  return r;
}

}  // namespace nsph
