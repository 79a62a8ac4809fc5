#pragma once

// Planar polygons: hull, clipping, and the two planar stability inequalities
//   P(E)/|E|^{1/2} - P(cov E)/|cov E|^{1/2} >= sqrt(pi) |cov E \ E| / (|cov E| |E|)^{1/2}
//   P(E) - P(F) >= |E delta F| / (2 sqrt 2),  |E| = pi, F = theta cov(E).

#include <Eigen/Dense>

#include <vector>

namespace nsph {

/// Simple polygon, vertices as columns, counterclockwise.
struct Polygon {
  Eigen::Matrix2Xd v;

  Eigen::Index size() const { return v.cols(); }
  Eigen::Vector2d operator[](Eigen::Index i) const { return v.col((i % size() + size()) % size()); }
};

/// Validates (>= 3 vertices, no edge crossings, positive signed area) and
/// returns the polygon. Clockwise input is reversed.
Polygon make_polygon(const Eigen::Matrix2Xd& vertices);
bool is_simple(const Polygon& P);
bool is_convex(const Polygon& P);  // strictly or with collinear runs

double signed_area(const Eigen::Matrix2Xd& v);
double area(const Polygon& P);
double polygon_perimeter(const Polygon& P);
Eigen::Vector2d centroid(const Polygon& P);
bool contains(const Polygon& P, const Eigen::Vector2d& x);
/// Euclidean distance from x to the boundary.
double boundary_distance(const Polygon& P, const Eigen::Vector2d& x);

Polygon translate(const Polygon& P, const Eigen::Vector2d& z);
Polygon scale(const Polygon& P, double s);

/// Monotone chain. A convex input is returned unchanged.
Polygon convex_hull(const Polygon& P);

/// Area of P intersected with a convex polygon C (Sutherland-Hodgman).
double intersection_area(const Polygon& P, const Polygon& C);
/// |E delta F| for convex F.
double symdiff_2d(const Polygon& E, const Polygon& F);

/// Deterministic interior point: the sample of a regular grid over the bounding
/// box with the largest distance to the boundary.
Eigen::Vector2d interior_point(const Polygon& P, int samples = 64);

struct PlaneReport {
  double area_E = 0, perimeter_E = 0, area_hull = 0, perimeter_hull = 0;
  double hull_minus_E = 0;  // |cov E \ E|
  // first inequality, scale invariant
  double lhs1 = 0, rhs1 = 0, slack1 = 0;
  // second inequality, after scaling to |E| = pi
  double theta = 1, area_hull_n = 0, perimeter_En = 0, perimeter_F = 0, symdiff_EF = 0;
  double lhs2 = 0, rhs2 = 0, slack2 = 0;
  bool small_hull = true;  // |cov E| <= 2 pi after normalization
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();  // interior point moved to 0
  double F_outside_hull = 0;  // |F \ cov E|
  double nested_defect = 0;   // | |cov E \ F| - (|cov E| - |F|) |
  bool convex_input = false;
};

PlaneReport appendix_check(const Polygon& E);

}  // namespace nsph
