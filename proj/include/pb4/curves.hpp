#pragma once

#include <array>

#include "pb4/quadrilateral.hpp"

namespace pb4 {

/// Cylinder (0, (A+B)/2pi) x S^1 with dt^dtheta, cut by the circle t* = A/2pi.
struct CylinderModel {
  double A = 1, B = 1;

  double t_max() const;
  double t_star() const;
};
void validate(const CylinderModel& m);

/// Areas of {t < t*} and {t > t*} by midpoint quadrature on an n x n grid.
std::pair<double, double> component_areas(const CylinderModel& m, int n = 256);

/// Four cyclically ordered angles; arc k runs from angles[k] to angles[k+1]
/// (the last one wraps through 2pi).
struct CurvePartition {
  std::array<double, 4> angles{0.0, 0.05, 0.1, 6.283185307179586 - 0.05};

  double arc_length(int k) const;
  /// Shortest arc over eight.
  double margin() const;
};
void validate(const CurvePartition& p);
/// The partition rotated by `shift` radians, angles reduced to [0, 2pi).
CurvePartition rotated(const CurvePartition& p, double shift);

/// 2 at q = 1; (1/A^(q-1) + 1/B^(q-1))^(1/q); max(1/A, 1/B) at q = inf.
/// Symmetric; B may be INF, A and B may not both be.
double pb4_curve_formula(double A, double B, ExtendedExponent q);

struct AnnulusMap {
  AreaMap map;
  double inner_radius, curve_radius, outer_radius;
  double area_inner, area_outer;  // measured areas of the two image components
  double curve_radius_error;      // max | |phi(t*, theta)| - curve_radius |
  bool ok;                        // areas within 0.5% and curve on its circle
};
/// (t, theta) -> r = sqrt(2t + eps^2), (r cos theta, r sin theta).
AnnulusMap cylinder_to_annulus(const CylinderModel& m, double eps);

/// Smooth pair on the cylinder grid, supported in t within (0.1, 0.9) t_max.
SmoothPair cylinder_test_pair(const CylinderModel& m, int n = 256);

struct SeparatingSpec {
  CylinderModel model;
  CurvePartition partition;
  ExtendedExponent q = 2.0;
  double eps = 1e-3;  // ramp parameter in t
  double C_A = 0.99, C_B = 0.99;
  int nt = 1024, ntheta = 1024;
  BracketMode mode = BracketMode::Auto;
};

struct CurvePairResult {
  AdmissiblePair pair;
  double norm;
  double formula;  // pb4_curve_formula(C_A, C_B, q), or 0 for the non-separating model
};

/// F = u(t) w(theta), G = g(theta), with u the rectangle ramp straddling t*.
/// X0..Y1 are the neighbourhoods of arcs 1..4 on the curve.
CurvePairResult separating_pair(const SeparatingSpec& s);

struct NonseparatingSpec {
  Grid2D torus;  // x = q (the gamma direction), y = p; periodic in both
  double strip_lo = 0.1, strip_hi = 0.9;
  std::array<double, 4> points{0.2, 0.35, 0.5, 0.65};
  double q0 = 0.5;  // the meridian tau = {x = q0}
};
NonseparatingSpec default_torus_spec(int n = 256);

/// F = f(p), G = g(p) over the whole torus; the stencil bracket vanishes exactly.
CurvePairResult nonseparating_pair(const NonseparatingSpec& s, ExtendedExponent q = 2.0);

}  // namespace pb4
