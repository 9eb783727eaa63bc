#pragma once

#include "pb4/field.hpp"

namespace pb4 {

/// Tiling of a rectangle by (nearly) square cells with concentric inner
/// rectangles Q3 in Q2 in Q1 in Q. margin_k is the distance from the cell
/// boundary to Q_k, so margin1 < margin2 < margin3.
struct CellDecomposition {
  Bounds support;
  int cells_x = 0, cells_y = 0;
  double dx = 0, dy = 0;  // cell sides after snapping
  double eps_cell = 0;
  double margin1 = 0, margin2 = 0, margin3 = 0;

  double delta() const { return dx > dy ? dx : dy; }
  double volume() const { return (support.x_max - support.x_min) * (support.y_max - support.y_min); }
  /// Vol(Q \ Q3) / Vol(Q), identical for every cell.
  double band_fraction() const { return 1.0 - (1.0 - 2 * margin3 / dx) * (1.0 - 2 * margin3 / dy); }
};

/// delta is shrunk so whole cells tile the support; margins keep the
/// band fraction below eps_cell.
CellDecomposition decompose(Bounds support, double delta, double eps_cell);

/// F~ = phi F + (1 - phi) F(x0) cell by cell, phi = 0 on Q2 and 1 off Q1,
/// x0 the node nearest the cell center.
ScalarField flatten_F(const ScalarField& F, const CellDecomposition& cells);
/// G~ = psi G, psi = 1 on Q3 and 0 off Q2 (kept 2.5 nodes inside Q2).
ScalarField localize_G(const ScalarField& G, const CellDecomposition& cells);

/// True when every node with G~ != 0 has four stencil neighbours where F~
/// takes exactly its own value.
bool locally_constant_where_supported(const ScalarField& Ft, const ScalarField& Gt);

/// Sampled modulus of continuity: max |F(p) - F(p + v)| over node offsets v
/// with |v| <= r along 16 directions and 4 radii, every stride-th node.
/// Never exceeds the exact sampled modulus.
double modulus_of_continuity(const ScalarField& F, double r, int stride = 2);

struct FlexReport {
  double sup_dist_F = 0, lq_dist_G = 0, max_bracket = 0;
  double delta = 0, eps_cell = 0, q = 2;
  double modulus_F = 0;      // omega_F(delta sqrt 2)
  double lq_bound_G = 0;     // ||G||_inf (Vol eps_cell)^(1/q)
  double bracket_input = 0;  // ||{F,G}||_inf before the construction
  double volume = 0;
  bool locally_constant = false;
};

/// One step of the commuting approximation over the whole grid domain. F and
/// G must vanish on the outer ring of cells.
FlexReport flex_report(const ScalarField& F, const ScalarField& G, double delta, double eps_cell,
                       ExtendedExponent q);

/// Two overlapping Gaussians (sigma 0.03, centers 0.03 apart) on [0, 0.2]^2,
/// cut off smoothly so both vanish outside [0.05, 0.15]^2.
std::pair<ScalarField, ScalarField> overlapping_bumps(int n = 1320);

}  // namespace pb4
