#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "pb4/error.hpp"

namespace pb4 {

inline constexpr double INF = std::numeric_limits<double>::infinity();

/// Uniform cell-centered grid on a rectangle. Node (i, j) sits at
/// (x_min + (i + 1/2) hx, y_min + (j + 1/2) hy); storage is row-major in j.
struct Grid2D {
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  int nx = 4, ny = 4;
  bool periodic_x = false, periodic_y = false;

  double hx() const { return (x_max - x_min) / nx; }
  double hy() const { return (y_max - y_min) / ny; }
  double x(int i) const { return x_min + (i + 0.5) * hx(); }
  double y(int j) const { return y_min + (j + 0.5) * hy(); }
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  double cell_area() const { return hx() * hy(); }
  double area() const { return (x_max - x_min) * (y_max - y_min); }

  bool operator==(const Grid2D&) const = default;
};

struct Bounds {
  double x_min, x_max, y_min, y_max;
};

Grid2D make_grid(Bounds b, int nx, int ny, bool periodic_x = false, bool periodic_y = false);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid2D& g, double fill = 0.0);
  ScalarField(const Grid2D& g, std::vector<double> values);

  const Grid2D& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
  double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }

 private:
  Grid2D grid_;
  std::vector<double> values_;
};

/// Boolean selection of grid nodes.
struct Mask {
  Grid2D grid;
  std::vector<std::uint8_t> on;

  static Mask all(const Grid2D& g) { return {g, std::vector<std::uint8_t>(g.size(), 1)}; }
  static Mask none(const Grid2D& g) { return {g, std::vector<std::uint8_t>(g.size(), 0)}; }
  static Mask where(const Grid2D& g, const std::function<bool(double, double)>& pred);
  std::size_t count() const;
  Mask complement() const;
};

/// Area form w dx^dy. Constant weights skip the callback.
struct SymplecticDensity {
  std::function<double(double, double)> weight;
  double constant = 1.0;

  static SymplecticDensity uniform(double c = 1.0) { return {nullptr, c}; }
  bool is_constant() const { return !weight; }
  double operator()(double x, double y) const { return weight ? weight(x, y) : constant; }
  /// Weights at every node; throws if any is not strictly positive.
  std::vector<double> on(const Grid2D& g) const;
};

/// q in [1, inf]; INF selects the sup norm.
struct ExtendedExponent {
  double value = 2.0;

  ExtendedExponent() = default;
  ExtendedExponent(double v);  // NOLINT(google-explicit-constructor)
  static ExtendedExponent infinity() { return ExtendedExponent(INF); }
  bool is_inf() const { return value == INF; }
};

ScalarField sample(const Grid2D& g, const std::function<double(double, double)>& f);

/// Up to three (node, coefficient) terms of a first-derivative stencil along one axis.
struct Stencil {
  int n = 0;
  int idx[3] = {0, 0, 0};
  double c[3] = {0, 0, 0};
};
Stencil derivative_stencil(int i, int count, double h, bool periodic);

/// Second-order derivative stencils: central in the interior, periodic wrap
/// where the axis is periodic, one-sided three-point at open edges.
ScalarField d_dx(const ScalarField& f);
ScalarField d_dy(const ScalarField& f);

/// {F,G} = -(F_x G_y - F_y G_x) / w, so {x, y} = -1.
ScalarField poisson_bracket(const ScalarField& F, const ScalarField& G,
                            const SymplecticDensity& w = SymplecticDensity::uniform());

double lq_norm(const ScalarField& f, ExtendedExponent q,
               const SymplecticDensity& w = SymplecticDensity::uniform());
/// Same as lq_norm but only over the masked nodes.
double lq_norm(const ScalarField& f, ExtendedExponent q, const Mask& m,
               const SymplecticDensity& w = SymplecticDensity::uniform());
/// (int |f|^q w) without the final root; q finite.
double lq_power(const ScalarField& f, double q, const Mask& m,
                const SymplecticDensity& w = SymplecticDensity::uniform());

/// Signed midpoint sum of f w over masked cells.
double integrate(const ScalarField& f, const Mask& m,
                 const SymplecticDensity& w = SymplecticDensity::uniform());

double sup_abs(const ScalarField& f);
ScalarField combine(double a, const ScalarField& f, double b, const ScalarField& g);
ScalarField multiply(const ScalarField& f, const ScalarField& g);

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what);

/// Thread cap for row-parallel loops. Reads PB4_THREADS once unless set here.
void set_thread_limit(int n);
int thread_limit();
/// Calls body(j) for j in [0, rows) across row blocks.
void parallel_rows(int rows, const std::function<void(int)>& body);

}  // namespace pb4
