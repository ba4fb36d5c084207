#pragma once

#include <Eigen/Core>

#include <span>
#include <variant>

namespace pitwave {

/// Periodic, uniform rectangular mesh. Cell (i, j) has its center at
/// ((i + 1/2) dx, (j + 1/2) dy); x is the fastest-running index.
class Grid2D {
public:
  /// Smallest admissible cell count per direction; the widest advective
  /// stencil reaches three cells to either side of an interface.
  static constexpr int min_cells = 8;

  Grid2D(int nx, int ny, double lx, double ly);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double dx() const { return lx_ / nx_; }
  double dy() const { return ly_ / ny_; }
  int cells() const { return nx_ * ny_; }

  double x_center(int i) const { return (i + 0.5) * dx(); }
  double y_center(int j) const { return (j + 0.5) * dy(); }

  int index(int i, int j) const { return j * nx_ + i; }
  int wrap_x(int i) const { return ((i % nx_) + nx_) % nx_; }
  int wrap_y(int j) const { return ((j % ny_) + ny_) % ny_; }

  /// Index of the cell whose center is nearest to (x, y).
  std::pair<int, int> nearest_cell(double x, double y) const;

  bool operator==(const Grid2D&) const = default;

private:
  int nx_;
  int ny_;
  double lx_;
  double ly_;
};

Grid2D build_grid(int nx, int ny, double lx, double ly);

enum class StateKind { scalar, acoustic };

/// Number of fields carried by a state of the given kind: q, or (u, v, pi).
constexpr int field_count(StateKind kind) { return kind == StateKind::scalar ? 1 : 3; }

/// A prognostic state on a grid. Values are stored flattened, variable-major
/// (q) or (u, v, pi), row-major with the x index fastest within each variable.
class State {
public:
  State(StateKind kind, const Grid2D& grid);
  State(StateKind kind, const Grid2D& grid, Eigen::VectorXd values);

  StateKind kind() const { return kind_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int size() const { return static_cast<int>(values_.size()); }

  std::span<double> field(int k);
  std::span<const double> field(int k) const;

  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }

  bool all_finite() const;

  friend bool operator==(const State& a, const State& b) {
    return a.kind_ == b.kind_ && a.nx_ == b.nx_ && a.ny_ == b.ny_ && a.values_ == b.values_;
  }

private:
  StateKind kind_;
  int nx_;
  int ny_;
  Eigen::VectorXd values_;
};

int state_dimension(StateKind kind, const Grid2D& grid);

Eigen::VectorXd flatten(const State& state);
State unflatten(StateKind kind, const Grid2D& grid, const Eigen::VectorXd& values);

struct ConstantVelocity {
  double u = 1.0;
  double v = 1.0;
};

/// U = rate * (y - yc, -(x - xc)).
struct SolidBodyRotation {
  double rate = 3.14159265358979323846;
  double xc = 0.5;
  double yc = 0.5;
};

using AdvectingVelocity = std::variant<ConstantVelocity, SolidBodyRotation>;

enum class Axis { x, y };

/// Interface between cell (i, j) and its +x neighbour (axis x), or its +y
/// neighbour (axis y).
struct Face {
  Axis axis;
  int i;
  int j;
};

/// Velocity vector at an arbitrary point.
std::pair<double, double> velocity_at(const AdvectingVelocity& vel, double x, double y);

/// Normal velocity component at the midpoint of a cell interface.
double velocity_at_interface(const AdvectingVelocity& vel, const Face& face, const Grid2D& grid);

/// Largest magnitude of a single velocity component over the domain.
double max_velocity_component(const AdvectingVelocity& vel, const Grid2D& grid);

/// Cell-centred samples of 1/2 [cos(pi r) + 1], r = min(1, 4 sqrt(((x-x0)^2 + (y-y0)^2) / 0.5^2)).
Eigen::VectorXd init_cosine_bump(const Grid2D& grid, double x0, double y0);

} // namespace pitwave
