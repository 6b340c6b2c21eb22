#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <sstream>
#include <string>

#include "tvplan/errors.hpp"

namespace tvplan {

using Index3 = std::array<int, 3>;

/// Axis-aligned voxel lattice in patient space. Axes follow the LPS
/// convention (x: right->left, y: anterior->posterior, z: inferior->superior);
/// rotated direction matrices are not representable.
class Grid {
 public:
  Grid(std::array<int, 3> dims, std::array<double, 3> spacing,
       std::array<double, 3> origin = {0.0, 0.0, 0.0})
      : dims_(dims), spacing_(spacing), origin_(origin) {
    for (int a = 0; a < 3; ++a) {
      if (dims_[a] < 1) {
        throw GridError("grid dims must be >= 1, got " + std::to_string(dims_[a]) +
                        " on axis " + std::to_string(a));
      }
      if (!(spacing_[a] > 0.0)) {
        throw GridError("grid spacing must be > 0, got " + std::to_string(spacing_[a]) +
                        " on axis " + std::to_string(a));
      }
    }
  }

  static constexpr const char* axis_convention() { return "LPS-axis-aligned"; }

  const std::array<int, 3>& dims() const { return dims_; }
  const std::array<double, 3>& spacing() const { return spacing_; }
  const std::array<double, 3>& origin() const { return origin_; }

  int nx() const { return dims_[0]; }
  int ny() const { return dims_[1]; }
  int nz() const { return dims_[2]; }

  std::size_t voxel_total() const {
    return static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
  }

  double voxel_volume_mm3() const { return spacing_[0] * spacing_[1] * spacing_[2]; }

  bool contains(int i, int j, int k) const {
    return i >= 0 && i < dims_[0] && j >= 0 && j < dims_[1] && k >= 0 && k < dims_[2];
  }

  // x-fastest, z-slowest linear order.
  std::size_t linear_index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims_[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_[1]) * k);
  }

  Index3 coords_of(std::size_t linear) const {
    const auto nx = static_cast<std::size_t>(dims_[0]);
    const auto ny = static_cast<std::size_t>(dims_[1]);
    return Index3{static_cast<int>(linear % nx), static_cast<int>((linear / nx) % ny),
                  static_cast<int>(linear / (nx * ny))};
  }

  std::array<double, 3> voxel_center_mm(int i, int j, int k) const {
    return {origin_[0] + i * spacing_[0], origin_[1] + j * spacing_[1],
            origin_[2] + k * spacing_[2]};
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dims_ == b.dims_ && a.spacing_ == b.spacing_ && a.origin_ == b.origin_;
  }
  friend bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }

  std::string describe() const {
    std::ostringstream os;
    os << "dims(" << dims_[0] << "," << dims_[1] << "," << dims_[2] << ") spacing("
       << spacing_[0] << "," << spacing_[1] << "," << spacing_[2] << ") origin("
       << origin_[0] << "," << origin_[1] << "," << origin_[2] << ")";
    return os.str();
  }

 private:
  std::array<int, 3> dims_;
  std::array<double, 3> spacing_;
  std::array<double, 3> origin_;
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (a != b) {
    throw GridMismatchError(std::string(what) + ": grids differ: [" + a.describe() +
                            "] vs [" + b.describe() + "]");
  }
}

/// Six non-negative expansions in mm, one per signed axis direction.
/// Under LPS: x-/x+ right/left, y-/y+ anterior/posterior, z-/z+ inferior/superior.
class MarginVector {
 public:
  MarginVector() : neg_{0, 0, 0}, pos_{0, 0, 0} {}

  MarginVector(double x_neg, double x_pos, double y_neg, double y_pos, double z_neg,
               double z_pos)
      : neg_{x_neg, y_neg, z_neg}, pos_{x_pos, y_pos, z_pos} {
    static constexpr const char* kNames[6] = {"x_neg", "x_pos", "y_neg",
                                              "y_pos", "z_neg", "z_pos"};
    const double comps[6] = {x_neg, x_pos, y_neg, y_pos, z_neg, z_pos};
    for (int c = 0; c < 6; ++c) {
      if (!(comps[c] >= 0.0)) {
        throw MarginError("margin component " + std::string(kNames[c]) +
                          " must be >= 0, got " + std::to_string(comps[c]));
      }
    }
  }

  static MarginVector isotropic(double mm) {
    return MarginVector(mm, mm, mm, mm, mm, mm);
  }

  double neg(int axis) const { return neg_[axis]; }
  double pos(int axis) const { return pos_[axis]; }

  double x_neg() const { return neg_[0]; }
  double x_pos() const { return pos_[0]; }
  double y_neg() const { return neg_[1]; }
  double y_pos() const { return pos_[1]; }
  double z_neg() const { return neg_[2]; }
  double z_pos() const { return pos_[2]; }

  bool is_zero() const {
    return neg_[0] == 0 && neg_[1] == 0 && neg_[2] == 0 && pos_[0] == 0 &&
           pos_[1] == 0 && pos_[2] == 0;
  }

  double max_component() const {
    double m = 0;
    for (int a = 0; a < 3; ++a) {
      m = std::max({m, neg_[a], pos_[a]});
    }
    return m;
  }

  friend bool operator==(const MarginVector& a, const MarginVector& b) {
    return a.neg_ == b.neg_ && a.pos_ == b.pos_;
  }

 private:
  std::array<double, 3> neg_;
  std::array<double, 3> pos_;
};

}  // namespace tvplan
