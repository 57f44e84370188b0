#pragma once

#include <array>
#include <cstddef>

#include "ferronema/ensemble.hpp"

namespace ferronema {

// Uniform node-centered grid on a box, x index fastest.
struct Grid {
  Box box;
  std::array<int, 3> n{9, 9, 9};  // nodes per direction, >= 2

  Vec3 spacing() const;
  double max_spacing() const { return spacing().maxCoeff(); }
  std::size_t size() const { return static_cast<std::size_t>(n[0]) * n[1] * n[2]; }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(n[0]) * (j + static_cast<std::size_t>(n[1]) * k);
  }
  std::array<int, 3> ijk(std::size_t idx) const;
  Vec3 position(int i, int j, int k) const;
  Vec3 position(std::size_t idx) const;
  bool on_boundary(int i, int j, int k) const;
  // Product trapezoid weight; sums to |box| exactly.
  double weight(int i, int j, int k) const;
  double weight(std::size_t idx) const;

  bool operator==(const Grid& o) const;
};

// n nodes along each axis. Throws ConfigError for n < 8.
Grid make_grid(const Box& box, int n);
Grid make_grid(const Box& box, std::array<int, 3> n);

}  // namespace ferronema
