#include "ferronema/grid.hpp"

#include "ferronema/errors.hpp"

namespace ferronema {

Vec3 Grid::spacing() const {
  const Vec3 ext = box.extent();
  return Vec3(ext.x() / (n[0] - 1), ext.y() / (n[1] - 1), ext.z() / (n[2] - 1));
}

std::array<int, 3> Grid::ijk(std::size_t idx) const {
  const int i = static_cast<int>(idx % n[0]);
  idx /= n[0];
  const int j = static_cast<int>(idx % n[1]);
  return {i, j, static_cast<int>(idx / n[1])};
}

Vec3 Grid::position(int i, int j, int k) const {
  const Vec3 h = spacing();
  return box.lo + Vec3(i * h.x(), j * h.y(), k * h.z());
}

Vec3 Grid::position(std::size_t idx) const {
  const auto [i, j, k] = ijk(idx);
  return position(i, j, k);
}

bool Grid::on_boundary(int i, int j, int k) const {
  return i == 0 || j == 0 || k == 0 || i == n[0] - 1 || j == n[1] - 1 || k == n[2] - 1;
}

double Grid::weight(int i, int j, int k) const {
  const Vec3 h = spacing();
  double w = h.prod();
  if (i == 0 || i == n[0] - 1) w *= 0.5;
  if (j == 0 || j == n[1] - 1) w *= 0.5;
  if (k == 0 || k == n[2] - 1) w *= 0.5;
  return w;
}

double Grid::weight(std::size_t idx) const {
  const auto [i, j, k] = ijk(idx);
  return weight(i, j, k);
}

bool Grid::operator==(const Grid& o) const {
  return n == o.n && box.lo == o.box.lo && box.hi == o.box.hi;
}

Grid make_grid(const Box& box, int n) { return make_grid(box, {n, n, n}); }

Grid make_grid(const Box& box, std::array<int, 3> n) {
  for (int v : n)
    if (v < 8) throw ConfigError("grid resolution must be at least 8 nodes per direction");
  if ((box.extent().array() <= 0.0).any()) throw ConfigError("grid box is empty");
  return Grid{box, n};
}

}  // namespace ferronema
