#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ferronema {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Proper rotation of R^3. Construction validates orthogonality and
// orientation to 1e-12 componentwise.
class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}

  static Rotation from_matrix(const Mat3& m);
  static Rotation about_axis(const Vec3& axis, double angle);
  // Unit quaternion (w, x, y, z); normalized internally.
  static Rotation from_quaternion(double w, double x, double y, double z);

  const Mat3& matrix() const { return m_; }
  Vec3 apply(const Vec3& v) const { return m_ * v; }
  // Image of the reference symmetry axis z.
  Vec3 axis() const { return m_.col(2); }
  Rotation inverse() const;
  Rotation operator*(const Rotation& other) const;

 private:
  explicit Rotation(const Mat3& m, bool) : m_(m) {}
  Mat3 m_;
};

// Prolate (or spherical) spheroid. `a` is the polar semi-axis along the
// rotated z axis, `b` the equatorial one.
struct Spheroid {
  Vec3 center = Vec3::Zero();
  double a = 1.0;
  double b = 1.0;
  Rotation rotation;

  void validate() const;  // throws GeometryError unless a >= b > 0
  Vec3 to_local(const Vec3& x) const { return rotation.matrix().transpose() * (x - center); }
  Vec3 to_world(const Vec3& y) const { return center + rotation.apply(y); }
  // x^2/b^2 + y^2/b^2 + z^2/a^2 in the particle frame.
  double level(const Vec3& x) const;
  bool contains(const Vec3& x) const { return level(x) <= 1.0; }
  double volume() const;
  double surface_area() const;
  // Homothety about the center.
  Spheroid scaled(double factor) const;
};

Spheroid make_spheroid(double a, double b, const Vec3& center = Vec3::Zero(),
                       const Rotation& rotation = Rotation());

// 2 pi b^2 (1 + a/(b e) asin e), with a series for e -> 0.
double prolate_surface_area(double a, double b);

struct SurfaceQuadrature {
  std::vector<Vec3> nodes;
  std::vector<Vec3> normals;  // outward, unit
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double total_weight() const;
};

// Gauss-Legendre in cos(theta) times the trapezoid rule in phi.
SurfaceQuadrature make_surface_quadrature(const Spheroid& s, int n_polar = 64,
                                          int n_azimuthal = 128);

// sum_q w_q nu_q nu_q^T. Throws GeometryError if q does not lie on s.
Mat3 anchoring_tensor(const Spheroid& s, const SurfaceQuadrature& q);

struct AnchoringEigenvalues {
  double axial;       // lambda_1, eigenvector along the symmetry axis
  double transverse;  // lambda_2, double
};

// Computed from the axisymmetric one-dimensional integrals on panels graded
// towards the poles, so accuracy holds for large aspect ratios.
AnchoringEigenvalues anchoring_eigenvalues(const Spheroid& s);

// Bounding-sphere rejection, then a sampled containment test of each
// surface in the other.
bool spheroids_overlap(const Spheroid& s, const Spheroid& t);

}  // namespace ferronema
