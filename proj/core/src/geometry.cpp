#include "ferronema/geometry.hpp"

#include <cmath>
#include <numbers>

#include "ferronema/errors.hpp"
#include "ferronema/quadrature.hpp"

namespace ferronema {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

Rotation Rotation::from_matrix(const Mat3& m) {
  const Mat3 defect = m * m.transpose() - Mat3::Identity();
  if (defect.cwiseAbs().maxCoeff() > 1e-12)
    throw GeometryError("rotation matrix is not orthogonal");
  if (std::abs(m.determinant() - 1.0) > 1e-12)
    throw GeometryError("rotation matrix does not have determinant 1");
  return Rotation(m, true);
}

Rotation Rotation::about_axis(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0)) throw GeometryError("rotation axis has zero length");
  return Rotation(Eigen::AngleAxisd(angle, axis / n).toRotationMatrix(), true);
}

Rotation Rotation::from_quaternion(double w, double x, double y, double z) {
  Eigen::Quaterniond q(w, x, y, z);
  if (!(q.norm() > 0.0)) throw GeometryError("zero quaternion");
  q.normalize();
  return Rotation(q.toRotationMatrix(), true);
}

Rotation Rotation::inverse() const { return Rotation(m_.transpose(), true); }

Rotation Rotation::operator*(const Rotation& other) const {
  return Rotation(m_ * other.m_, true);
}

void Spheroid::validate() const {
  if (!(b > 0.0)) throw GeometryError("spheroid: equatorial semi-axis must be positive");
  if (!(a >= b)) throw GeometryError("spheroid: polar semi-axis must be >= equatorial (prolate)");
}

double Spheroid::level(const Vec3& x) const {
  const Vec3 y = to_local(x);
  return (y.x() * y.x() + y.y() * y.y()) / (b * b) + y.z() * y.z() / (a * a);
}

double Spheroid::volume() const { return 4.0 * kPi * a * b * b / 3.0; }

double Spheroid::surface_area() const { return prolate_surface_area(a, b); }

Spheroid Spheroid::scaled(double factor) const {
  Spheroid s = *this;
  s.a *= factor;
  s.b *= factor;
  return s;
}

Spheroid make_spheroid(double a, double b, const Vec3& center, const Rotation& rotation) {
  Spheroid s{center, a, b, rotation};
  s.validate();
  return s;
}

double prolate_surface_area(double a, double b) {
  const double e2 = 1.0 - (b * b) / (a * a);
  if (e2 < 1e-6) {
    // asin(e)/e = 1 + e^2/6 + 3e^4/40 + 5e^6/112 ; times sqrt(1-e^2)
    const double s = std::sqrt(1.0 - e2) * (1.0 + e2 / 6.0 + 3.0 * e2 * e2 / 40.0 +
                                            5.0 * e2 * e2 * e2 / 112.0);
    return 2.0 * kPi * b * b * (1.0 + s / (1.0 - e2));
  }
  const double e = std::sqrt(e2);
  return 2.0 * kPi * b * b * (1.0 + a / (b * e) * std::asin(e));
}

double SurfaceQuadrature::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

SurfaceQuadrature make_surface_quadrature(const Spheroid& s, int n_polar, int n_azimuthal) {
  s.validate();
  if (n_polar < 4 || n_azimuthal < 4)
    throw ConfigError("surface quadrature needs at least 4 nodes per direction");
  const GaussRule gl = gauss_legendre(n_polar);
  const double a = s.a, b = s.b;
  const double dphi = 2.0 * kPi / n_azimuthal;
  SurfaceQuadrature q;
  q.nodes.reserve(static_cast<std::size_t>(n_polar) * n_azimuthal);
  q.normals.reserve(q.nodes.capacity());
  q.weights.reserve(q.nodes.capacity());
  for (int i = 0; i < n_polar; ++i) {
    const double t = gl.nodes[i];
    const double st = std::sqrt(1.0 - t * t);
    const double jac = b * std::sqrt(a * a * st * st + b * b * t * t);
    for (int j = 0; j < n_azimuthal; ++j) {
      const double phi = j * dphi;
      const double c = std::cos(phi), sn = std::sin(phi);
      const Vec3 y(b * st * c, b * st * sn, a * t);
      const Vec3 n = Vec3(a * st * c, a * st * sn, b * t).normalized();
      q.nodes.push_back(s.to_world(y));
      q.normals.push_back(s.rotation.apply(n));
      q.weights.push_back(gl.weights[i] * dphi * jac);
    }
  }
  return q;
}

Mat3 anchoring_tensor(const Spheroid& s, const SurfaceQuadrature& q) {
  if (q.size() == 0) throw GeometryError("anchoring_tensor: empty quadrature");
  for (std::size_t k : {std::size_t{0}, q.size() / 2, q.size() - 1}) {
    if (std::abs(s.level(q.nodes[k]) - 1.0) > 1e-8)
      throw GeometryError("anchoring_tensor: quadrature was not built for this spheroid");
  }
  Mat3 t = Mat3::Zero();
  for (std::size_t k = 0; k < q.size(); ++k) t.noalias() += q.weights[k] * q.normals[k] * q.normals[k].transpose();
  return 0.5 * (t + t.transpose());
}

AnchoringEigenvalues anchoring_eigenvalues(const Spheroid& s) {
  s.validate();
  const double a = s.a, b = s.b;
  const double c2 = a * a - b * b;
  // Integrands in t = cos(theta) are even; integrate on [0, 1] with panels
  // [1 - 2^-k, 1 - 2^-(k+1)] to resolve the near-singularity at t ~ 1.
  double area_half = 0.0, axial_half = 0.0;
  const int levels = 48;
  const GaussRule unit = gauss_legendre(20);
  for (int k = 0; k <= levels; ++k) {
    const double lo = (k == 0) ? 0.0 : 1.0 - std::ldexp(1.0, -k);
    const double hi = (k == levels) ? 1.0 : 1.0 - std::ldexp(1.0, -(k + 1));
    const double mid = 0.5 * (lo + hi), rad = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < unit.nodes.size(); ++i) {
      const double t = mid + rad * unit.nodes[i];
      const double w = rad * unit.weights[i];
      const double root = std::sqrt(a * a - c2 * t * t);
      area_half += w * root;
      axial_half += w * t * t / root;
    }
  }
  const double area = 2.0 * 2.0 * kPi * b * area_half;
  const double axial = 2.0 * 2.0 * kPi * b * b * b * axial_half;
  return {axial, 0.5 * (area - axial)};
}

bool spheroids_overlap(const Spheroid& s, const Spheroid& t) {
  const double dist = (s.center - t.center).norm();
  if (dist >= s.a + t.a) return false;
  if (dist < s.b + t.b) return true;
  const SurfaceQuadrature qs = make_surface_quadrature(s, 16, 32);
  for (const Vec3& x : qs.nodes)
    if (t.contains(x)) return true;
  const SurfaceQuadrature qt = make_surface_quadrature(t, 16, 32);
  for (const Vec3& x : qt.nodes)
    if (s.contains(x)) return true;
  return false;
}

}  // namespace ferronema
