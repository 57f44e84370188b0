#include "ferronema/field_io.hpp"

#include <fmt/format.h>
#include <fstream>
#include <ostream>

namespace ferronema {

std::string format_number(double x) { return fmt::format("{:.17g}", x); }

namespace {

void vtk_header(std::ostream& os, const Grid& g, const std::string& title) {
  const Vec3 h = g.spacing();
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_POINTS\n";
  os << fmt::format("DIMENSIONS {} {} {}\n", g.n[0], g.n[1], g.n[2]);
  os << fmt::format("ORIGIN {} {} {}\n", format_number(g.box.lo.x()), format_number(g.box.lo.y()),
                    format_number(g.box.lo.z()));
  os << fmt::format("SPACING {} {} {}\n", format_number(h.x()), format_number(h.y()), format_number(h.z()));
  os << fmt::format("POINT_DATA {}\n", g.size());
}

void vector_rows(std::ostream& os, const std::vector<Vec3>& v) {
  for (const Vec3& x : v) os << fmt::format("{} {} {}\n", format_number(x.x()), format_number(x.y()), format_number(x.z()));
}

std::string xyz(const Grid& g, std::size_t i) {
  const Vec3 x = g.position(i);
  return fmt::format("{},{},{}", format_number(x.x()), format_number(x.y()), format_number(x.z()));
}

}  // namespace

void write_vtk(std::ostream& os, const VectorField& f, const std::string& name) {
  vtk_header(os, f.grid, "director field");
  os << "VECTORS " << name << " double\n";
  vector_rows(os, f.values);
  os << "SCALARS mask int 1\nLOOKUP_TABLE default\n";
  for (NodeKind k : f.mask) os << static_cast<int>(k) << '\n';
}

void write_vtk(std::ostream& os, const MatrixField& A, const std::string& name) {
  vtk_header(os, A.grid, "effective anchoring tensor");
  os << "TENSORS " << name << " double\n";
  for (const Mat3& m : A.values)
    for (int r = 0; r < 3; ++r)
      os << fmt::format("{} {} {}\n", format_number(m(r, 0)), format_number(m(r, 1)), format_number(m(r, 2)));
}

void write_vtk(std::ostream& os, const EffectiveMagnetization& M, const std::string& name) {
  vtk_header(os, M.grid, "effective magnetization");
  os << "VECTORS " << name << " double\n";
  vector_rows(os, M.values);
}

void write_csv(std::ostream& os, const VectorField& f) {
  os << "x,y,z,ux,uy,uz\r\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec3& u = f.values[i];
    os << xyz(f.grid, i) << fmt::format(",{},{},{}\r\n", format_number(u.x()), format_number(u.y()), format_number(u.z()));
  }
}

void write_csv(std::ostream& os, const MatrixField& A) {
  os << "x,y,z,a11,a12,a13,a22,a23,a33\r\n";
  for (std::size_t i = 0; i < A.values.size(); ++i) {
    const Mat3& m = A.values[i];
    os << xyz(A.grid, i)
       << fmt::format(",{},{},{},{},{},{}\r\n", format_number(m(0, 0)), format_number(m(0, 1)), format_number(m(0, 2)),
                      format_number(m(1, 1)), format_number(m(1, 2)), format_number(m(2, 2)));
  }
}

void write_csv(std::ostream& os, const EffectiveMagnetization& M) {
  os << "x,y,z,mx,my,mz\r\n";
  for (std::size_t i = 0; i < M.values.size(); ++i) {
    const Vec3& m = M.values[i];
    os << xyz(M.grid, i) << fmt::format(",{},{},{}\r\n", format_number(m.x()), format_number(m.y()), format_number(m.z()));
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open output file " + path.string());
  return os;
}

}  // namespace ferronema
