#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "ferronema/energy.hpp"

namespace ferronema {

Extension extend(const VectorField& f) {
  const Grid& grid = f.grid;
  const std::size_t n = grid.size();
  std::vector<int> unknown(n, -1);
  int count = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (f.mask[i] == NodeKind::Particle) unknown[i] = count++;
  Extension ext{f, h1_norm(f, true), 0.0};
  if (count > 0) {
    const Vec3 h = grid.spacing();
    const double coef[3] = {1.0 / (h.x() * h.x()), 1.0 / (h.y() * h.y()), 1.0 / (h.z() * h.z())};
    const std::size_t stride[3] = {1, static_cast<std::size_t>(grid.n[0]),
                                   static_cast<std::size_t>(grid.n[0]) * grid.n[1]};
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(count, 3);
    for (int k = 0; k < grid.n[2]; ++k)
      for (int j = 0; j < grid.n[1]; ++j)
        for (int i = 0; i < grid.n[0]; ++i) {
          const std::size_t p = grid.index(i, j, k);
          const int row = unknown[p];
          if (row < 0) continue;
          const int ijk[3] = {i, j, k};
          double diag = 0.0;
          for (int a = 0; a < 3; ++a)
            for (int s : {-1, 1}) {
              const int m = ijk[a] + s;
              if (m < 0 || m >= grid.n[a]) continue;
              const std::size_t q = s > 0 ? p + stride[a] : p - stride[a];
              diag += coef[a];
              if (unknown[q] >= 0) trips.emplace_back(row, unknown[q], -coef[a]);
              else rhs.row(row) += coef[a] * f.values[q].transpose();
            }
          trips.emplace_back(row, row, diag);
        }
    Eigen::SparseMatrix<double> lap(count, count);
    lap.setFromTriplets(trips.begin(), trips.end());
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-13);
    cg.compute(lap);
    const Eigen::MatrixXd sol = cg.solve(rhs);
    for (std::size_t i = 0; i < n; ++i)
      if (unknown[i] >= 0) ext.field.values[i] = sol.row(unknown[i]).transpose();
  }
  ext.h1_extended = h1_norm(ext.field, false);
  return ext;
}

}  // namespace ferronema
