#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace pflm {

/// Midpoint quadrature grid on [0,1]: points t_a = (a + 0.5)/G with uniform
/// weight 1/G. All functional data in this library is sampled on such a grid.
struct Grid {
  int num_points = 0;
  Eigen::VectorXd points;
  double weight = 0.0;
};

inline Grid make_grid(int num_points) {
  if (num_points < 2) throw std::invalid_argument("make_grid: num_points must be >= 2");
  Grid g;
  g.num_points = num_points;
  g.weight = 1.0 / num_points;
  g.points.resize(num_points);
  for (int a = 0; a < num_points; ++a) g.points[a] = (a + 0.5) / num_points;
  return g;
}

/// Midpoint-rule approximation of ∫ a(t) b(t) dt from grid samples.
inline double integrate_product(const Grid& grid, const Eigen::Ref<const Eigen::VectorXd>& a,
                                const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() != grid.num_points || b.size() != grid.num_points)
    throw std::invalid_argument("integrate_product: sample length does not match grid");
  return grid.weight * a.dot(b);
}

}  // namespace pflm
