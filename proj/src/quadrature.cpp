#include "clonometry/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace clonometry {

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the orthogonal
// polynomial recurrence; weights come from the first eigenvector components.
Quadrature1D golub_welsch(const Eigen::VectorXd& offdiag, double weight_integral) {
  const int n = static_cast<int>(offdiag.size()) + 1;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n - 1; ++k) {
    jacobi(k, k + 1) = offdiag(k);
    jacobi(k + 1, k) = offdiag(k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  Quadrature1D rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    double v0 = es.eigenvectors()(0, k);
    rule.weights(k) = weight_integral * v0 * v0;
  }
  return rule;
}

}  // namespace

Quadrature1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  Eigen::VectorXd off(n - 1);
  for (int k = 1; k < n; ++k) off(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  return golub_welsch(off, 2.0);
}

Quadrature1D gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: need n >= 1");
  Eigen::VectorXd off(n - 1);
  for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(k / 2.0);
  return golub_welsch(off, std::sqrt(std::numbers::pi));
}

QuadratureGrid uniform_grid(double half_width, double h) {
  if (h <= 0 || half_width <= 0) throw std::invalid_argument("uniform_grid: h and L must be positive");
  const int n_side = static_cast<int>(std::floor(half_width / h + 1e-9));
  QuadratureGrid grid;
  grid.h = h;
  grid.half_width = half_width;
  grid.points.resize(2 * n_side + 1);
  for (int k = -n_side; k <= n_side; ++k) grid.points(k + n_side) = k * h;
  return grid;
}

bool completeness_grade(const QuadratureGrid& grid, int nmax) {
  return grid.h <= 0.05 && grid.half_width >= 1.5 * std::sqrt(static_cast<double>(nmax));
}

}  // namespace clonometry
