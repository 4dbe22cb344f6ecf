#pragma once

#include <Eigen/Dense>

namespace clonometry {

struct Quadrature1D {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Gauss-Legendre rule on [-1, 1], exact for polynomials of degree <= 2n-1.
Quadrature1D gauss_legendre(int n);

// Gauss-Hermite rule for the weight e^{-x^2} on the real line.
Quadrature1D gauss_hermite(int n);

// Uniform 1-D lattice centered at 0 with step h and half-width L, used for
// delta-normalized quadrature-eigenstate sums. The weight of each point is h.
struct QuadratureGrid {
  double h = 0.05;
  double half_width = 1.0;
  Eigen::VectorXd points;
};

QuadratureGrid uniform_grid(double half_width, double h);

// A grid resolves the identity on the low Fock ladder only if it is fine
// enough and wide enough for the given truncation.
bool completeness_grade(const QuadratureGrid& grid, int nmax);

}  // namespace clonometry
