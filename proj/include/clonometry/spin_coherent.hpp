#pragma once

#include <array>

#include "clonometry/hilbert.hpp"
#include "clonometry/quadrature.hpp"

namespace clonometry::qubit {

// Angular-momentum matrices at spin j (dimension 2j+1, basis ordered by
// descending magnetic number). axis: 0,1,2 -> x,y,z.
Mat spin_matrix(double j, int axis);

// State with n.J |n> = -j |n>, built by rotating the lowest-weight state:
// |n> = exp(-i phi Jz) exp(-i theta Jy) |j,-j>.
Ket spin_coherent_state(double j, double theta, double phi);

// Product rule over the sphere for the measure (2j+1) dn / 4pi:
// Gauss-Legendre in cos(theta), uniform in phi.
struct SphereRule {
  Eigen::VectorXd cos_theta;
  Eigen::VectorXd theta_weights;  // Gauss-Legendre weights
  Eigen::VectorXd phi;            // uniform nodes, weight 2pi/n each
  double measure_prefactor = 0.0; // (2j+1)/(4pi)
};
SphereRule sphere_rule(double j, int n_theta = 64, int n_phi = 128);

// First- and second-moment operators of the spin-coherent POVM,
//   E1_a = int dmu (j+1) (n.e_a)   |n><n|
//   E2_a = int dmu (j+1)^2 (n.e_a)^2 |n><n|,
// integrated with the rule above. The sign relating E1_a to J_a is measured,
// not assumed, and reported in empirical_sign.
struct CoherentMoments {
  std::array<Mat, 3> first;
  std::array<Mat, 3> second;
  int empirical_sign = 0;
  double completeness_residual = 0.0;  // |int dmu |n><n| - 1|
  double sign_residual = 0.0;          // |E1_a - sign * J_a| maximized over axes
};
CoherentMoments coherent_moment_operators(double j, int n_theta = 64, int n_phi = 128);

// Closed form of the estimated total uncertainty for the coherent-state
// measurement: j(j+1)^2/(j+3/2) + 3(j+1)^2/(2j+3) - sum_a <J_a>^2.
double coherent_total_uncertainty(double j, const Ket& input);

// Same figure assembled from the quadrature moment operators (oracle route).
double coherent_total_uncertainty_quadrature(double j, const Ket& input,
                                             const CoherentMoments& moments);

// Lower bound 2j+1 on the total uncertainty.
double coherent_uncertainty_bound(double j);

}  // namespace clonometry::qubit
