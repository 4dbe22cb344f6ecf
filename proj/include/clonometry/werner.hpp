#pragma once

#include <vector>

#include "clonometry/fock_cv.hpp"
#include "clonometry/hilbert.hpp"
#include "clonometry/quadrature.hpp"
#include "clonometry/report.hpp"

namespace clonometry::werner {

// Thermal regulator tau = lambda^{a+a}, kept unnormalized; Tr tau -> 1/(1-lambda).
struct ThermalWeight {
  double lambda = 0.5;  // in (0, 1)
};

Eigen::VectorXd thermal_diagonal(const ThermalWeight& weight, int levels);  // lambda^n, n = 0..levels
double thermal_trace(const ThermalWeight& weight, int levels);
double thermal_tail(const ThermalWeight& weight, int levels);  // lambda^{levels+1}/(1-lambda)
// Smallest cutoff whose tail stays at or below the bound.
int thermal_levels(const ThermalWeight& weight, double tail_bound);

// Exact transposition |m,n> -> |n,m> on the truncated two-mode basis.
Operator swap_operator(const cv::FockSpace& space);

// (1/pi) Int d^2a D_c(a) (x) D_a+(a), the phase-space form of the transposition,
// evaluated by 41-node Gauss-Hermite quadrature per real axis.
Mat swap_displacement_integral(const cv::FockSpace& space);

// S2 = (1 + swap)/2, the projector on the symmetric two-mode subspace.
Operator symmetrizer_s2_cv(const cv::FockSpace& space);
// The same projector through the splitter: V (even-level projector (x) 1) V+.
// Agrees with the swap route on levels whose total stays inside the cutoff.
Operator symmetrizer_parity_form(const cv::FockSpace& space);

// K = 2 / (Tr tau + Tr[rho tau]); the regularized map is nonlinear through it.
double k_factor(const Mat& rho, const ThermalWeight& weight, int levels);

struct RegularizedMapResult {
  Operator output;  // two-mode density K S2 (rho (x) tau) S2
  double k_factor = 0.0;
  ThermalWeight lambda;
  double input_tail = 0.0;    // input population at the cutoff level
  double thermal_tail = 0.0;  // lambda tail above the same cutoff
  std::vector<std::string> warnings;
};

// Dense-route regularized 1->2 map on the input's own cutoff. Refuses when
// either truncation tail exceeds 1e-6, which keeps lambda moderate here; the
// reduction route below stays valid at any lambda.
RegularizedMapResult regularized_clone(const Operator& input, const ThermalWeight& weight);

// Single-site reduction (K/4)[Tr tau rho + tau + rho tau + tau rho], held as a
// dense block on the input levels plus the thermal diagonal above them, so the
// cutoff follows the lambda tail instead of a dense two-mode budget.
struct ReducedClone {
  Mat block;
  Eigen::VectorXd tail;  // (K/4) lambda^n on the levels above the block
  double k_factor = 0.0;
  double thermal_trace = 0.0;
  int levels = 0;  // thermal cutoff behind the scalars
  double trace() const;
};
ReducedClone regularized_reduction(const Operator& input, const ThermalWeight& weight);

// Trace distance of the reduction to rho/2 + tau/(2 Tr tau), the depolarizing
// form the map approaches as lambda -> 1.
double depolarizing_limit_distance(const Operator& input, const ThermalWeight& weight);

// Outcome-density element of the measurement dual to the regularized map, with
// X read on clone c and Y on clone a:
//   G(x,y) = K Tr_a[(1 (x) tau) S2 (|x><x| (x) |y><y|) S2].
// `exact` carries the weak-limit normalization K = 2/(Tr tau + 1); `asymptotic`
// the (1-lambda)/2 prefactor of the same four-term bracket. The per-state K
// belongs to moments_g, where an input is available.
struct DualPovm {
  Mat exact;
  Mat asymptotic;
  double k_weak = 0.0;
  int levels = 0;  // thermal cutoff used for the scalar contractions
};
DualPovm povm_g(const cv::FockSpace& space, double x, double y, const ThermalWeight& weight);

// Grid statistics of (x, y) under p(x,y) = h^2 Tr[rho G(x,y)] with the
// per-state normalization K = 2/(Tr tau + <tau>). Entries "x" and "y" hold the
// grid moments against their closed forms; "estimated" carries the unit-gain
// reading 2x of the half-strength estimator, and added_noise the excess of the
// outcome variance over a quarter of the input variance, whose thermal target
// is (1/8)(1 + 2 lambda/(1-lambda)). Requires lambda in [0.8, 0.995].
MomentReport moments_g(const cv::FockSpace& space, const Ket& input,
                       const ThermalWeight& weight, const QuadratureGrid& grid);

struct ScanPoint {
  double lambda = 0.0;
  double excess = 0.0;     // measured second-moment excess of the x outcome
  double predicted = 0.0;  // (1/8)(1 + 2 lambda/(1-lambda))
};
struct DivergenceScan {
  std::vector<ScanPoint> points;
  double fitted_coefficient = 0.0;  // least-squares slope against 2 lambda/(1-lambda)
};
DivergenceScan moments_g_scan(const cv::FockSpace& space, const Ket& input,
                              const std::vector<double>& lambdas, const QuadratureGrid& grid);

struct CovarianceReport {
  double clone_deviation = 0.0;        // displacement-covariance defect of the sigma cloner
  double regularized_deviation = 0.0;  // same probe through the regularized map
  int rank_p = 0;                      // eigenvalue count of the cloner projector
  int rank_s2 = 0;                     // eigenvalue count of the symmetrizer
  double fidelity_p = 0.0;             // P|alpha,beta> against the merged two-copy coherent form
  double fidelity_s2 = 0.0;            // S2|alpha,beta> against |alpha,beta> + |beta,alpha>
};

// Displacement covariance probe: T(D(alpha)|0><0|D+(alpha)) against
// (D (x) D) T(|0><0|) (D (x) D)+ for both the sigma cloner and the regularized
// map at the given weight, plus projector ranks and the coherent-pair actions
// of the two projectors (evaluated on the sigma = 1 cloner). |alpha| <= 0.8.
CovarianceReport covariance_comparison(const cv::FockSpace& space, Cx alpha, Cx beta,
                                       double sigma, const ThermalWeight& weight);

}  // namespace clonometry::werner
