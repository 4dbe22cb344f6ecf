#pragma once

#include <functional>
#include <string>
#include <vector>

#include "clonometry/hilbert.hpp"
#include "clonometry/quadrature.hpp"
#include "clonometry/report.hpp"

namespace clonometry::cv {

// Truncated single bosonic mode with levels 0..nmax.
struct FockSpace {
  int nmax = 1;

  int dim() const { return nmax + 1; }
  HilbertSpace single() const { return HilbertSpace::single(dim()); }
  HilbertSpace modes(int count) const { return HilbertSpace::uniform(count, dim()); }
};

Mat lowering(const FockSpace& space);
Mat number_operator(const FockSpace& space);
Mat quadrature_x(const FockSpace& space);                 // (a + a+)/2
Mat quadrature_y(const FockSpace& space);                 // (a - a+)/2i
Mat quadrature_rot(const FockSpace& space, double phi);   // cos(phi) X + sin(phi) Y

struct ModeOperators {
  Mat a;
  Mat x;
  Mat y;
};
ModeOperators mode_operators(const FockSpace& space);

// exp(alpha a+ - alpha* a); exact unitary of the truncated generator.
// Matrix elements are accuracy-guaranteed only for |alpha| <= sqrt(nmax)/3;
// beyond that a warning is appended when a sink is given.
Mat displacement(const FockSpace& space, Cx alpha,
                 std::vector<std::string>* warnings = nullptr);

// exp[(r/2)(a+^2 - a^2)], so S+(r) a S(r) = cosh(r) a + sinh(r) a+ and
// the squeezed vacuum has <X^2> = e^{2r}/4.
Mat squeeze(const FockSpace& space, double r);

Vec coherent_amplitudes(const FockSpace& space, Cx alpha);
Ket coherent_ket(const FockSpace& space, Cx alpha);

// Two-mode 50/50 splitter V = exp[(pi/4)(c+ a - c a+)] on modes c (x) a,
// assembled sector-by-sector in total photon number, which the generator
// conserves; equals e^G of the truncated generator exactly.
// Conjugation: V c V+ = (c - a)/sqrt(2), V a V+ = (c + a)/sqrt(2).
Mat beamsplitter_v(const FockSpace& space);

// sqrt(1 - lambda^2) sum_n (-lambda)^n |n,n>.
Ket twin_beam(const FockSpace& space, double lambda);
double twin_beam_mean_photons(double lambda);

// Three-mode U = exp[c(a+ + b) - c+(a + b+)] on modes c (x) a (x) b.
// Dense exponential; refuses nmax > 12.
Mat cloner_unitary_u(const FockSpace& space);

// Rank-(nmax+1) projector on modes c (x) a behind the 1->2 cloning channel,
// held in factored form P = B B+ with B+ B = I.
struct JointCloner {
  FockSpace space;
  double sigma = 1.0;
  Mat embedding;  // dim^2 x dim, pre-squeeze: V (|0>_c (x) 1_a)
  Mat isometry;   // dim^2 x dim, (S (x) S) embedding

  Mat projector() const { return isometry * isometry.adjoint(); }
};

JointCloner make_joint_cloner(const FockSpace& space, double sigma);

// (S_c (x) S_a)(ln sigma) V (|0><0|_c (x) 1_a) V+ (S_c (x) S_a)+(ln sigma)
Mat projector_pca(const FockSpace& space, double sigma);

// Independent route for sigma = 1: (2/pi) Int d^2z e^{-|z|^2} D_c+(z) (x) D_a(z),
// evaluated by 41-node Gauss-Hermite quadrature per real axis.
Mat projector_displacement_integral(const FockSpace& space);

// rho_out = (1/2) P (|phi><phi| (x) 1) P, a two-mode density.
// Trace deviation from 1 measures truncation; > 1e-2 throws.
Operator clone_channel_cv(const JointCloner& cloner, const Ket& input,
                          std::vector<std::string>* warnings = nullptr);

// Int d^2z |f_sigma(z)|^2 D+(z)|phi><phi|D(z): the Gaussian displacement
// mixture every single-clone reduction must match.
Operator displacement_mixture(const FockSpace& space, const Ket& input, double sigma);

// F_sigma(x,y) = (1/2) Tr_a[P (|x><x| (x) |y><y|) P] with |x> the X-quadrature
// eigenket on clone c and |y> the Y-quadrature eigenket on clone a; carries a
// factor 1/pi of continuum normalization.
Mat joint_povm_f(const JointCloner& cloner, double x, double y);

// psi_n(x) = (2/pi)^{1/4} (2^n n!)^{-1/2} H_n(sqrt(2) x) e^{-x^2}
Eigen::VectorXd quadrature_eigenstate(const FockSpace& space, double x);
// Y-quadrature eigenket i^n psi_n(y), used for the second outcome axis
Vec quadrature_eigenstate_y(const FockSpace& space, double y);
// table(n, i) = psi_n(points[i])
Eigen::MatrixXd eigenfunction_table(int nmax, const QuadratureGrid& grid);

// h^2 sum_{x,y} F_sigma(x,y), evaluated through the factored projector with
// the grid entering only via the single-axis resolution sums.
Mat povm_completeness_sum(const JointCloner& cloner, const QuadratureGrid& grid);

// Grid statistics of the outcome pair (x, y) under p(x,y) = h^2 Tr[rho F(x,y)].
// Entries "x" and "y" track X and Y with added noise sigma^2/4 and 1/(4 sigma^2);
// entries "x_phi_plus" and "x_phi_minus" track the rotated pair
// x cos(phi) +- y sin(phi) against X_{+-phi} with the symmetric added noise
// (1/4)|sin 2phi|, phi = arctan(sigma^2).
MomentReport moment_check(const JointCloner& cloner, const Ket& input,
                          const QuadratureGrid& grid);

// sqrt(2/pi) exp(-u^2/sigma^2 - sigma^2 v^2) at z = u + iv
struct GaussianWeight {
  double sigma = 1.0;

  double operator()(double u, double v) const;
  bool isotropic() const { return sigma == 1.0; }
};

// f~(w) = (1/pi) Int d^2z exp(w z* - w* z) f(z); self-dual weights make the
// two clones identical.
Cx symplectic_fourier(const std::function<double(double, double)>& f, Cx w);

struct FourierReport {
  double max_deviation = 0.0;       // max |f~ - f| over the probe grid
  bool self_dual = false;
  double added_variance_direct = 0.0;  // Re-axis variance of |f|^2
  double added_variance_dual = 0.0;    // Re-axis variance of |f~|^2
};

FourierReport fourier_selfdual_check(const std::function<double(double, double)>& f);
FourierReport fourier_selfdual_check(const GaussianWeight& weight);

}  // namespace clonometry::cv
