#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "clonometry/tolerances.hpp"

namespace clonometry {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr Cx I_UNIT{0.0, 1.0};

// Composite Hilbert space: one dimension per subsystem. Flattening is
// row-major: the leftmost factor varies slowest, so for dims {d0, d1} the
// basis index of |i0, i1> is i0*d1 + i1.
struct HilbertSpace {
  std::vector<int> dims;

  HilbertSpace() = default;
  explicit HilbertSpace(std::vector<int> d);
  static HilbertSpace qubits(int n);
  static HilbertSpace single(int d);
  static HilbertSpace uniform(int sites, int site_dim);

  int sites() const { return static_cast<int>(dims.size()); }
  int total_dim() const;
  bool operator==(const HilbertSpace&) const = default;
};

struct Ket {
  HilbertSpace space;
  Vec amps;

  double norm() const { return amps.norm(); }
  Ket normalized() const;
};

struct Operator {
  HilbertSpace space;
  Mat mat;
};

Ket basis_ket(const HilbertSpace& space, const std::vector<int>& levels);
Operator identity(const HilbertSpace& space);
Operator projector(const Ket& psi);  // |psi><psi|

// --- structure checks -------------------------------------------------------
double max_abs(const Mat& m);
bool is_hermitian(const Mat& m, double tolerance);
bool is_unitary(const Mat& m, double tolerance);
bool is_projector(const Mat& m, double tolerance);
bool is_density(const Mat& m, double trace_tolerance, double eig_floor);
double min_eigenvalue(const Mat& hermitian);

// Trace norm of (a - b)/2 for Hermitian a, b.
double trace_distance(const Mat& a, const Mat& b);
double fidelity(const Vec& psi, const Mat& rho);  // <psi|rho|psi>, psi normalized
double ket_fidelity(const Vec& a, const Vec& b);  // |<a|b>|^2 after normalization

// --- composition ------------------------------------------------------------
HilbertSpace tensor(const HilbertSpace& a, const HilbertSpace& b);
Ket tensor(const Ket& a, const Ket& b);
Operator tensor(const Operator& a, const Operator& b);
Ket tensor_power(const Ket& a, int copies);
Operator tensor_power(const Operator& a, int copies);

// Trace out every subsystem not listed in `keep` (0-based, strictly
// ascending). The result keeps the listed subsystems in their original order.
Operator partial_trace(const Operator& op, const std::vector<int>& keep);

// Unitary representation of a site permutation: perm[k] is the destination of
// site k, so the operator maps |i_0 .. i_{M-1}> to the ket whose perm[k]-th
// slot holds i_k. Composition satisfies P(p) P(q) = P(p after q).
Operator permutation_operator(const HilbertSpace& space, const std::vector<int>& perm);

Mat matrix_exponential(const Mat& m);

}  // namespace clonometry
