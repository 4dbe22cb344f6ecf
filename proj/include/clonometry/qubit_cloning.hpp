#pragma once

#include <array>

#include "clonometry/hilbert.hpp"
#include "clonometry/rational.hpp"
#include "clonometry/report.hpp"

namespace clonometry::qubit {

const Mat& pauli(int axis);  // 0,1,2 -> x,y,z
Mat pauli_vector(const std::array<double, 3>& n);  // n . sigma
std::array<double, 3> bloch_vector(const Mat& rho);

// Projector onto the completely symmetric subspace of `sites` systems of
// dimension site_dim, assembled from symmetrized occupation-number kets.
Operator symmetric_projector(int sites, int site_dim = 2);

// Same projector through the recursion
//   S_M = (1/M) (1 + sum_i swap(i, M)) (S_{M-1} x 1),
// kept as an independent cross-check of the direct construction.
Operator symmetric_projector_recursive(int sites, int site_dim = 2);

long long symmetric_rank(int sites, int site_dim);  // C(site_dim + M - 1, M)

struct CloneParams {
  int n_in = 1;
  int m_out = 2;
};

// Universal N -> M qubit cloner applied to an N-site input density:
//   rho_M = (N+1)/(M+1) S_M (rho_N x 1^{M-N}) S_M.
Operator clone_density(const CloneParams& p, const Operator& rho_n);
// Convenience wrapper for a single-site pure input, tensored to N copies.
Operator clone(const CloneParams& p, const Ket& single_site);

Rational fidelity_formula(int n, int m);   // (M(N+1)+N) / (M(N+2))
Rational shrinking_factor(int n, int m);   // (N/M) (M+2)/(N+2)

struct SpinOutcome {
  int mx = 1, my = 1, mz = 1;  // each +-1
  int component(int axis) const { return axis == 0 ? mx : axis == 1 ? my : mz; }
};
std::array<SpinOutcome, 8> all_spin_outcomes();

// Product POVM on the three clones, one Pauli axis per site:
//   (1/8) (1 + m_x s_x) x (1 + m_y s_y) x (1 + m_z s_z).
// axis_of_site reassigns which clone measures which axis.
Operator product_spin_povm(const SpinOutcome& m,
                           const std::array<int, 3>& axis_of_site = {0, 1, 2});

// Single-site POVM induced through the 1->3 cloner:
//   Pi(m) = (1/2) Tr_{2,3} [ S_3 Omega(m) S_3 ].
Operator derived_povm(const SpinOutcome& m,
                      const std::array<int, 3>& axis_of_site = {0, 1, 2});

// Closed form the derived POVM must reproduce: (1/8)[1 + (5/9) m . sigma].
Mat derived_povm_closed_form(const SpinOutcome& m);

// Hypothetical "ideal" discrete element (1/8)[1 + m . sigma]; not positive.
Mat hypothetical_sharp_element(const SpinOutcome& m);

// Joint spin estimation through the derived POVM: outcome means rescaled by
// 9/5 (first moments) and 81/25 (second moments), plus the total uncertainty
// sum_a [ <J_a^2>_e - <J_a>_e^2 ].
MomentReport estimate_moments(const Operator& rho);
MomentReport estimate_moments(const Ket& input);

}  // namespace clonometry::qubit
