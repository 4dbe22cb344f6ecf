#include "clonometry/qubit_cloning.hpp"
#include "clonometry/spin_coherent.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace clonometry {

const MomentEntry& MomentReport::entry(const std::string& name) const {
  for (const auto& e : entries)
    if (e.observable == name) return e;
  throw std::out_of_range("MomentReport: no entry named " + name);
}

}  // namespace clonometry

namespace clonometry::qubit {

const Mat& pauli(int axis) {
  static const Mat sx = (Mat(2, 2) << 0, 1, 1, 0).finished();
  static const Mat sy = (Mat(2, 2) << 0, Cx(0, -1), Cx(0, 1), 0).finished();
  static const Mat sz = (Mat(2, 2) << 1, 0, 0, -1).finished();
  switch (axis) {
    case 0: return sx;
    case 1: return sy;
    case 2: return sz;
  }
  throw std::out_of_range("pauli: axis must be 0, 1 or 2");
}

Mat pauli_vector(const std::array<double, 3>& n) {
  return n[0] * pauli(0) + n[1] * pauli(1) + n[2] * pauli(2);
}

std::array<double, 3> bloch_vector(const Mat& rho) {
  std::array<double, 3> s{};
  for (int a = 0; a < 3; ++a) s[a] = (rho * pauli(a)).trace().real();
  return s;
}

long long symmetric_rank(int sites, int site_dim) {
  // C(site_dim + sites - 1, sites)
  long long r = 1;
  for (int k = 1; k <= sites; ++k) r = r * (site_dim - 1 + k) / k;
  return r;
}

Operator symmetric_projector(int sites, int site_dim) {
  if (sites < 1) throw std::invalid_argument("symmetric_projector: need sites >= 1");
  HilbertSpace space = HilbertSpace::uniform(sites, site_dim);
  const int dim = space.total_dim();

  // Group product-basis states by occupation signature; each group gives one
  // symmetrized ket (the equal-weight superposition of its members).
  std::map<std::vector<int>, std::vector<int>> groups;
  std::vector<int> levels(sites, 0);
  for (int idx = 0; idx < dim; ++idx) {
    int rest = idx;
    std::vector<int> occ(site_dim, 0);
    for (int k = sites - 1; k >= 0; --k) {
      levels[k] = rest % site_dim;
      rest /= site_dim;
    }
    for (int k = 0; k < sites; ++k) ++occ[levels[k]];
    groups[occ].push_back(idx);
  }

  Mat s = Mat::Zero(dim, dim);
  for (const auto& [occ, members] : groups) {
    Vec ket = Vec::Zero(dim);
    const double amp = 1.0 / std::sqrt(static_cast<double>(members.size()));
    for (int idx : members) ket(idx) = amp;
    s += ket * ket.adjoint();
  }
  return Operator{std::move(space), std::move(s)};
}

Operator symmetric_projector_recursive(int sites, int site_dim) {
  if (sites < 1) throw std::invalid_argument("symmetric_projector_recursive: need sites >= 1");
  HilbertSpace space = HilbertSpace::uniform(sites, site_dim);
  if (sites == 1) return identity(space);

  Operator prev = symmetric_projector_recursive(sites - 1, site_dim);
  Operator prev_ext = tensor(prev, identity(HilbertSpace::single(site_dim)));

  Mat acc = Mat::Identity(space.total_dim(), space.total_dim());
  for (int i = 0; i < sites - 1; ++i) {
    std::vector<int> perm(sites);
    for (int k = 0; k < sites; ++k) perm[k] = k;
    std::swap(perm[i], perm[sites - 1]);
    acc += permutation_operator(space, perm).mat;
  }
  return Operator{space, (acc * prev_ext.mat) / static_cast<double>(sites)};
}

Operator clone_density(const CloneParams& p, const Operator& rho_n) {
  if (p.n_in < 1 || p.m_out < p.n_in)
    throw std::invalid_argument("clone: need 1 <= N <= M");
  if (rho_n.space != HilbertSpace::qubits(p.n_in))
    throw std::invalid_argument("clone: input density must live on N qubits");

  Operator s_m = symmetric_projector(p.m_out, 2);
  Operator padded = p.m_out == p.n_in
      ? rho_n
      : tensor(rho_n, identity(HilbertSpace::qubits(p.m_out - p.n_in)));
  const double prefactor = static_cast<double>(p.n_in + 1) / (p.m_out + 1);
  return Operator{s_m.space, prefactor * (s_m.mat * padded.mat * s_m.mat)};
}

Operator clone(const CloneParams& p, const Ket& single_site) {
  if (single_site.space != HilbertSpace::qubits(1))
    throw std::invalid_argument("clone: input must be a single qubit ket");
  Ket in = single_site.normalized();
  return clone_density(p, projector(tensor_power(in, p.n_in)));
}

Rational fidelity_formula(int n, int m) {
  if (n < 1 || m < n) throw std::invalid_argument("fidelity_formula: need 1 <= N <= M");
  return Rational(static_cast<long long>(m) * (n + 1) + n,
                  static_cast<long long>(m) * (n + 2));
}

Rational shrinking_factor(int n, int m) {
  if (n < 1 || m < n) throw std::invalid_argument("shrinking_factor: need 1 <= N <= M");
  return Rational(n, m) * Rational(m + 2, n + 2);
}

std::array<SpinOutcome, 8> all_spin_outcomes() {
  std::array<SpinOutcome, 8> out;
  int k = 0;
  for (int mx : {1, -1})
    for (int my : {1, -1})
      for (int mz : {1, -1}) out[k++] = SpinOutcome{mx, my, mz};
  return out;
}

Operator product_spin_povm(const SpinOutcome& m, const std::array<int, 3>& axis_of_site) {
  const Mat id2 = Mat::Identity(2, 2);
  Operator out{HilbertSpace::qubits(1), Mat()};
  bool first = true;
  for (int site = 0; site < 3; ++site) {
    const int axis = axis_of_site[site];
    if (axis < 0 || axis > 2) throw std::out_of_range("product_spin_povm: bad axis");
    Mat factor = 0.5 * (id2 + static_cast<double>(m.component(axis)) * pauli(axis));
    if (first) {
      out = Operator{HilbertSpace::qubits(1), factor};
      first = false;
    } else {
      out = tensor(out, Operator{HilbertSpace::qubits(1), factor});
    }
  }
  return out;
}

Operator derived_povm(const SpinOutcome& m, const std::array<int, 3>& axis_of_site) {
  static const Operator s3 = symmetric_projector(3, 2);
  Operator omega = product_spin_povm(m, axis_of_site);
  Operator sandwiched{s3.space, s3.mat * omega.mat * s3.mat};
  Operator reduced = partial_trace(sandwiched, {0});
  reduced.mat *= 0.5;
  return reduced;
}

Mat derived_povm_closed_form(const SpinOutcome& m) {
  return 0.125 * (Mat::Identity(2, 2) +
                  (5.0 / 9.0) * pauli_vector({double(m.mx), double(m.my), double(m.mz)}));
}

Mat hypothetical_sharp_element(const SpinOutcome& m) {
  return 0.125 * (Mat::Identity(2, 2) +
                  pauli_vector({double(m.mx), double(m.my), double(m.mz)}));
}

MomentReport estimate_moments(const Operator& rho) {
  if (rho.space != HilbertSpace::qubits(1))
    throw std::invalid_argument("estimate_moments: single-qubit density required");

  MomentReport report;
  const auto outcomes = all_spin_outcomes();
  std::array<double, 8> p{};
  for (int k = 0; k < 8; ++k) {
    p[k] = (rho.mat * derived_povm(outcomes[k]).mat).trace().real();
    report.probability_total += p[k];
  }

  const char* names[3] = {"sigma_x", "sigma_y", "sigma_z"};
  const auto s_in = bloch_vector(rho.mat);
  double total = 0.0;
  for (int a = 0; a < 3; ++a) {
    MomentEntry e;
    e.observable = names[a];
    for (int k = 0; k < 8; ++k) {
      const double mk = outcomes[k].component(a);
      e.measured += mk * p[k];
      e.measured_second += mk * mk * p[k];
    }
    e.estimated = (9.0 / 5.0) * e.measured;
    e.expected = s_in[a];
    e.estimated_second = (81.0 / 25.0) * e.measured_second;
    e.expected_second = 1.0;  // sigma_a^2 = 1
    report.entries.push_back(e);
    // spin variance: <J_a^2>_e - <J_a>_e^2 with J_a = sigma_a / 2
    total += 0.25 * e.estimated_second - 0.25 * e.estimated * e.estimated;
  }
  report.total_uncertainty = total;
  const double s2 = s_in[0] * s_in[0] + s_in[1] * s_in[1] + s_in[2] * s_in[2];
  report.expected_total_uncertainty = 0.25 * (3.0 * 81.0 / 25.0 - s2);
  return report;
}

MomentReport estimate_moments(const Ket& input) {
  return estimate_moments(projector(input.normalized()));
}

// --- spin-coherent measurement ----------------------------------------------

namespace {

int two_j_of(double j) {
  const int two_j = static_cast<int>(std::lround(2.0 * j));
  if (two_j < 1 || std::abs(2.0 * j - two_j) > 1e-9)
    throw std::invalid_argument("spin value must be a positive half-integer");
  return two_j;
}

}  // namespace

Mat spin_matrix(double j, int axis) {
  const int two_j = two_j_of(j);
  const int dim = two_j + 1;
  Mat jz = Mat::Zero(dim, dim);
  Mat jp = Mat::Zero(dim, dim);  // raising
  for (int k = 0; k < dim; ++k) {
    const double m = j - k;
    jz(k, k) = m;
    if (k > 0) jp(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  switch (axis) {
    case 0: return 0.5 * (jp + jp.adjoint());
    case 1: return (jp - jp.adjoint()) / Cx(0, 2);
    case 2: return jz;
  }
  throw std::out_of_range("spin_matrix: axis must be 0, 1 or 2");
}

Ket spin_coherent_state(double j, double theta, double phi) {
  if (theta < -1e-12 || theta > std::numbers::pi + 1e-12)
    throw std::invalid_argument("spin_coherent_state: theta outside [0, pi]");
  const int dim = two_j_of(j) + 1;
  Vec lowest = Vec::Zero(dim);
  lowest(dim - 1) = 1.0;
  Vec rotated = matrix_exponential(-I_UNIT * theta * spin_matrix(j, 1)) * lowest;
  for (int k = 0; k < dim; ++k) rotated(k) *= std::exp(-I_UNIT * phi * (j - k));
  return Ket{HilbertSpace::single(dim), std::move(rotated)};
}

SphereRule sphere_rule(double j, int n_theta, int n_phi) {
  const int two_j = two_j_of(j);
  Quadrature1D gl = gauss_legendre(n_theta);
  SphereRule rule;
  rule.cos_theta = gl.nodes;
  rule.theta_weights = gl.weights;
  rule.phi.resize(n_phi);
  for (int k = 0; k < n_phi; ++k) rule.phi(k) = 2.0 * std::numbers::pi * k / n_phi;
  rule.measure_prefactor = (two_j + 1) / (4.0 * std::numbers::pi);
  return rule;
}

static CoherentMoments coherent_moments_impl(double j, const SphereRule& rule) {
  const int dim = two_j_of(j) + 1;
  const int n_phi = static_cast<int>(rule.phi.size());
  const double phi_weight = 2.0 * std::numbers::pi / n_phi;

  CoherentMoments cm;
  for (int a = 0; a < 3; ++a) {
    cm.first[a] = Mat::Zero(dim, dim);
    cm.second[a] = Mat::Zero(dim, dim);
  }
  Mat completeness = Mat::Zero(dim, dim);

  Vec lowest = Vec::Zero(dim);
  lowest(dim - 1) = 1.0;
  for (int it = 0; it < rule.cos_theta.size(); ++it) {
    const double u = rule.cos_theta(it);
    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - u * u));
    const double theta = std::acos(u);
    const Vec tilted = matrix_exponential(-I_UNIT * theta * spin_matrix(j, 1)) * lowest;
    for (int ip = 0; ip < n_phi; ++ip) {
      const double phi = rule.phi(ip);
      Vec ket = tilted;
      for (int k = 0; k < dim; ++k) ket(k) *= std::exp(-I_UNIT * phi * (j - k));
      const Mat proj = ket * ket.adjoint();
      const double w = rule.measure_prefactor * rule.theta_weights(it) * phi_weight;
      const double n_axis[3] = {sin_theta * std::cos(phi), sin_theta * std::sin(phi), u};
      completeness += w * proj;
      for (int a = 0; a < 3; ++a) {
        cm.first[a] += w * (j + 1.0) * n_axis[a] * proj;
        cm.second[a] += w * (j + 1.0) * (j + 1.0) * n_axis[a] * n_axis[a] * proj;
      }
    }
  }

  cm.completeness_residual = max_abs(completeness - Mat::Identity(dim, dim));

  // Measure the sign relating E1 to the bare spin components.
  double plus = 0.0, minus = 0.0;
  for (int a = 0; a < 3; ++a) {
    plus = std::max(plus, max_abs(cm.first[a] - spin_matrix(j, a)));
    minus = std::max(minus, max_abs(cm.first[a] + spin_matrix(j, a)));
  }
  cm.empirical_sign = minus < plus ? -1 : +1;
  cm.sign_residual = std::min(plus, minus);
  return cm;
}

CoherentMoments coherent_moment_operators(double j, int n_theta, int n_phi) {
  CoherentMoments cm = coherent_moments_impl(j, sphere_rule(j, n_theta, n_phi));
  if (cm.completeness_residual > tol(tolerances().quadrature))
    throw std::runtime_error("coherent_moment_operators: sphere rule does not resolve the identity");
  return cm;
}

double coherent_total_uncertainty(double j, const Ket& input) {
  const int dim = two_j_of(j) + 1;
  if (input.amps.size() != dim)
    throw std::invalid_argument("coherent_total_uncertainty: input dimension mismatch");
  const Vec psi = input.normalized().amps;
  double mean_sq = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double mean = (psi.adjoint() * spin_matrix(j, a) * psi).real()(0);
    mean_sq += mean * mean;
  }
  const double value =
      j * (j + 1) * (j + 1) / (j + 1.5) + 3.0 * (j + 1) * (j + 1) / (2.0 * j + 3.0) - mean_sq;
  if (value < 2.0 * j + 1.0 - 1e-9)
    throw std::runtime_error("coherent_total_uncertainty: bound 2j+1 violated");
  return value;
}

double coherent_total_uncertainty_quadrature(double j, const Ket& input,
                                             const CoherentMoments& moments) {
  const Vec psi = input.normalized().amps;
  double total = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double m1 = (psi.adjoint() * moments.first[a] * psi).real()(0);
    const double m2 = (psi.adjoint() * moments.second[a] * psi).real()(0);
    total += m2 - m1 * m1;
  }
  return total;
}

double coherent_uncertainty_bound(double j) { return 2.0 * j + 1.0; }

}  // namespace clonometry::qubit
