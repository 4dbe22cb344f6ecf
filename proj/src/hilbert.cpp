#include "clonometry/hilbert.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace clonometry {

Tolerances& tolerances() {
  static Tolerances t;
  return t;
}

double tol(double base) { return tolerances()(base); }

void set_tolerance_scale(double s) {
  if (s <= 0) throw std::invalid_argument("tolerance scale must be positive");
  tolerances().scale = s;
}

double tolerance_scale_from_env() {
  const char* raw = std::getenv("CLONOMETRY_TOLERANCE_SCALE");
  if (!raw) return 1.0;
  char* end = nullptr;
  double v = std::strtod(raw, &end);
  if (end == raw || v <= 0) return 1.0;
  return v;
}

HilbertSpace::HilbertSpace(std::vector<int> d) : dims(std::move(d)) {
  for (int dim : dims)
    if (dim < 1) throw std::invalid_argument("HilbertSpace: dimensions must be >= 1");
}

HilbertSpace HilbertSpace::qubits(int n) { return uniform(n, 2); }

HilbertSpace HilbertSpace::single(int d) { return HilbertSpace(std::vector<int>{d}); }

HilbertSpace HilbertSpace::uniform(int sites, int site_dim) {
  if (sites < 1) throw std::invalid_argument("HilbertSpace: need at least one site");
  return HilbertSpace(std::vector<int>(sites, site_dim));
}

int HilbertSpace::total_dim() const {
  long long d = 1;
  for (int dim : dims) {
    d *= dim;
    if (d > (1LL << 26)) throw std::length_error("HilbertSpace: dimension too large");
  }
  return static_cast<int>(d);
}

Ket Ket::normalized() const {
  double n = norm();
  if (n == 0) throw std::domain_error("cannot normalize the zero ket");
  return Ket{space, amps / n};
}

Ket basis_ket(const HilbertSpace& space, const std::vector<int>& levels) {
  if (static_cast<int>(levels.size()) != space.sites())
    throw std::invalid_argument("basis_ket: one level per site required");
  long long idx = 0;
  for (int k = 0; k < space.sites(); ++k) {
    if (levels[k] < 0 || levels[k] >= space.dims[k])
      throw std::out_of_range("basis_ket: level outside site dimension");
    idx = idx * space.dims[k] + levels[k];
  }
  Vec v = Vec::Zero(space.total_dim());
  v(idx) = 1.0;
  return Ket{space, std::move(v)};
}

Operator identity(const HilbertSpace& space) {
  return Operator{space, Mat::Identity(space.total_dim(), space.total_dim())};
}

Operator projector(const Ket& psi) {
  return Operator{psi.space, psi.amps * psi.amps.adjoint()};
}

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_hermitian(const Mat& m, double tolerance) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tolerance;
}

bool is_unitary(const Mat& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m * m.adjoint() - Mat::Identity(m.rows(), m.rows())) <= tolerance;
}

bool is_projector(const Mat& m, double tolerance) {
  return is_hermitian(m, tolerance) && max_abs(m * m - m) <= tolerance;
}

bool is_density(const Mat& m, double trace_tolerance, double eig_floor) {
  if (!is_hermitian(m, tol(tolerances().hermiticity))) return false;
  if (std::abs(m.trace().real() - 1.0) > trace_tolerance) return false;
  if (std::abs(m.trace().imag()) > trace_tolerance) return false;
  return min_eigenvalue(m) >= eig_floor;
}

double min_eigenvalue(const Mat& hermitian) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double trace_distance(const Mat& a, const Mat& b) {
  Mat d = a - b;
  if (!is_hermitian(d, 1e-9 * (1.0 + max_abs(d))))
    throw std::invalid_argument("trace_distance: difference is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(d, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double fidelity(const Vec& psi, const Mat& rho) {
  return (psi.adjoint() * rho * psi).real()(0) / psi.squaredNorm();
}

double ket_fidelity(const Vec& a, const Vec& b) {
  double na = a.squaredNorm(), nb = b.squaredNorm();
  if (na == 0 || nb == 0) throw std::domain_error("ket_fidelity: zero vector");
  Cx ov = a.adjoint() * b;
  return std::norm(ov) / (na * nb);
}

HilbertSpace tensor(const HilbertSpace& a, const HilbertSpace& b) {
  std::vector<int> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  return HilbertSpace(std::move(dims));
}

Ket tensor(const Ket& a, const Ket& b) {
  Vec v = Eigen::kroneckerProduct(a.amps, b.amps);
  return Ket{tensor(a.space, b.space), std::move(v)};
}

Operator tensor(const Operator& a, const Operator& b) {
  Mat m = Eigen::kroneckerProduct(a.mat, b.mat);
  return Operator{tensor(a.space, b.space), std::move(m)};
}

Ket tensor_power(const Ket& a, int copies) {
  if (copies < 1) throw std::invalid_argument("tensor_power: copies must be >= 1");
  Ket out = a;
  for (int k = 1; k < copies; ++k) out = tensor(out, a);
  return out;
}

Operator tensor_power(const Operator& a, int copies) {
  if (copies < 1) throw std::invalid_argument("tensor_power: copies must be >= 1");
  Operator out = a;
  for (int k = 1; k < copies; ++k) out = tensor(out, a);
  return out;
}

namespace {

std::vector<long long> strides_for(const HilbertSpace& space) {
  std::vector<long long> s(space.sites());
  long long acc = 1;
  for (int k = space.sites() - 1; k >= 0; --k) {
    s[k] = acc;
    acc *= space.dims[k];
  }
  return s;
}

}  // namespace

Operator partial_trace(const Operator& op, const std::vector<int>& keep) {
  const HilbertSpace& space = op.space;
  const int sites = space.sites();
  for (size_t i = 0; i + 1 < keep.size(); ++i)
    if (keep[i] >= keep[i + 1])
      throw std::invalid_argument("partial_trace: keep list must be strictly ascending");
  for (int k : keep)
    if (k < 0 || k >= sites) throw std::out_of_range("partial_trace: site index out of range");
  if (op.mat.rows() != space.total_dim() || op.mat.cols() != space.total_dim())
    throw std::invalid_argument("partial_trace: matrix does not match space");

  std::vector<int> traced;
  for (int k = 0; k < sites; ++k)
    if (std::find(keep.begin(), keep.end(), k) == keep.end()) traced.push_back(k);

  const auto strides = strides_for(space);
  std::vector<int> keep_dims, traced_dims;
  long long keep_dim = 1, traced_dim = 1;
  for (int k : keep) { keep_dims.push_back(space.dims[k]); keep_dim *= space.dims[k]; }
  for (int k : traced) { traced_dims.push_back(space.dims[k]); traced_dim *= space.dims[k]; }

  // Flat offsets of every keep-index combination and every traced combination.
  auto offsets = [&](const std::vector<int>& sel, const std::vector<int>& sel_dims, long long n) {
    std::vector<long long> off(n, 0);
    std::vector<int> counter(sel.size(), 0);
    for (long long i = 0; i < n; ++i) {
      long long o = 0;
      for (size_t k = 0; k < sel.size(); ++k) o += counter[k] * strides[sel[k]];
      off[i] = o;
      for (int k = static_cast<int>(sel.size()) - 1; k >= 0; --k) {
        if (++counter[k] < sel_dims[k]) break;
        counter[k] = 0;
      }
    }
    return off;
  };
  const auto keep_off = offsets(keep, keep_dims, keep_dim);
  const auto traced_off = offsets(traced, traced_dims, traced_dim);

  Mat out = Mat::Zero(keep_dim, keep_dim);
  for (long long r = 0; r < keep_dim; ++r)
    for (long long c = 0; c < keep_dim; ++c) {
      Cx acc = 0;
      for (long long t = 0; t < traced_dim; ++t)
        acc += op.mat(keep_off[r] + traced_off[t], keep_off[c] + traced_off[t]);
      out(r, c) = acc;
    }

  HilbertSpace out_space = keep.empty() ? HilbertSpace::single(1) : HilbertSpace(keep_dims);
  return Operator{std::move(out_space), std::move(out)};
}

Operator permutation_operator(const HilbertSpace& space, const std::vector<int>& perm) {
  const int sites = space.sites();
  if (static_cast<int>(perm.size()) != sites)
    throw std::invalid_argument("permutation_operator: permutation size mismatch");
  std::vector<bool> seen(sites, false);
  for (int p : perm) {
    if (p < 0 || p >= sites || seen[p])
      throw std::invalid_argument("permutation_operator: not a permutation");
    seen[p] = true;
  }
  for (int k = 0; k < sites; ++k)
    if (space.dims[k] != space.dims[perm[k]])
      throw std::invalid_argument("permutation_operator: site dimensions must match");

  const auto strides = strides_for(space);
  const int dim = space.total_dim();
  Mat out = Mat::Zero(dim, dim);
  std::vector<int> levels(sites, 0);
  for (int col = 0; col < dim; ++col) {
    long long rest = col;
    for (int k = 0; k < sites; ++k) {
      levels[k] = static_cast<int>(rest / strides[k]);
      rest %= strides[k];
    }
    long long row = 0;
    for (int k = 0; k < sites; ++k) row += levels[k] * strides[perm[k]];
    out(row, col) = 1.0;
  }
  return Operator{space, std::move(out)};
}

Mat matrix_exponential(const Mat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix_exponential: square matrix required");
  return m.exp();
}

}  // namespace clonometry
