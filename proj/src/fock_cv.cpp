#include "clonometry/fock_cv.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

#include "clonometry/tolerances.hpp"

namespace clonometry::cv {

namespace {

void check_space(const FockSpace& space) {
  if (space.nmax < 1) throw std::invalid_argument("FockSpace: nmax must be >= 1");
}

// dim x dim views of the c-mode blocks of a (dim^2 x dim) factor, adjointed
// so that sum_n w(n) block[n] equals B+ (w (x) 1).
std::vector<Mat> adjoint_blocks(const Mat& b, int dim) {
  std::vector<Mat> blocks(dim);
  for (int n = 0; n < dim; ++n) blocks[n] = b.middleRows(n * dim, dim).adjoint();
  return blocks;
}

Mat contract_mode_c(const std::vector<Mat>& blocks, const Vec& weights) {
  const int dim = static_cast<int>(blocks.size());
  Mat out = Mat::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) out.noalias() += weights(n) * blocks[n];
  return out;
}

Mat reshape_two_mode(const Vec& v, int dim) {
  Mat m(dim, dim);
  for (int n = 0; n < dim; ++n) m.row(n) = v.segment(n * dim, dim).transpose();
  return m;
}

Vec flatten_two_mode(const Mat& m) {
  const int dim = static_cast<int>(m.rows());
  Vec v(dim * dim);
  for (int n = 0; n < dim; ++n) v.segment(n * dim, dim) = m.row(n).transpose();
  return v;
}

}  // namespace

Mat lowering(const FockSpace& space) {
  check_space(space);
  Mat a = Mat::Zero(space.dim(), space.dim());
  for (int n = 1; n <= space.nmax; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

Mat number_operator(const FockSpace& space) {
  Mat n = Mat::Zero(space.dim(), space.dim());
  for (int k = 0; k <= space.nmax; ++k) n(k, k) = double(k);
  return n;
}

Mat quadrature_x(const FockSpace& space) {
  Mat a = lowering(space);
  return 0.5 * (a + a.adjoint());
}

Mat quadrature_y(const FockSpace& space) {
  Mat a = lowering(space);
  return (a - a.adjoint()) / (2.0 * I_UNIT);
}

Mat quadrature_rot(const FockSpace& space, double phi) {
  return std::cos(phi) * quadrature_x(space) + std::sin(phi) * quadrature_y(space);
}

ModeOperators mode_operators(const FockSpace& space) {
  return ModeOperators{lowering(space), quadrature_x(space), quadrature_y(space)};
}

Mat displacement(const FockSpace& space, Cx alpha, std::vector<std::string>* warnings) {
  check_space(space);
  if (warnings && std::abs(alpha) > std::sqrt(double(space.nmax)) / 3.0)
    warnings->push_back("displacement amplitude " + std::to_string(std::abs(alpha)) +
                        " exceeds sqrt(nmax)/3; matrix elements degraded by truncation");
  Mat a = lowering(space);
  return matrix_exponential(alpha * a.adjoint() - std::conj(alpha) * a);
}

Mat squeeze(const FockSpace& space, double r) {
  Mat a = lowering(space);
  Mat a2 = a * a;
  return matrix_exponential(0.5 * r * (a2.adjoint() - a2));
}

Vec coherent_amplitudes(const FockSpace& space, Cx alpha) {
  check_space(space);
  Vec amps(space.dim());
  amps(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n <= space.nmax; ++n) amps(n) = amps(n - 1) * alpha / std::sqrt(double(n));
  return amps;
}

Ket coherent_ket(const FockSpace& space, Cx alpha) {
  return Ket{space.single(), coherent_amplitudes(space, alpha)};
}

Mat beamsplitter_v(const FockSpace& space) {
  check_space(space);
  const int dim = space.dim();
  const double theta = std::numbers::pi / 4.0;
  Mat v = Mat::Zero(dim * dim, dim * dim);
  for (int total = 0; total <= 2 * space.nmax; ++total) {
    const int kmin = std::max(0, total - space.nmax);
    const int kmax = std::min(total, space.nmax);
    const int size = kmax - kmin + 1;
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(size, size);
    for (int k = kmin; k < kmax; ++k) {
      const double coupling = theta * std::sqrt(double(k + 1) * double(total - k));
      gen(k + 1 - kmin, k - kmin) = coupling;
      gen(k - kmin, k + 1 - kmin) = -coupling;
    }
    Eigen::MatrixXd block = matrix_exponential(gen.cast<Cx>()).real();
    for (int k = kmin; k <= kmax; ++k)
      for (int l = kmin; l <= kmax; ++l)
        v(k * dim + (total - k), l * dim + (total - l)) = block(k - kmin, l - kmin);
  }
  return v;
}

Ket twin_beam(const FockSpace& space, double lambda) {
  check_space(space);
  if (std::abs(lambda) >= 1.0) throw std::invalid_argument("twin_beam: |lambda| must be < 1");
  const int dim = space.dim();
  Vec amps = Vec::Zero(dim * dim);
  double coeff = std::sqrt(1.0 - lambda * lambda);
  for (int n = 0; n <= space.nmax; ++n) {
    amps(n * dim + n) = coeff;
    coeff *= -lambda;
  }
  return Ket{space.modes(2), amps};
}

double twin_beam_mean_photons(double lambda) {
  return 2.0 * lambda * lambda / (1.0 - lambda * lambda);
}

Mat cloner_unitary_u(const FockSpace& space) {
  check_space(space);
  if (space.nmax > 12)
    throw std::invalid_argument("cloner_unitary_u: nmax > 12 is not dense-feasible");
  const int dim = space.dim();
  Mat a = lowering(space);
  Mat id = Mat::Identity(dim, dim);
  auto three = [&](const Mat& mc, const Mat& ma, const Mat& mb) {
    return Eigen::kroneckerProduct(Eigen::kroneckerProduct(mc, ma).eval(), mb).eval();
  };
  Mat gen = three(a, a.adjoint(), id) + three(a, id, a) -
            three(a.adjoint(), a, id) - three(a.adjoint(), id, a.adjoint());
  return matrix_exponential(gen);
}

JointCloner make_joint_cloner(const FockSpace& space, double sigma) {
  check_space(space);
  if (sigma <= 0.0) throw std::invalid_argument("make_joint_cloner: sigma must be positive");
  const int dim = space.dim();
  Mat v = beamsplitter_v(space);
  Mat s = squeeze(space, std::log(sigma));
  Mat embedding = v.leftCols(dim);
  Mat b(dim * dim, dim);
  for (int col = 0; col < dim; ++col) {
    Mat m = reshape_two_mode(embedding.col(col), dim);
    b.col(col) = flatten_two_mode(s * m * s.transpose());
  }
  return JointCloner{space, sigma, std::move(embedding), std::move(b)};
}

Mat projector_pca(const FockSpace& space, double sigma) {
  return make_joint_cloner(space, sigma).projector();
}

Mat projector_displacement_integral(const FockSpace& space) {
  check_space(space);
  const int dim = space.dim();
  const Quadrature1D gh = gauss_hermite(41);
  const int n = static_cast<int>(gh.nodes.size());
  // substitute z = s/sqrt(2): the Gaussian of the displacement matrix elements
  // themselves then supplies the Gauss-Hermite weight and the residual factor
  // is polynomial, inside the exactness degree of the 41-node rule.
  // nodes beyond the radius only probe cutoff reflection artifacts of the
  // truncated displacement; the true integrand there is Gaussian-dead
  const double radius_sq = 0.5 * space.nmax;
  Mat p = Mat::Zero(dim * dim, dim * dim);
  Mat term(dim * dim, dim * dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int key = i * n + j;
      const int pair_key = (n - 1 - i) * n + (n - 1 - j);
      if (key > pair_key) continue;
      const Cx z = Cx(gh.nodes[i], gh.nodes[j]) / std::sqrt(2.0);
      if (std::norm(z) > radius_sq) continue;
      const double weight = gh.weights[i] * gh.weights[j] *
                            std::exp(std::norm(z)) / std::numbers::pi;
      Mat d = displacement(space, z);
      term = Eigen::kroneckerProduct(d.adjoint().eval(), d);
      if (key == pair_key) {
        p.noalias() += weight * term;
      } else {
        p.noalias() += weight * term;
        p.noalias() += weight * term.adjoint();
      }
    }
  }
  return p;
}

Operator clone_channel_cv(const JointCloner& cloner, const Ket& input,
                          std::vector<std::string>* warnings) {
  const int dim = cloner.space.dim();
  if (input.amps.size() != dim)
    throw std::invalid_argument("clone_channel_cv: input dimension mismatch");
  const double tail = std::abs(input.amps(dim - 1));
  if (warnings && tail > 1e-4)
    warnings->push_back("input truncation tail " + std::to_string(tail * tail) +
                        " at the cutoff level");
  auto blocks = adjoint_blocks(cloner.isometry, dim);
  Mat e = contract_mode_c(blocks, input.amps);
  Mat m = e * e.adjoint();
  const double trace = 0.5 * m.trace().real();
  if (warnings && std::abs(trace - 1.0) > tol(tolerances().truncation_trace))
    warnings->push_back("clone channel trace deviation " + std::to_string(trace - 1.0));
  if (std::abs(trace - 1.0) > 1e-2)
    throw std::runtime_error("clone_channel_cv: truncation failure, trace deviation " +
                             std::to_string(trace - 1.0));
  Mat rho = 0.5 * (cloner.isometry * m * cloner.isometry.adjoint());
  return Operator{cloner.space.modes(2), std::move(rho)};
}

Operator displacement_mixture(const FockSpace& space, const Ket& input, double sigma) {
  const int dim = space.dim();
  if (input.amps.size() != dim)
    throw std::invalid_argument("displacement_mixture: input dimension mismatch");
  const Quadrature1D gh = gauss_hermite(41);
  const int n = static_cast<int>(gh.nodes.size());
  Mat rho = input.amps * input.amps.adjoint();
  Mat out = Mat::Zero(dim, dim);
  const double su = sigma / std::sqrt(2.0);
  const double sv = 1.0 / (sigma * std::sqrt(2.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Cx z(su * gh.nodes[i], sv * gh.nodes[j]);
      const double weight = gh.weights[i] * gh.weights[j] / std::numbers::pi;
      Mat d = displacement(space, z);
      out.noalias() += weight * (d.adjoint() * rho * d);
    }
  }
  return Operator{space.single(), std::move(out)};
}

Mat joint_povm_f(const JointCloner& cloner, double x, double y) {
  const int dim = cloner.space.dim();
  // the squeeze acts on delta-normalized quadrature kets by exact rescaling,
  // S(r)+|x>_X = e^{-r/2}|x/sigma>_X and S(r)+|y>_Y = e^{r/2}|y sigma>_Y,
  // so pull it into the ket arguments instead of applying the truncated matrix
  Eigen::VectorXd psi_x = quadrature_eigenstate(cloner.space, x / cloner.sigma);
  Vec psi_y = quadrature_eigenstate_y(cloner.space, y * cloner.sigma);
  Vec point(dim * dim);
  for (int n = 0; n < dim; ++n) point.segment(n * dim, dim) = psi_x(n) * psi_y;
  Vec g = cloner.isometry * (cloner.embedding.adjoint() * point);
  Mat gm = reshape_two_mode(g, dim);
  return 0.5 * (gm * gm.adjoint());
}

Eigen::VectorXd quadrature_eigenstate(const FockSpace& space, double x) {
  check_space(space);
  Eigen::VectorXd psi(space.dim());
  psi(0) = std::pow(2.0 / std::numbers::pi, 0.25) * std::exp(-x * x);
  if (space.nmax >= 1) psi(1) = 2.0 * x * psi(0);
  for (int n = 1; n < space.nmax; ++n)
    psi(n + 1) = (2.0 * x * psi(n) - std::sqrt(double(n)) * psi(n - 1)) /
                 std::sqrt(double(n + 1));
  return psi;
}

Vec quadrature_eigenstate_y(const FockSpace& space, double y) {
  Eigen::VectorXd psi = quadrature_eigenstate(space, y);
  Vec out(space.dim());
  Cx phase{1.0, 0.0};
  for (int n = 0; n <= space.nmax; ++n) {
    out(n) = phase * psi(n);
    phase *= I_UNIT;
  }
  return out;
}

Eigen::MatrixXd eigenfunction_table(int nmax, const QuadratureGrid& grid) {
  const int npts = static_cast<int>(grid.points.size());
  Eigen::MatrixXd table(nmax + 1, npts);
  FockSpace space{nmax};
  for (int i = 0; i < npts; ++i) table.col(i) = quadrature_eigenstate(space, grid.points[i]);
  return table;
}

namespace {

Vec fock_phases(int dim) {
  Vec phases(dim);
  Cx phase{1.0, 0.0};
  for (int n = 0; n < dim; ++n) {
    phases(n) = phase;
    phase *= I_UNIT;
  }
  return phases;
}

}  // namespace

Mat povm_completeness_sum(const JointCloner& cloner, const QuadratureGrid& grid) {
  const int dim = cloner.space.dim();
  // outcome kets enter through the squeeze as exactly rescaled arguments
  QuadratureGrid grid_x = grid, grid_y = grid;
  grid_x.points /= cloner.sigma;
  grid_y.points *= cloner.sigma;
  Eigen::MatrixXd table_x = eigenfunction_table(cloner.space.nmax, grid_x);
  Eigen::MatrixXd table_y = eigenfunction_table(cloner.space.nmax, grid_y);
  Mat resolution = (grid.h * table_x * table_x.transpose()).cast<Cx>();
  Vec phases = fock_phases(dim);
  Mat resolution_y = phases.asDiagonal() *
                     (grid.h * table_y * table_y.transpose()).cast<Cx>() *
                     phases.conjugate().asDiagonal();
  const Mat& b = cloner.isometry;
  Mat kb(dim * dim, dim);
  for (int col = 0; col < dim; ++col) {
    Mat m = reshape_two_mode(cloner.embedding.col(col), dim);
    kb.col(col) = flatten_two_mode(resolution * m * resolution_y.transpose());
  }
  Mat core = cloner.embedding.adjoint() * kb;
  Mat out = Mat::Zero(dim, dim);
  Mat slice(dim, dim);
  for (int k = 0; k < dim; ++k) {
    for (int n = 0; n < dim; ++n) slice.row(n) = b.row(n * dim + k);
    out.noalias() += 0.5 * (slice * core * slice.adjoint());
  }
  return out;
}

MomentReport moment_check(const JointCloner& cloner, const Ket& input,
                          const QuadratureGrid& grid) {
  const int dim = cloner.space.dim();
  if (input.amps.size() != dim)
    throw std::invalid_argument("moment_check: input dimension mismatch");
  const int npts = static_cast<int>(grid.points.size());
  const double phi = std::atan(cloner.sigma * cloner.sigma);

  auto blocks = adjoint_blocks(cloner.isometry, dim);
  auto embed_blocks = adjoint_blocks(cloner.embedding, dim);
  Mat e = contract_mode_c(blocks, input.amps);
  Mat r = e * e.adjoint();
  // outcome kets carry the squeeze as exact argument rescaling
  QuadratureGrid grid_x = grid, grid_y = grid;
  grid_x.points /= cloner.sigma;
  grid_y.points *= cloner.sigma;
  Mat table = eigenfunction_table(cloner.space.nmax, grid_x).cast<Cx>();
  Mat table_y = fock_phases(dim).asDiagonal() *
                eigenfunction_table(cloner.space.nmax, grid_y).cast<Cx>();

  double s0 = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  Mat w(dim, npts), z(dim, npts);
  for (int ix = 0; ix < npts; ++ix) {
    const double x = grid.points[ix];
    Mat ax = contract_mode_c(embed_blocks, table.col(ix));
    w.noalias() = ax * table_y;
    z.noalias() = r * w;
    double row0 = 0.0, row1 = 0.0, row2 = 0.0;
    for (int iy = 0; iy < npts; ++iy) {
      const double y = grid.points[iy];
      const double p = 0.5 * grid.h * grid.h * std::real(w.col(iy).dot(z.col(iy)));
      row0 += p;
      row1 += y * p;
      row2 += y * y * p;
    }
    s0 += row0;
    sx += x * row0;
    sy += row1;
    sxx += x * x * row0;
    syy += row2;
    sxy += x * row1;
  }

  MomentReport report;
  report.probability_total = s0;
  if (std::abs(s0 - 1.0) > 1e-3)
    report.warnings.push_back("outcome distribution mass " + std::to_string(s0) +
                              "; grid or cutoff too small");
  const double ex = sx / s0, ey = sy / s0;
  const double exx = sxx / s0, eyy = syy / s0, exy = sxy / s0;
  const double c = std::cos(phi), s = std::sin(phi);
  const double added_rot = 0.25 * std::abs(std::sin(2.0 * phi));
  const double sig2 = cloner.sigma * cloner.sigma;

  Mat xq = quadrature_x(cloner.space), yq = quadrature_y(cloner.space);
  auto push_entry = [&](const std::string& name, const Mat& obs, double measured,
                        double measured_second, double added) {
    const double in_first = std::real(input.amps.dot(obs * input.amps));
    const double in_second = std::real(input.amps.dot(obs * (obs * input.amps)));
    MomentEntry entry;
    entry.observable = name;
    entry.measured = measured;
    entry.estimated = measured;
    entry.expected = in_first;
    entry.measured_second = measured_second;
    entry.estimated_second = measured_second;
    entry.expected_second = in_second + added;
    entry.added_noise = (measured_second - measured * measured) -
                        (in_second - in_first * in_first);
    entry.expected_added_noise = added;
    report.total_uncertainty += measured_second - measured * measured;
    report.expected_total_uncertainty += in_second - in_first * in_first + added;
    report.entries.push_back(entry);
  };

  push_entry("x", xq, ex, exx, 0.25 * sig2);
  push_entry("y", yq, ey, eyy, 0.25 / sig2);
  // the joint-pair figure counts only the rotated observables
  report.total_uncertainty = 0.0;
  report.expected_total_uncertainty = 0.0;
  push_entry("x_phi_plus", c * xq + s * yq, c * ex + s * ey,
             c * c * exx + s * s * eyy + 2.0 * c * s * exy, added_rot);
  push_entry("x_phi_minus", c * xq - s * yq, c * ex - s * ey,
             c * c * exx + s * s * eyy - 2.0 * c * s * exy, added_rot);
  return report;
}

double GaussianWeight::operator()(double u, double v) const {
  return std::sqrt(2.0 / std::numbers::pi) *
         std::exp(-u * u / (sigma * sigma) - sigma * sigma * v * v);
}

namespace {

constexpr double kFourierHalfWidth = 10.0;
constexpr double kFourierStep = 0.05;

Eigen::MatrixXd sample_weight(const std::function<double(double, double)>& f,
                              const QuadratureGrid& grid) {
  const int npts = static_cast<int>(grid.points.size());
  Eigen::MatrixXd values(npts, npts);
  for (int i = 0; i < npts; ++i)
    for (int j = 0; j < npts; ++j) values(i, j) = f(grid.points[i], grid.points[j]);
  return values;
}

// out(iq, ip) = f~(p_pts[ip] + i q_pts[iq]) where values(i, j) = f(u_i, v_j)
Mat transform_table(const Eigen::MatrixXd& values, const QuadratureGrid& in,
                    const std::vector<double>& p_pts, const std::vector<double>& q_pts) {
  const int nin = static_cast<int>(in.points.size());
  Mat left(static_cast<int>(q_pts.size()), nin);
  Mat right(nin, static_cast<int>(p_pts.size()));
  for (int i = 0; i < nin; ++i) {
    for (size_t k = 0; k < q_pts.size(); ++k)
      left(static_cast<int>(k), i) = std::exp(Cx(0.0, 2.0 * q_pts[k] * in.points[i]));
    for (size_t k = 0; k < p_pts.size(); ++k)
      right(i, static_cast<int>(k)) = std::exp(Cx(0.0, -2.0 * p_pts[k] * in.points[i]));
  }
  const double scale = in.h * in.h / std::numbers::pi;
  return scale * (left * values.cast<Cx>() * right);
}

}  // namespace

Cx symplectic_fourier(const std::function<double(double, double)>& f, Cx w) {
  QuadratureGrid grid = uniform_grid(kFourierHalfWidth, kFourierStep);
  Eigen::MatrixXd values = sample_weight(f, grid);
  return transform_table(values, grid, {w.real()}, {w.imag()})(0, 0);
}

FourierReport fourier_selfdual_check(const std::function<double(double, double)>& f) {
  QuadratureGrid grid = uniform_grid(kFourierHalfWidth, kFourierStep);
  Eigen::MatrixXd values = sample_weight(f, grid);

  std::vector<double> probe;
  for (int k = -4; k <= 4; ++k) probe.push_back(0.375 * k);
  Mat table = transform_table(values, grid, probe, probe);

  FourierReport report;
  for (size_t iq = 0; iq < probe.size(); ++iq)
    for (size_t ip = 0; ip < probe.size(); ++ip) {
      const double direct = f(probe[ip], probe[iq]);
      report.max_deviation =
          std::max(report.max_deviation,
                   std::abs(table(static_cast<int>(iq), static_cast<int>(ip)) - direct));
    }
  report.self_dual = report.max_deviation <= tol(tolerances().quadrature);

  auto variance = [&](auto&& density) {
    double mass = 0.0, mean = 0.0, second = 0.0;
    for (int i = 0; i < values.rows(); ++i)
      for (int j = 0; j < values.cols(); ++j) {
        const double u = grid.points[i];
        const double d = density(i, j);
        mass += d;
        mean += u * d;
        second += u * u * d;
      }
    mean /= mass;
    return second / mass - mean * mean;
  };
  report.added_variance_direct =
      variance([&](int i, int j) { return values(i, j) * values(i, j); });

  QuadratureGrid dual_grid = uniform_grid(6.0, 0.1);
  std::vector<double> dual_pts(dual_grid.points.data(),
                               dual_grid.points.data() + dual_grid.points.size());
  Mat dual = transform_table(values, grid, dual_pts, dual_pts);
  double mass = 0.0, mean = 0.0, second = 0.0;
  for (int iq = 0; iq < dual.rows(); ++iq)
    for (int ip = 0; ip < dual.cols(); ++ip) {
      const double u = dual_grid.points[ip];
      const double d = std::norm(dual(iq, ip));
      mass += d;
      mean += u * d;
      second += u * u * d;
    }
  mean /= mass;
  report.added_variance_dual = second / mass - mean * mean;
  return report;
}

FourierReport fourier_selfdual_check(const GaussianWeight& weight) {
  return fourier_selfdual_check(
      [weight](double u, double v) { return weight(u, v); });
}

}  // namespace clonometry::cv
