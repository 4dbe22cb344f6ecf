#include "clonometry/werner.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace clonometry::werner {

namespace {

void check_weight(const ThermalWeight& weight) {
  if (!(weight.lambda > 0.0) || !(weight.lambda < 1.0))
    throw std::invalid_argument("ThermalWeight: lambda must lie in (0, 1)");
}

void check_single_mode(const Operator& input) {
  if (input.space.sites() != 1)
    throw std::invalid_argument("regularized map: input must be a single-mode operator");
}

Vec fock_phases(int count) {  // i^n
  Vec phases(count);
  Cx phase{1.0, 0.0};
  for (int n = 0; n < count; ++n) {
    phases(n) = phase;
    phase *= I_UNIT;
  }
  return phases;
}

// Tr[rho tau] over the shared levels of a truncated rho and thermal diagonal.
double thermal_overlap(const Mat& rho, const Eigen::VectorXd& tau) {
  const int shared = std::min<int>(rho.rows(), tau.size());
  double overlap = 0.0;
  for (int n = 0; n < shared; ++n) overlap += rho(n, n).real() * tau(n);
  return overlap;
}

// <m|D(alpha)|n> in closed form, sqrt(n!/m!) alpha^{m-n} e^{-|a|^2/2} L_n^{m-n}(|a|^2)
// for m >= n and the mirrored (-conj(alpha))^{n-m} branch below the diagonal.
// Unlike the exponential of the truncated generator, these are the exact
// infinite-dimensional elements at any argument, which the quadrature oracle
// needs at nodes far outside the safe radius of the truncated route.
Mat displacement_elements(int dim, Cx alpha) {
  const double x = std::norm(alpha);
  const double gauss = std::exp(-0.5 * x);
  Mat d(dim, dim);
  std::vector<double> laguerre(dim);
  for (int a = 0; a < dim; ++a) {
    laguerre[0] = 1.0;
    if (dim - a > 1) laguerre[1] = 1.0 + a - x;
    for (int k = 1; k + 1 < dim - a; ++k)
      laguerre[k + 1] =
          ((2.0 * k + 1.0 + a - x) * laguerre[k] - (k + a) * laguerre[k - 1]) / (k + 1.0);
    const Cx upper = std::pow(alpha, a);
    const Cx lower = std::pow(-std::conj(alpha), a);
    double ratio = 1.0;  // sqrt(n!/(n+a)!)
    for (int k = 1; k <= a; ++k) ratio /= std::sqrt(double(k));
    for (int n = 0; n + a < dim; ++n) {
      if (n > 0) ratio *= std::sqrt(double(n) / double(n + a));
      const double real_part = ratio * gauss * laguerre[n];
      d(n + a, n) = real_part * upper;
      if (a > 0) d(n, n + a) = real_part * lower;
    }
  }
  return d;
}

int eigenvalue_count(const Mat& hermitian, double threshold) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (hermitian + hermitian.adjoint()),
                                            Eigen::EigenvaluesOnly);
  return static_cast<int>((solver.eigenvalues().array() > threshold).count());
}

}  // namespace

Eigen::VectorXd thermal_diagonal(const ThermalWeight& weight, int levels) {
  check_weight(weight);
  if (levels < 0) throw std::invalid_argument("thermal_diagonal: levels must be >= 0");
  Eigen::VectorXd tau(levels + 1);
  tau(0) = 1.0;
  for (int n = 1; n <= levels; ++n) tau(n) = tau(n - 1) * weight.lambda;
  return tau;
}

double thermal_trace(const ThermalWeight& weight, int levels) {
  check_weight(weight);
  return (1.0 - std::pow(weight.lambda, levels + 1)) / (1.0 - weight.lambda);
}

double thermal_tail(const ThermalWeight& weight, int levels) {
  check_weight(weight);
  return std::pow(weight.lambda, levels + 1) / (1.0 - weight.lambda);
}

int thermal_levels(const ThermalWeight& weight, double tail_bound) {
  check_weight(weight);
  if (!(tail_bound > 0.0))
    throw std::invalid_argument("thermal_levels: tail bound must be positive");
  const double scaled = tail_bound * (1.0 - weight.lambda);
  int power = 1;
  if (scaled < 1.0)
    power = std::max(1, static_cast<int>(std::ceil(std::log(scaled) / std::log(weight.lambda))));
  while (thermal_tail(weight, power - 1) > tail_bound) ++power;
  while (power > 1 && thermal_tail(weight, power - 2) <= tail_bound) --power;
  return power - 1;
}

Operator swap_operator(const cv::FockSpace& space) {
  const int dim = space.dim();
  Mat pi = Mat::Zero(dim * dim, dim * dim);
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n) pi(m * dim + n, n * dim + m) = 1.0;
  return {space.modes(2), std::move(pi)};
}

Mat swap_displacement_integral(const cv::FockSpace& space) {
  const int dim = space.dim();
  const Quadrature1D gh = gauss_hermite(41);
  const int n = static_cast<int>(gh.nodes.size());
  // each element of D (x) D+ carries exp(-|a|^2), the Gauss-Hermite weight of
  // the bare nodes; the residual bracket is a polynomial of degree m+n+p+q,
  // inside the exactness degree of the 41-node rule on the compared low block.
  // closed-form elements keep the bracket polynomial at every node, so the
  // full node set integrates it exactly; D(-a) = D(a)+ pairs mirrored nodes
  Mat sum = Mat::Zero(dim * dim, dim * dim);
  Mat term(dim * dim, dim * dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int key = i * n + j;
      const int pair_key = (n - 1 - i) * n + (n - 1 - j);
      if (key > pair_key) continue;
      const Cx alpha(gh.nodes[i], gh.nodes[j]);
      const double weight = gh.weights[i] * gh.weights[j] *
                            std::exp(std::norm(alpha)) / std::numbers::pi;
      Mat d = displacement_elements(dim, alpha);
      term = Eigen::kroneckerProduct(d, d.adjoint().eval());
      sum.noalias() += weight * term;
      if (key != pair_key) sum.noalias() += weight * term.adjoint();
    }
  }
  return sum;
}

Operator symmetrizer_s2_cv(const cv::FockSpace& space) {
  Operator swap = swap_operator(space);
  const int total = space.dim() * space.dim();
  return {swap.space, 0.5 * (Mat::Identity(total, total) + swap.mat)};
}

Operator symmetrizer_parity_form(const cv::FockSpace& space) {
  const int dim = space.dim();
  Mat v = cv::beamsplitter_v(space);
  Mat even_columns(dim * dim, ((dim + 1) / 2) * dim);
  int col = 0;
  for (int nc = 0; nc < dim; nc += 2)
    for (int na = 0; na < dim; ++na) even_columns.col(col++) = v.col(nc * dim + na);
  Mat p = Mat::Zero(dim * dim, dim * dim);
  p.selfadjointView<Eigen::Lower>().rankUpdate(even_columns);
  return {space.modes(2), Mat(p.selfadjointView<Eigen::Lower>())};
}

double k_factor(const Mat& rho, const ThermalWeight& weight, int levels) {
  const Eigen::VectorXd tau = thermal_diagonal(weight, levels);
  return 2.0 / (tau.sum() + thermal_overlap(rho, tau));
}

RegularizedMapResult regularized_clone(const Operator& input, const ThermalWeight& weight) {
  check_weight(weight);
  check_single_mode(input);
  const int dim = input.space.dims[0];
  RegularizedMapResult result;
  result.lambda = weight;
  result.input_tail = std::abs(input.mat(dim - 1, dim - 1));
  result.thermal_tail = thermal_tail(weight, dim - 1);
  if (result.input_tail > 1e-6 || result.thermal_tail > 1e-6)
    throw std::domain_error("regularized_clone: truncation tail above 1e-6; raise the cutoff or lower lambda");
  const double trace_in = input.mat.trace().real();
  if (std::abs(trace_in - 1.0) > 1e-8)
    result.warnings.push_back("input trace deviates from 1 by " + std::to_string(trace_in - 1.0));

  const Eigen::VectorXd tau = thermal_diagonal(weight, dim - 1);
  result.k_factor = k_factor(input.mat, weight, dim - 1);
  Mat tau_diag = Mat(tau.cast<Cx>().asDiagonal());
  Mat out = Eigen::kroneckerProduct(input.mat, tau_diag);
  out += Eigen::kroneckerProduct(tau_diag, input.mat);
  // swap-conjugated cross terms, written entrywise: the swap only reshuffles
  // indices, so no two-mode products are needed
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n)
      for (int p = 0; p < dim; ++p) {
        out(m * dim + n, p * dim + m) += tau(m) * input.mat(n, p);
        out(m * dim + n, n * dim + p) += tau(n) * input.mat(m, p);
      }
  out *= result.k_factor / 4.0;
  result.output = {HilbertSpace::uniform(2, dim), std::move(out)};
  return result;
}

double ReducedClone::trace() const { return block.trace().real() + tail.sum(); }

ReducedClone regularized_reduction(const Operator& input, const ThermalWeight& weight) {
  check_weight(weight);
  check_single_mode(input);
  const int dim = input.space.dims[0];
  ReducedClone reduced;
  reduced.levels = std::max(dim - 1, thermal_levels(weight, 1e-8));
  reduced.thermal_trace = thermal_trace(weight, reduced.levels);
  reduced.k_factor = k_factor(input.mat, weight, reduced.levels);
  const Eigen::VectorXd tau_low = thermal_diagonal(weight, dim - 1);
  const double quarter = reduced.k_factor / 4.0;
  reduced.block = quarter * (reduced.thermal_trace * input.mat + Mat(tau_low.cast<Cx>().asDiagonal()) +
                             input.mat * tau_low.cast<Cx>().asDiagonal() +
                             tau_low.cast<Cx>().asDiagonal() * input.mat);
  reduced.tail.resize(reduced.levels - dim + 1);
  double power = std::pow(weight.lambda, dim);
  for (int n = 0; n < reduced.tail.size(); ++n) {
    reduced.tail(n) = quarter * power;
    power *= weight.lambda;
  }
  return reduced;
}

double depolarizing_limit_distance(const Operator& input, const ThermalWeight& weight) {
  const ReducedClone reduced = regularized_reduction(input, weight);
  const int dim = input.space.dims[0];
  const Eigen::VectorXd tau_low = thermal_diagonal(weight, dim - 1);
  const double half_norm = 0.5 / reduced.thermal_trace;
  Mat diff = reduced.block - 0.5 * input.mat - half_norm * Mat(tau_low.cast<Cx>().asDiagonal());
  Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  double total = solver.eigenvalues().cwiseAbs().sum();
  double power = std::pow(weight.lambda, dim);
  for (int n = 0; n < reduced.tail.size(); ++n) {
    total += std::abs(reduced.tail(n) - half_norm * power);
    power *= weight.lambda;
  }
  return 0.5 * total;
}

DualPovm povm_g(const cv::FockSpace& space, double x, double y, const ThermalWeight& weight) {
  check_weight(weight);
  const int dim = space.dim();
  DualPovm povm;
  povm.levels = std::max(space.nmax, thermal_levels(weight, 1e-6));
  const cv::FockSpace extended{povm.levels};
  const Eigen::VectorXd fx = cv::quadrature_eigenstate(extended, x);
  const Eigen::VectorXd fy = cv::quadrature_eigenstate(extended, y);
  const Eigen::VectorXd tau = thermal_diagonal(weight, povm.levels);
  const Vec phases = fock_phases(povm.levels + 1);
  const double cxx = (tau.array() * fx.array().square()).sum();
  const double cyy = (tau.array() * fy.array().square()).sum();
  const Cx cross = (phases.array() * (fx.array() * tau.array() * fy.array()).cast<Cx>()).sum();
  const Vec px = fx.head(dim).cast<Cx>();
  const Vec py = phases.head(dim).cwiseProduct(fy.head(dim).cast<Cx>());
  povm.k_weak = 2.0 / (tau.sum() + 1.0);
  Mat bracket = cyy * (px * px.adjoint()) + cxx * (py * py.adjoint());
  bracket.noalias() += cross * (px * py.adjoint());
  bracket.noalias() += std::conj(cross) * (py * px.adjoint());
  povm.exact = (povm.k_weak / 4.0) * bracket;
  povm.asymptotic = (0.5 * (1.0 - weight.lambda)) * bracket;
  return povm;
}

MomentReport moments_g(const cv::FockSpace& space, const Ket& input,
                       const ThermalWeight& weight, const QuadratureGrid& grid) {
  check_weight(weight);
  if (weight.lambda < 0.8 - 1e-12 || weight.lambda > 0.995 + 1e-12)
    throw std::domain_error("moments_g: lambda must lie in [0.8, 0.995]");
  const int dim = space.dim();
  if (input.amps.size() != dim)
    throw std::invalid_argument("moments_g: input dimension mismatch");
  const int levels = std::max(space.nmax, thermal_levels(weight, 1e-4));
  const Eigen::VectorXd tau = thermal_diagonal(weight, levels);
  const int npts = static_cast<int>(grid.points.size());

  MomentReport report;
  const double spread = 0.5 * std::sqrt((1.0 + weight.lambda) / (1.0 - weight.lambda));
  if (grid.half_width < 3.5 * spread)
    report.warnings.push_back("grid half-width below 3.5 standard deviations of the thermal marginal");

  const Eigen::MatrixXd table = cv::eigenfunction_table(levels, grid);
  const Vec phases = fock_phases(dim);
  const Vec a = table.topRows(dim).transpose().cast<Cx>() * input.amps;
  const Vec b = table.topRows(dim).transpose().cast<Cx>() *
                phases.conjugate().cwiseProduct(input.amps);
  const Eigen::VectorXd climb = table.cwiseProduct(table).transpose() * tau;  // <x|tau|x>

  // cross kernel <x|tau|y> split by the fourfold phase cycle of the y ket
  Eigen::VectorXd tau_re = tau, tau_im = tau;
  for (int n = 0; n <= levels; ++n) {
    switch (n % 4) {
      case 0: tau_im(n) = 0.0; break;
      case 1: tau_re(n) = 0.0; break;
      case 2: tau_re(n) = -tau_re(n); tau_im(n) = 0.0; break;
      default: tau_re(n) = 0.0; tau_im(n) = -tau_im(n); break;
    }
  }
  Mat kernel = (table.transpose() * (tau_re.asDiagonal() * table)).cast<Cx>();
  kernel += I_UNIT * (table.transpose() * (tau_im.asDiagonal() * table)).cast<Cx>();

  const double trt = tau.sum();
  const double k = 2.0 / (trt + thermal_overlap(Mat(input.amps * input.amps.adjoint()), tau));
  const Eigen::VectorXd& pts = grid.points;
  const Eigen::VectorXd wa = a.cwiseAbs2();
  const Eigen::VectorXd wb = b.cwiseAbs2();
  const double scale = k / 4.0 * grid.h * grid.h;

  // first and second grid moments of both outcome axes; the three kernel terms
  // separate into single-axis sums except for the cross contraction
  const Eigen::VectorXd pts_sq = pts.array().square();
  const Vec cross_0 = a.conjugate().cwiseProduct(kernel * b);
  const Vec cross_y = a.conjugate().cwiseProduct(kernel * pts.cast<Cx>().cwiseProduct(b));
  const Vec cross_yy = a.conjugate().cwiseProduct(kernel * pts_sq.cast<Cx>().cwiseProduct(b));
  const double total = scale * (wa.sum() * climb.sum() + climb.sum() * wb.sum() +
                                2.0 * cross_0.sum().real());
  const double sx = scale * (pts.dot(wa) * climb.sum() + pts.dot(climb) * wb.sum() +
                             2.0 * (pts.cast<Cx>().cwiseProduct(cross_0)).sum().real());
  const double sxx = scale * (pts_sq.dot(wa) * climb.sum() + pts_sq.dot(climb) * wb.sum() +
                              2.0 * (pts_sq.cast<Cx>().cwiseProduct(cross_0)).sum().real());
  const double sy = scale * (wa.sum() * pts.dot(climb) + climb.sum() * pts.dot(wb) +
                             2.0 * cross_y.sum().real());
  const double syy = scale * (wa.sum() * pts_sq.dot(climb) + climb.sum() * pts_sq.dot(wb) +
                              2.0 * cross_yy.sum().real());

  report.probability_total = total;
  if (std::abs(total - 1.0) > 1e-3)
    report.warnings.push_back("grid captures probability " + std::to_string(total));

  // closed forms of the same moments: thermal average plus input-state cross terms
  const Eigen::VectorXd tau_low = tau.head(dim);
  const Mat xq = cv::quadrature_x(space);
  const Mat yq = cv::quadrature_y(space);
  // Tr[X^2 tau] = Tr[Y^2 tau]: the quadrature squares are diagonal (2n+1)/4 plus
  // off-diagonal pieces that the thermal diagonal never meets
  double quad_thermal = 0.0;
  for (int n = 0; n <= levels; ++n) quad_thermal += 0.25 * (2.0 * n + 1.0) * tau(n);
  const auto closed_pair = [&](const Mat& op) {
    const Mat op_tau = op * tau_low.cast<Cx>().asDiagonal();
    const Mat op2_tau = op * op_tau;
    const double in_first = input.amps.dot(op * input.amps).real();
    const double in_second = input.amps.dot(op * (op * input.amps)).real();
    const double first = k / 4.0 * (in_first * trt + 2.0 * input.amps.dot(op_tau * input.amps).real());
    const double second = k / 4.0 * (in_second * trt + quad_thermal +
                                     2.0 * input.amps.dot(op2_tau * input.amps).real());
    return std::array<double, 4>{in_first, in_second, first, second};
  };
  const auto fill = [&](const std::string& name, double first, double second, const Mat& op) {
    const auto closed = closed_pair(op);
    MomentEntry entry;
    entry.observable = name;
    entry.measured = first;
    entry.estimated = 2.0 * first;
    entry.expected = closed[2];
    entry.measured_second = second;
    entry.estimated_second = 4.0 * second;
    entry.expected_second = closed[3];
    entry.added_noise = (second - first * first) - 0.25 * (closed[1] - closed[0] * closed[0]);
    entry.expected_added_noise =
        0.125 * (1.0 + 2.0 * weight.lambda / (1.0 - weight.lambda));
    report.entries.push_back(entry);
    if (std::abs(entry.expected) > 1e-9)
      report.first_moment_sign = entry.measured / entry.expected > 0.0 ? +1 : -1;
    report.total_uncertainty += entry.added_noise;
    report.expected_total_uncertainty += entry.expected_added_noise;
  };
  fill("x", sx, sxx, xq);
  fill("y", sy, syy, yq);
  return report;
}

DivergenceScan moments_g_scan(const cv::FockSpace& space, const Ket& input,
                              const std::vector<double>& lambdas, const QuadratureGrid& grid) {
  DivergenceScan scan;
  for (double lambda : lambdas) {
    const MomentReport report = moments_g(space, input, ThermalWeight{lambda}, grid);
    scan.points.push_back({lambda, report.entry("x").added_noise,
                           report.entry("x").expected_added_noise});
  }
  // least-squares slope of the excess against 2 lambda/(1-lambda)
  const int count = static_cast<int>(scan.points.size());
  if (count >= 2) {
    double t_mean = 0.0, e_mean = 0.0;
    std::vector<double> t(count);
    for (int i = 0; i < count; ++i) {
      t[i] = 2.0 * scan.points[i].lambda / (1.0 - scan.points[i].lambda);
      t_mean += t[i] / count;
      e_mean += scan.points[i].excess / count;
    }
    double cov = 0.0, var = 0.0;
    for (int i = 0; i < count; ++i) {
      cov += (t[i] - t_mean) * (scan.points[i].excess - e_mean);
      var += (t[i] - t_mean) * (t[i] - t_mean);
    }
    scan.fitted_coefficient = cov / var;
  }
  return scan;
}

CovarianceReport covariance_comparison(const cv::FockSpace& space, Cx alpha, Cx beta,
                                       double sigma, const ThermalWeight& weight) {
  check_weight(weight);
  if (std::abs(alpha) > 0.8 + 1e-9)
    throw std::domain_error("covariance_comparison: |alpha| <= 0.8 keeps the displaced probe inside the cutoff");
  const int dim = space.dim();
  CovarianceReport report;

  const cv::JointCloner cloner = cv::make_joint_cloner(space, sigma);
  Vec vac = Vec::Zero(dim);
  vac(0) = 1.0;
  const Ket vacuum{space.single(), vac};
  const Operator base = cv::clone_channel_cv(cloner, vacuum);
  const Operator moved = cv::clone_channel_cv(cloner, cv::coherent_ket(space, alpha));
  const Mat d = cv::displacement(space, alpha);
  const Mat dd = Eigen::kroneckerProduct(d, d);
  report.clone_deviation = trace_distance(moved.mat, dd * base.mat * dd.adjoint());

  const Vec coh = cv::coherent_amplitudes(space, alpha);
  const Operator rho0{space.single(), Mat(vac * vac.adjoint())};
  const Operator rho_moved{space.single(), Mat(coh * coh.adjoint())};
  const RegularizedMapResult reg0 = regularized_clone(rho0, weight);
  const RegularizedMapResult reg_moved = regularized_clone(rho_moved, weight);
  report.regularized_deviation =
      trace_distance(reg_moved.output.mat, dd * reg0.output.mat * dd.adjoint());

  const Mat s2 = symmetrizer_s2_cv(space).mat;
  report.rank_p = eigenvalue_count(cloner.projector(), 0.5);
  report.rank_s2 = eigenvalue_count(s2, 0.5);

  // coherent-pair actions of the two projectors, on the plain cloner
  const cv::JointCloner plain = sigma == 1.0 ? cloner : cv::make_joint_cloner(space, 1.0);
  const Ket ka = cv::coherent_ket(space, alpha);
  const Ket kb = cv::coherent_ket(space, beta);
  const Vec pair = tensor(ka, kb).amps;
  const Vec merged = tensor_power(cv::coherent_ket(space, 0.5 * (alpha + beta)), 2).amps;
  report.fidelity_p = ket_fidelity(plain.isometry * (plain.isometry.adjoint() * pair), merged);
  report.fidelity_s2 = ket_fidelity(s2 * pair, pair + tensor(kb, ka).amps);
  return report;
}

}  // namespace clonometry::werner
