#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "clonometry/fock_cv.hpp"

using namespace clonometry;
using namespace clonometry::cv;

namespace {

std::mt19937_64 rng(46011u);

const FockSpace big{40};

Ket random_low_fock(const FockSpace& space, int levels) {
  std::normal_distribution<double> g;
  Vec v = Vec::Zero(space.dim());
  for (int n = 0; n < levels; ++n) v(n) = Cx(g(rng), g(rng));
  return Ket{space.single(), v / v.norm()};
}

}  // namespace

TEST_CASE("mode operators: ladder action, number, vacuum variance") {
  FockSpace space{12};
  auto [a, x, y] = mode_operators(space);
  for (int n = 1; n <= 12; ++n)
    CHECK(std::abs(a(n - 1, n) - std::sqrt(double(n))) < 1e-15);
  CHECK(max_abs(number_operator(space) - a.adjoint() * a) < 1e-12);
  Vec vac = Vec::Zero(13);
  vac(0) = 1.0;
  CHECK(std::real(vac.dot(x * (x * vac))) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(is_hermitian(x, 1e-15));
  CHECK(is_hermitian(y, 1e-15));
}

TEST_CASE("commutator [X,Y] = i/2 away from the cutoff level") {
  FockSpace space{30};
  Mat x = quadrature_x(space), y = quadrature_y(space);
  Mat comm = x * y - y * x;
  Mat interior = comm.topLeftCorner(30, 30) -
                 (0.5 * I_UNIT) * Mat::Identity(30, 30);
  CHECK(max_abs(interior) < 1e-12);
  // the full truncated identity including the cutoff defect
  Mat defect = Mat::Zero(31, 31);
  defect(30, 30) = 31.0;
  CHECK(max_abs(comm - 0.5 * I_UNIT * (Mat::Identity(31, 31) - defect)) < 1e-12);
}

TEST_CASE("displacement: unitary, coherent action, inverse, mean shift") {
  const Cx alpha{0.8, -0.5};
  Mat d = displacement(big, alpha);
  CHECK(is_unitary(d, 1e-12));
  CHECK(max_abs(displacement(big, 0.0) - Mat::Identity(41, 41)) < 1e-14);
  CHECK(max_abs(d * displacement(big, -alpha) - Mat::Identity(41, 41)) < 1e-8);

  Vec vac = Vec::Zero(41);
  vac(0) = 1.0;
  Vec moved = d * vac;
  CHECK((moved - coherent_amplitudes(big, alpha)).norm() < 1e-8);
  Mat x = quadrature_x(big);
  CHECK(std::real(moved.dot(x * moved)) == doctest::Approx(alpha.real()).epsilon(1e-8));

  std::vector<std::string> warnings;
  displacement(big, Cx{3.0, 0.0}, &warnings);
  CHECK(warnings.size() == 1);
  warnings.clear();
  displacement(big, Cx{1.0, 0.5}, &warnings);
  CHECK(warnings.empty());
}

TEST_CASE("squeeze: conjugation law and squeezed-vacuum variance") {
  CHECK(max_abs(squeeze(big, 0.0) - Mat::Identity(41, 41)) < 1e-14);
  Mat a = lowering(big);
  for (double sigma : {0.5, 2.0}) CHECK(is_unitary(squeeze(big, std::log(sigma)), 1e-10));
  // conjugation law at moderate squeezing, where the images of the probed
  // columns stay far below the cutoff
  for (double sigma : {0.7, 1.0, 1.4}) {
    const double r = std::log(sigma);
    Mat s = squeeze(big, r);
    Mat conjugated = s.adjoint() * a * s;
    Mat target = std::cosh(r) * a + std::sinh(r) * a.adjoint();
    CHECK(max_abs((conjugated - target).topLeftCorner(14, 7)) < 1e-6);
  }
  for (double r : {0.3, std::log(1.4)}) {
    Vec vac = Vec::Zero(41);
    vac(0) = 1.0;
    Vec sq = squeeze(big, r) * vac;
    Mat x = quadrature_x(big);
    CHECK(std::real(sq.dot(x * (x * sq))) ==
          doctest::Approx(std::exp(2.0 * r) / 4.0).epsilon(1e-8));
  }
}

TEST_CASE("beamsplitter matches the dense exponential of its generator") {
  FockSpace space{8};
  Mat a = lowering(space);
  Mat id = Mat::Identity(9, 9);
  Mat gen = (std::numbers::pi / 4.0) *
            (Eigen::kroneckerProduct(a.adjoint(), a).eval() -
             Eigen::kroneckerProduct(a, a.adjoint()).eval());
  CHECK(max_abs(beamsplitter_v(space) - matrix_exponential(gen)) < 1e-12);
}

TEST_CASE("beamsplitter: unitary, vacuum fixed, mode mixing matrix") {
  FockSpace space{12};
  const int dim = 13;
  Mat v = beamsplitter_v(space);
  CHECK(is_unitary(v, 1e-12));
  Vec vac2 = Vec::Zero(dim * dim);
  vac2(0) = 1.0;
  CHECK((v * vac2 - vac2).norm() < 1e-14);

  Mat a = lowering(space);
  Mat id = Mat::Identity(dim, dim);
  Mat c_op = Eigen::kroneckerProduct(a, id).eval();
  Mat a_op = Eigen::kroneckerProduct(id, a).eval();
  const double inv_rt2 = 1.0 / std::sqrt(2.0);
  Mat dc = v * c_op * v.adjoint() - inv_rt2 * (c_op - a_op);
  Mat da = v * a_op * v.adjoint() - inv_rt2 * (c_op + a_op);
  // exact on sectors whose total photon number stays below the cutoff
  for (int row = 0; row < dim * dim; ++row)
    for (int col = 0; col < dim * dim; ++col) {
      if (row / dim + row % dim >= 12 || col / dim + col % dim >= 12) continue;
      CHECK(std::abs(dc(row, col)) < 1e-12);
      CHECK(std::abs(da(row, col)) < 1e-12);
    }
}

TEST_CASE("beamsplitter merges coherent amplitudes") {
  const Cx alpha{0.4, 0.2}, beta{-0.3, 0.0};
  Vec in(41 * 41);
  Vec ca = coherent_amplitudes(big, alpha), cb = coherent_amplitudes(big, beta);
  for (int n = 0; n < 41; ++n) in.segment(n * 41, 41) = ca(n) * cb;
  Vec out = beamsplitter_v(big) * in;
  const double inv_rt2 = 1.0 / std::sqrt(2.0);
  Vec ta = coherent_amplitudes(big, (alpha + beta) * inv_rt2);
  Vec tb = coherent_amplitudes(big, (beta - alpha) * inv_rt2);
  Vec target(41 * 41);
  for (int n = 0; n < 41; ++n) target.segment(n * 41, 41) = ta(n) * tb;
  CHECK((out - target).norm() < 1e-10);
}

TEST_CASE("twin beam: normalization, vacuum limit, mean photon number") {
  Ket tb = twin_beam(big, 1.0 / 3.0);
  CHECK(tb.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(tb.amps(0) - std::sqrt(8.0 / 9.0)) < 1e-12);
  CHECK(std::real(tb.amps(42)) < 0.0);  // (-lambda)^1 on |1,1>

  Ket vac = twin_beam(big, 0.0);
  CHECK(std::abs(vac.amps(0) - 1.0) < 1e-15);
  CHECK(vac.amps.tail(41 * 41 - 1).norm() < 1e-15);

  Mat n1 = Eigen::kroneckerProduct(number_operator(big), Mat::Identity(41, 41)).eval();
  Mat n2 = Eigen::kroneckerProduct(Mat::Identity(41, 41), number_operator(big)).eval();
  const double mean = std::real(tb.amps.dot((n1 + n2) * tb.amps));
  CHECK(std::abs(mean - 0.25) < 1e-8);
  CHECK(twin_beam_mean_photons(1.0 / 3.0) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("three-mode cloner refuses large cutoffs and is unitary") {
  CHECK_THROWS(cloner_unitary_u(FockSpace{13}));
  CHECK(is_unitary(cloner_unitary_u(FockSpace{5}), 1e-10));
}

TEST_CASE("unitary route with twin-beam ancilla reproduces the projector route") {
  FockSpace space{10};
  const int dim = 11;
  Mat u = cloner_unitary_u(space);
  Ket tb = twin_beam(space, 1.0 / 3.0);
  JointCloner cloner = make_joint_cloner(space, 1.0);
  for (Cx alpha : {Cx{0.5, 0.0}, Cx{-0.3, 0.6}}) {
    Vec in(dim * dim * dim);
    Vec coh = coherent_amplitudes(space, alpha);
    for (int n = 0; n < dim; ++n) in.segment(n * dim * dim, dim * dim) = coh(n) * tb.amps;
    Vec out = u * in;
    Operator full{space.modes(3), out * out.adjoint()};
    Operator route_ca = partial_trace(full, {0, 1});
    Operator route_c = partial_trace(route_ca, {0});
    Operator route_a = partial_trace(route_ca, {1});

    Operator clone = clone_channel_cv(cloner, coherent_ket(space, alpha));
    Operator clone_c = partial_trace(clone, {0});
    Operator clone_a = partial_trace(clone, {1});

    CHECK(trace_distance(route_c.mat, clone_c.mat) < 5e-3);
    CHECK(trace_distance(route_a.mat, clone_a.mat) < 5e-3);
    CHECK(trace_distance(route_c.mat, route_a.mat) < 5e-3);
    CHECK(trace_distance(clone_c.mat, clone_a.mat) < 5e-3);
  }
}

TEST_CASE("cloning projector: isometry factor, idempotence, coherent merge") {
  JointCloner cloner = make_joint_cloner(big, 1.0);
  CHECK(max_abs(cloner.isometry.adjoint() * cloner.isometry - Mat::Identity(41, 41)) <
        1e-12);

  FockSpace small{16};
  for (double sigma : {0.7, 1.0, 1.4}) {
    Mat p = projector_pca(small, sigma);
    CHECK(is_projector(p, 1e-8));
    CHECK(std::abs(p.trace().real() - 17.0) < 1e-8);
  }

  const Cx alpha{0.5, 0.0}, beta{-0.3, 0.0};
  Vec in(41 * 41);
  Vec ca = coherent_amplitudes(big, alpha), cb = coherent_amplitudes(big, beta);
  for (int n = 0; n < 41; ++n) in.segment(n * 41, 41) = ca(n) * cb;
  Vec merged = cloner.isometry * (cloner.isometry.adjoint() * in);
  Vec half = coherent_amplitudes(big, 0.5 * (alpha + beta));
  Vec target(41 * 41);
  for (int n = 0; n < 41; ++n) target.segment(n * 41, 41) = half(n) * half;
  target *= std::exp(-std::norm(alpha - beta) / 4.0);
  CHECK((merged - target).norm() < 1e-8);
}

TEST_CASE("displacement-integral route reproduces the projector on low levels") {
  Mat integral = projector_displacement_integral(big);
  Mat direct = projector_pca(big, 1.0);
  double worst = 0.0;
  for (int nc = 0; nc <= 20; ++nc)
    for (int na = 0; na <= 20; ++na)
      for (int mc = 0; mc <= 20; ++mc)
        for (int ma = 0; ma <= 20; ++ma)
          worst = std::max(worst, std::abs(integral(nc * 41 + na, mc * 41 + ma) -
                                           direct(nc * 41 + na, mc * 41 + ma)));
  CHECK(worst < 1e-4);
}

TEST_CASE("clone channel: trace, degraded vacuum, preserved means") {
  JointCloner cloner = make_joint_cloner(big, 1.0);
  Mat x = quadrature_x(big), y = quadrature_y(big);

  Vec vac = Vec::Zero(41);
  vac(0) = 1.0;
  Operator out = clone_channel_cv(cloner, Ket{big.single(), vac});
  CHECK(std::abs(out.mat.trace().real() - 1.0) < 2e-3);
  Operator red_c = partial_trace(out, {0});
  Mat rho_c = red_c.mat / red_c.mat.trace().real();
  CHECK(std::abs(std::real((rho_c * x * x).trace()) - 0.5) < 2e-3);
  CHECK(std::abs(std::real((rho_c * y * y).trace()) - 0.5) < 2e-3);

  const Cx alpha{0.7, 0.4};
  Operator cl = clone_channel_cv(cloner, coherent_ket(big, alpha));
  CHECK(std::abs(cl.mat.trace().real() - 1.0) < 2e-3);
  for (auto keep : {0, 1}) {
    Operator red = partial_trace(cl, {keep});
    Mat rho = red.mat / red.mat.trace().real();
    CHECK(std::abs(std::real((rho * x).trace()) - alpha.real()) < 1e-3);
    CHECK(std::abs(std::real((rho * y).trace()) - alpha.imag()) < 1e-3);
  }

  Operator far = clone_channel_cv(cloner, coherent_ket(big, Cx{1.5, 0.0}));
  CHECK(std::abs(far.mat.trace().real() - 1.0) < 2e-3);
}

TEST_CASE("clone reduction equals the Gaussian displacement mixture") {
  JointCloner cloner = make_joint_cloner(big, 1.0);
  Vec sup = Vec::Zero(41);
  sup(0) = sup(1) = 1.0 / std::sqrt(2.0);
  for (const Ket& input : {coherent_ket(big, Cx{0.5, 0.0}), Ket{big.single(), sup}}) {
    Operator out = clone_channel_cv(cloner, input);
    Operator red = partial_trace(out, {0});
    Operator mix = displacement_mixture(big, input, 1.0);
    CHECK(trace_distance(red.mat / red.mat.trace().real(),
                         mix.mat / mix.mat.trace().real()) < 1e-3);
  }
}

TEST_CASE("self-dual weights give identical clones") {
  JointCloner cloner = make_joint_cloner(big, 1.0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Ket input = trial % 2 == 0 ? coherent_ket(big, Cx{1.2 * u(rng), 1.2 * u(rng)})
                               : random_low_fock(big, 4);
    Operator out = clone_channel_cv(cloner, input);
    Operator red_c = partial_trace(out, {0});
    Operator red_a = partial_trace(out, {1});
    CHECK(trace_distance(red_c.mat, red_a.mat) < 2e-3);
  }
}

TEST_CASE("cloning map commutes with joint displacements") {
  FockSpace space{24};
  JointCloner cloner = make_joint_cloner(space, 1.0);
  const Cx beta{0.5, -0.3};
  Mat d = displacement(space, beta);
  Mat d2 = Eigen::kroneckerProduct(d, d).eval();
  Vec sup = Vec::Zero(25);
  sup(0) = std::sqrt(0.7);
  sup(2) = std::sqrt(0.3);
  for (const Ket& input : {coherent_ket(space, Cx{-0.2, 0.4}), Ket{space.single(), sup}}) {
    Ket moved{space.single(), d * input.amps};
    Mat lhs = clone_channel_cv(cloner, moved).mat;
    Mat rhs = d2 * clone_channel_cv(cloner, input).mat * d2.adjoint();
    CHECK(trace_distance(lhs, rhs) < 2e-3);
  }
}

TEST_CASE("joint POVM at sigma=1 is the coherent-state POVM") {
  JointCloner cloner = make_joint_cloner(big, 1.0);
  const std::vector<double> pts = {-1.5, -0.75, 0.0, 0.75, 1.5};
  const double inv_pi = 1.0 / std::numbers::pi;
  for (double x : pts)
    for (double y : pts) {
      Mat f = joint_povm_f(cloner, x, y);
      const double trace = f.trace().real();
      CHECK(std::abs(trace - inv_pi) < 1e-3);
      CHECK(min_eigenvalue(f) > -1e-8);
      Vec coh = coherent_amplitudes(big, Cx{x, y});
      CHECK(trace_distance(f / trace, (coh * coh.adjoint()).eval()) < 1e-3);
    }
}

TEST_CASE("joint POVM at sigma!=1 is a displaced squeezed vacuum") {
  JointCloner cloner = make_joint_cloner(big, 1.4);
  Vec vac = Vec::Zero(41);
  vac(0) = 1.0;
  Vec sq = squeeze(big, std::log(1.4)) * vac;
  for (auto [x, y] : std::vector<std::pair<double, double>>{{0.5, -0.25}, {0.0, 0.0}, {-1.0, 0.5}}) {
    Mat f = joint_povm_f(cloner, x, y);
    Vec target = displacement(big, Cx{x, y}) * sq;
    CHECK(trace_distance(f / f.trace().real(), (target * target.adjoint()).eval()) < 2e-3);
  }
}

TEST_CASE("POVM family resolves the identity on low levels") {
  // outcome families probe input level n through two-mode levels near 2n
  // (times the squeeze energy factor), so the resolution holds on the lowest
  // quarter of the ladder at sigma=1 and shrinks with squeezing
  QuadratureGrid grid = uniform_grid(9.5, 0.05);
  for (auto [sigma, top] : std::vector<std::pair<double, int>>{{1.0, 11}, {1.4, 6}}) {
    JointCloner cloner = make_joint_cloner(big, sigma);
    Mat q = povm_completeness_sum(cloner, grid);
    CHECK(max_abs(q.topLeftCorner(top, top) - Mat::Identity(top, top)) < 1e-3);
  }
}

TEST_CASE("quadrature eigenstates: ground value, orthogonality, eigen-action") {
  CHECK(quadrature_eigenstate(big, 0.0)(0) ==
        doctest::Approx(std::pow(2.0 / std::numbers::pi, 0.25)).epsilon(1e-14));

  QuadratureGrid grid = uniform_grid(9.5, 0.05);
  Eigen::MatrixXd table = eigenfunction_table(40, grid);
  Eigen::MatrixXd gram = grid.h * table * table.transpose();
  CHECK((gram.topLeftCorner(21, 21) - Eigen::MatrixXd::Identity(21, 21))
            .cwiseAbs()
            .maxCoeff() < 1e-6);

  Mat x = quadrature_x(big);
  for (double pt : {0.0, 0.5, 1.0}) {
    Eigen::VectorXd psi = quadrature_eigenstate(big, pt);
    Vec residual = x * psi.cast<Cx>() - pt * psi.cast<Cx>();
    CHECK(residual.head(21).norm() < 1e-10);
  }

  Vec phased = quadrature_eigenstate_y(big, 0.7);
  Eigen::VectorXd plain = quadrature_eigenstate(big, 0.7);
  CHECK(std::abs(phased(2) + plain(2)) < 1e-14);   // i^2 = -1
  CHECK(std::abs(phased(1) - I_UNIT * plain(1)) < 1e-14);
}

TEST_CASE("moment check: heterodyne noise at sigma=1") {
  JointCloner cloner = make_joint_cloner(big, 1.0);
  QuadratureGrid grid = uniform_grid(9.5, 0.05);

  Vec vac = Vec::Zero(41);
  vac(0) = 1.0;
  MomentReport vac_report = moment_check(cloner, Ket{big.single(), vac}, grid);
  CHECK(std::abs(vac_report.probability_total - 1.0) < 1e-4);
  for (const char* name : {"x", "y", "x_phi_plus", "x_phi_minus"}) {
    CHECK(std::abs(vac_report.entry(name).added_noise - 0.25) < 5e-3);
    CHECK(vac_report.entry(name).expected_added_noise == doctest::Approx(0.25));
  }

  const Cx alpha{0.8, 0.6};
  MomentReport coh = moment_check(cloner, coherent_ket(big, alpha), grid);
  CHECK(std::abs(coh.entry("x").measured - 0.8) < 1e-3);
  CHECK(std::abs(coh.entry("y").measured - 0.6) < 1e-3);
  CHECK(std::abs(coh.entry("x").added_noise - 0.25) < 5e-3);
  CHECK(std::abs(coh.entry("y").added_noise - 0.25) < 5e-3);
}

TEST_CASE("moment check: rotated-pair noise (1/4)|sin 2phi| off sigma=1") {
  QuadratureGrid grid = uniform_grid(9.5, 0.05);
  JointCloner root2 = make_joint_cloner(big, std::sqrt(2.0));
  Vec vac = Vec::Zero(41);
  vac(0) = 1.0;
  MomentReport r2 = moment_check(root2, Ket{big.single(), vac}, grid);
  CHECK(r2.entry("x_phi_plus").expected_added_noise == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(std::abs(r2.entry("x_phi_plus").added_noise - 0.2) < 5e-3);
  CHECK(std::abs(r2.entry("x_phi_minus").added_noise - 0.2) < 5e-3);

  for (double sigma : {0.7, 1.4}) {
    JointCloner cloner = make_joint_cloner(big, sigma);
    const double phi = std::atan(sigma * sigma);
    const double target = 0.25 * std::abs(std::sin(2.0 * phi));
    MomentReport report = moment_check(cloner, coherent_ket(big, Cx{0.4, -0.3}), grid);
    CHECK(std::abs(report.entry("x_phi_plus").added_noise - target) < 5e-3);
    CHECK(std::abs(report.entry("x_phi_minus").added_noise - target) < 5e-3);
    CHECK(std::abs(report.entry("x").added_noise - 0.25 * sigma * sigma) < 5e-3);
    CHECK(std::abs(report.entry("y").added_noise - 0.25 / (sigma * sigma)) < 5e-3);
  }
}

TEST_CASE("symplectic Fourier transform: self-dual Gaussians, non-dual control") {
  for (double sigma : {1.0, 2.0}) {
    FourierReport report = fourier_selfdual_check(GaussianWeight{sigma});
    CHECK(report.self_dual);
    CHECK(report.max_deviation < 1e-6);
    CHECK(std::abs(report.added_variance_direct - sigma * sigma / 4.0) < 2e-3);
    CHECK(std::abs(report.added_variance_dual - sigma * sigma / 4.0) < 2e-3);
  }

  FourierReport control =
      fourier_selfdual_check([](double u, double v) { return std::exp(-2.0 * (u * u + v * v)); });
  CHECK_FALSE(control.self_dual);
  CHECK(control.max_deviation > 0.1);
  CHECK(std::abs(control.added_variance_direct - 0.125) < 2e-3);
  CHECK(std::abs(control.added_variance_dual - 0.5) < 2e-3);
}
