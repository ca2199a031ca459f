#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "scfem/assembly.hpp"
#include "scfem/manufactured.hpp"
#include "scfem/spectral.hpp"

using namespace scfem;

namespace {
constexpr double kPi = std::numbers::pi;
const auto kOne = [](double) { return 1.0; };

Grid1D uniform_grid(double a, double b, int cells) {
  Grid1D g;
  for (int i = 0; i <= cells; ++i)
    g.nodes.push_back(a + (b - a) * i / cells);
  g.interface_index = 0;
  return g;
}

// Independent 3-point Gauss load assembly; exact for the reference source.
Eigen::MatrixXd load_gauss3(const PhysicalConfig& phys, const MeshConfig& mesh,
                            const std::function<double(double, double)>& f) {
  const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const Grid1D xg = make_x_grid(mesh, phys.half_width());
  const Grid1D yg = make_y_grid(mesh);
  const int nx = static_cast<int>(xg.nodes.size());
  const int ny = static_cast<int>(yg.nodes.size());
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(nx, ny);
  for (int i = 0; i + 1 < nx; ++i) {
    const double x0 = xg.nodes[i], x1 = xg.nodes[i + 1];
    for (int j = 0; j + 1 < ny; ++j) {
      const double y0 = yg.nodes[j], y1 = yg.nodes[j + 1];
      for (int qx = 0; qx < 3; ++qx)
        for (int qy = 0; qy < 3; ++qy) {
          const double x = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * gx[qx];
          const double y = 0.5 * (y0 + y1) + 0.5 * (y1 - y0) * gx[qy];
          const double w = 0.25 * (x1 - x0) * (y1 - y0) * gw[qx] * gw[qy];
          const double pl = (x1 - x) / (x1 - x0);
          const double ql = (y1 - y) / (y1 - y0);
          const double fv = f(x, y) * w;
          full(i, j) += fv * pl * ql;
          full(i + 1, j) += fv * (1 - pl) * ql;
          full(i, j + 1) += fv * pl * (1 - ql);
          full(i + 1, j + 1) += fv * (1 - pl) * (1 - ql);
        }
    }
  }
  return full.block(1, 1, nx - 2, ny - 2);
}

}  // namespace

TEST_CASE("1d matrices on a uniform grid") {
  const Grid1D g = uniform_grid(0.0, 4.0, 4);  // h = 1
  const SymTridiagonal k = stiffness_1d(g, kOne);
  const SymTridiagonal m = mass_1d(g, kOne);
  REQUIRE(k.dim() == 3);
  for (double v : k.diag) CHECK(v == doctest::Approx(2.0).epsilon(1e-15));
  for (double v : k.off) CHECK(v == doctest::Approx(-1.0).epsilon(1e-15));
  for (double v : m.diag) CHECK(v == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  for (double v : m.off) CHECK(v == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

  // K + lambda^2 M rows reproduce the local coefficients [b, 2a, b].
  const LocalCoeffs c = local_coeffs(1.0, 1.0);
  const SymTridiagonal t = add_scaled(k, 1.0, m);
  CHECK(t.diag[1] == doctest::Approx(2.0 * c.a).epsilon(1e-15));
  CHECK(t.off[0] == doctest::Approx(c.b).epsilon(1e-15));
}

TEST_CASE("smallest mesh: one interior node") {
  const Grid1D g = uniform_grid(-1.0, 1.0, 2);
  const SymTridiagonal k = stiffness_1d(g, kOne);
  const SymTridiagonal m = mass_1d(g, kOne);
  REQUIRE(k.dim() == 1);
  CHECK(k.diag[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(m.diag[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("interface row of the weighted mode matrix") {
  const PhysicalConfig phys(-1.0, 1.2, 2.0);
  const MeshConfig mesh = MeshConfig::from_counts(2.0, 2, 4, 2);  // h- = 1, h+ = 0.5
  const SymTridiagonal t = mode_matrix(phys, mesh, 1, false);
  const int iface = mesh.n_minus() - 1;  // interior index of x = 0
  CHECK(t.diag[iface] == doctest::Approx(19.0 / 15.0).epsilon(1e-14));  // -4/3 + 1.2*13/6
}

TEST_CASE("interface row structure over random parameters") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> h_dist(0.05, 2.0), s_dist(0.1, 3.0);
  std::uniform_int_distribution<int> n_dist(2, 9), m_dist(1, 6);
  for (int it = 0; it < 200; ++it) {
    const int nm = n_dist(rng), np = n_dist(rng);
    const double hm = h_dist(rng);
    // Independent h_plus through unequal counts: L = nm*hm, h_plus = L/np.
    const double L = nm * hm;
    const MeshConfig mesh = MeshConfig::from_counts(L, nm, np, 4);
    const PhysicalConfig phys(-s_dist(rng), s_dist(rng), L);
    const int lambda = m_dist(rng);
    const SymTridiagonal t = mode_matrix(phys, mesh, lambda, false);
    const LocalCoeffs cm = local_coeffs(lambda, mesh.h_minus());
    const LocalCoeffs cp = local_coeffs(lambda, mesh.h_plus());
    const int iface = mesh.n_minus() - 1;
    CHECK(t.diag[iface] ==
          doctest::Approx(phys.sigma_minus() * cm.a + phys.sigma_plus() * cp.a).epsilon(1e-12));
    if (iface > 0)
      CHECK(t.off[iface - 1] == doctest::Approx(phys.sigma_minus() * cm.b).epsilon(1e-12));
    if (iface + 1 < t.dim())
      CHECK(t.off[iface] == doctest::Approx(phys.sigma_plus() * cp.b).epsilon(1e-12));
  }
}

TEST_CASE("tensor action equals dense kron assembly") {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const PhysicalConfig phys(-1.0, 1.2, 3.0);
  for (int nm : {1, 2, 3}) {
    const MeshConfig mesh = MeshConfig::from_counts(3.0, nm, 2 * nm, 4);
    const System2D sys = assemble_2d(phys, mesh);
    const Eigen::MatrixXd dense_op = sys.op.dense();
    const Eigen::MatrixXd dense_gram = sys.gram.dense();
    CHECK((dense_op - dense_op.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((dense_gram - dense_gram.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::MatrixXd u(mesh.interior_x(), mesh.interior_y());
      for (long i = 0; i < u.size(); ++i) u.data()[i] = gauss(rng);
      const Eigen::Map<const Eigen::VectorXd> uv(u.data(), u.size());
      const Eigen::VectorXd ref = dense_op * uv;
      const Eigen::MatrixXd got = sys.op.apply(u);
      const Eigen::Map<const Eigen::VectorXd> gv(got.data(), got.size());
      CHECK((gv - ref).cwiseAbs().maxCoeff() <= 1e-12 * ref.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("gram matrix is positive definite") {
  const PhysicalConfig phys(-1.0, 1.2, 3.0);
  const MeshConfig mesh = MeshConfig::from_counts(3.0, 2, 4, 2);
  const System2D sys = assemble_2d(phys, mesh);
  const Eigen::LLT<Eigen::MatrixXd> llt(sys.gram.dense());
  CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("load vector hat integrals for f = 1") {
  const PhysicalConfig phys(-1.0, 1.2, 4.0);
  const MeshConfig mesh = MeshConfig::from_counts(4.0, 4, 8, 4);  // h- = 1, h+ = 0.5
  const Eigen::MatrixXd b = load_vector(phys, mesh, [](double, double) { return 1.0; });
  const double hy = mesh.h_y();
  // Interior minus-side node away from the interface: h_minus * h_y.
  CHECK(b(0, 1) == doctest::Approx(1.0 * hy).epsilon(1e-13));
  // Interface node: (h_minus + h_plus)/2 * h_y.
  CHECK(b(mesh.n_minus() - 1, 1) == doctest::Approx(0.75 * hy).epsilon(1e-13));
  // Plus-side node: h_plus * h_y.
  CHECK(b(mesh.n_minus(), 1) == doctest::Approx(0.5 * hy).epsilon(1e-13));
}

TEST_CASE("load quadrature is exact for the reference source") {
  const double hc = std::sqrt(11.0) * kPi / 4.0;
  const PhysicalConfig phys(-1.0, 1.2, 10.0 * hc);
  const MeshConfig mesh = MeshConfig::from_counts(10.0 * hc, 10, 20, 2);
  const ManufacturedCase mc = make_reference_case(phys);
  const Eigen::MatrixXd b5 = load_vector(phys, mesh, mc.f);
  const Eigen::MatrixXd b3 = load_gauss3(phys, mesh, mc.f);
  CHECK((b5 - b3).cwiseAbs().maxCoeff() <= 1e-13 * b5.cwiseAbs().maxCoeff());
}

TEST_CASE("sine basis diagonalizes the y pencil") {
  const MeshConfig mesh = MeshConfig::from_counts(2.0, 2, 2, 8);
  const Grid1D yg = make_y_grid(mesh);
  const SymTridiagonal ky = stiffness_1d(yg, kOne);
  const SymTridiagonal my = mass_1d(yg, kOne);
  const SineBasis basis(mesh, my);
  REQUIRE(basis.modes() == 7);

  for (int m = 1; m <= 7; ++m) {
    const Eigen::VectorXd v = basis.matrix().col(m - 1);
    const Eigen::VectorXd kv = ky.apply(v);
    const Eigen::VectorXd mv = my.apply(v);
    const double tau2 = basis.tau(m) * basis.tau(m);
    CHECK((kv - tau2 * mv).cwiseAbs().maxCoeff() < 1e-12 * kv.cwiseAbs().maxCoeff());
  }

  // M_y-orthonormality.
  for (int a = 1; a <= 7; ++a)
    for (int c = 1; c <= 7; ++c) {
      const double ip = basis.matrix().col(a - 1).dot(my.apply(Eigen::VectorXd(basis.matrix().col(c - 1))));
      CHECK(ip == doctest::Approx(a == c ? 1.0 : 0.0).epsilon(1e-12));
    }

  // Round trip on random data.
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd u(3, 7);
  for (long i = 0; i < u.size(); ++i) u.data()[i] = gauss(rng);
  const Eigen::MatrixXd back = basis.to_nodal(basis.to_modal(u));
  CHECK((back - u).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("tridiagonal LU with partial pivoting vs dense solve") {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> n_dist(1, 40);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = n_dist(rng);
    SymTridiagonal t;
    t.diag.resize(n);
    t.off.resize(n > 0 ? n - 1 : 0);
    for (double& v : t.diag) v = gauss(rng);
    for (double& v : t.off) v = gauss(rng);
    const Eigen::MatrixXd dense = t.dense();
    if (std::abs(Eigen::FullPivLU<Eigen::MatrixXd>(dense).determinant()) < 1e-8) continue;
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b(i) = gauss(rng);
    const TridiagonalLU lu(t);
    REQUIRE(!lu.singular());
    Eigen::VectorXd x = b;
    lu.solve_in_place(x);
    const Eigen::VectorXd ref = dense.fullPivLu().solve(b);
    CHECK((x - ref).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + ref.cwiseAbs().maxCoeff()));
    CHECK((dense * x - b).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + b.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("tridiagonal LU flags exactly singular pivots") {
  SymTridiagonal t;
  t.diag = {1.0, 1.0};
  t.off = {1.0};
  const TridiagonalLU lu(t);
  CHECK(lu.singular());
  CHECK(lu.singular_row() == 1);

  SymTridiagonal z;
  z.diag = {0.0};
  z.off = {};
  CHECK(TridiagonalLU(z).singular());
}

TEST_CASE("coordinate export format") {
  SymTridiagonal t;
  t.diag = {2.0, 2.0};
  t.off = {-1.0};
  std::ostringstream os;
  write_coo(os, t);
  CHECK(os.str() ==
        "0 0 2.0000000000000000e+00\n"
        "0 1 -1.0000000000000000e+00\n"
        "1 0 -1.0000000000000000e+00\n"
        "1 1 2.0000000000000000e+00\n");
}

TEST_CASE("Rayleigh quotient of the interface profile equals the diagonal entry") {
  const double hc = std::sqrt(11.0) * kPi / 4.0;
  const PhysicalConfig phys(-1.0, 1.2, 10.0 * hc);
  const MeshConfig mesh = MeshConfig::from_counts(10.0 * hc, 10, 20, 4);
  for (const bool use_hat : {true, false}) {
    const DiagonalVariant variant =
        use_hat ? DiagonalVariant::FullBounded : DiagonalVariant::SemiBounded;
    for (int m = 1; m <= 3; ++m) {
      const ModeProfile p = mode_profile(phys, mesh, m, variant);
      Eigen::VectorXd beta(mesh.interior_x());
      for (int i = 0; i < beta.size(); ++i) beta(i) = p.beta[static_cast<size_t>(i + 1)];
      const SymTridiagonal weighted = mode_matrix(phys, mesh, m, use_hat);
      const Grid1D xg = make_x_grid(mesh, phys.half_width());
      auto one = [](double) { return 1.0; };
      const SymTridiagonal plain = add_scaled(
          stiffness_1d(xg, one), p.lambda * p.lambda, mass_1d(xg, one));
      const double rayleigh = weighted.quadratic_form(beta) / plain.quadratic_form(beta);
      const double d = diagonal_entry(phys, mesh, m, variant).value;
      CHECK(rayleigh == doctest::Approx(d).epsilon(1e-9));
      // The profile is normalized to unit energy in the plain metric.
      CHECK(plain.quadratic_form(beta) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("per-mode pencil is nearly singular at the critical mesh") {
  const double hc = std::sqrt(11.0) * kPi / 4.0;
  const PhysicalConfig phys(-1.0, 1.2, 10.0 * hc);
  const MeshConfig mesh = MeshConfig::from_counts(10.0 * hc, 10, 20, 2);
  const SymTridiagonal weighted = mode_matrix(phys, mesh, 1, true);
  const double lambda_hat = discrete_lambda_hat(1, mesh.h_y());
  const Grid1D xg = make_x_grid(mesh, phys.half_width());
  auto one = [](double) { return 1.0; };
  const SymTridiagonal plain =
      add_scaled(stiffness_1d(xg, one), lambda_hat * lambda_hat, mass_1d(xg, one));
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      weighted.dense(), plain.dense(), Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  CHECK(solver.eigenvalues().cwiseAbs().minCoeff() < 1e-8);
}

TEST_CASE("mode matrix rejects out-of-range hatted modes") {
  const PhysicalConfig phys(-1.0, 1.2, 2.0);
  const MeshConfig mesh = MeshConfig::from_counts(2.0, 2, 4, 2);
  CHECK_THROWS_AS(mode_matrix(phys, mesh, 2, true), ConfigError);
  CHECK_THROWS_AS(mode_matrix(phys, mesh, 0, false), ConfigError);
  CHECK_NOTHROW(mode_matrix(phys, mesh, 5, false));  // unhatted modes are unbounded
}
