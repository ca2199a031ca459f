#include "scfem/assembly.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "scfem/spectral.hpp"

namespace scfem {

namespace {

constexpr double kPi = std::numbers::pi;

// 5-point Gauss-Legendre rule on [-1, 1].
constexpr int kGaussN = 5;
constexpr double kGaussX[kGaussN] = {-0.906179845938663992797626878299, -0.538469310105683091036314420700,
                                     0.0, 0.538469310105683091036314420700,
                                     0.906179845938663992797626878299};
constexpr double kGaussW[kGaussN] = {0.236926885056189087514264040720, 0.478628670499366468041291514836,
                                     0.568888888888888888888888888889, 0.478628670499366468041291514836,
                                     0.236926885056189087514264040720};

struct FullTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

SymTridiagonal strip_boundary(const FullTridiagonal& full) {
  const size_t n = full.diag.size();
  SymTridiagonal t;
  t.diag.assign(full.diag.begin() + 1, full.diag.end() - 1);
  if (n > 3) t.off.assign(full.off.begin() + 1, full.off.end() - 1);
  return t;
}

}  // namespace

Grid1D make_x_grid(const MeshConfig& mesh, double half_width_L) {
  Grid1D g;
  g.nodes.resize(static_cast<size_t>(mesh.n_minus() + mesh.n_plus() + 1));
  for (int n = -mesh.n_minus(); n <= mesh.n_plus(); ++n) {
    double x = n < 0 ? mesh.h_minus() * n : mesh.h_plus() * n;
    if (n == -mesh.n_minus()) x = -half_width_L;
    if (n == mesh.n_plus()) x = half_width_L;
    g.nodes[static_cast<size_t>(n + mesh.n_minus())] = x;
  }
  g.interface_index = mesh.n_minus();
  return g;
}

Grid1D make_y_grid(const MeshConfig& mesh) {
  Grid1D g;
  const int m = mesh.big_m();
  g.nodes.resize(static_cast<size_t>(m + 1));
  for (int j = 0; j <= m; ++j) g.nodes[static_cast<size_t>(j)] = kPi * j / m;
  g.interface_index = 0;
  return g;
}

void SymTridiagonal::apply(const double* x, double* y) const {
  const int n = dim();
  for (int i = 0; i < n; ++i) {
    double v = diag[static_cast<size_t>(i)] * x[i];
    if (i > 0) v += off[static_cast<size_t>(i - 1)] * x[i - 1];
    if (i + 1 < n) v += off[static_cast<size_t>(i)] * x[i + 1];
    y[i] = v;
  }
}

Eigen::VectorXd SymTridiagonal::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(x.size());
  apply(x.data(), y.data());
  return y;
}

double SymTridiagonal::quadratic_form(const Eigen::VectorXd& x) const {
  return x.dot(apply(x));
}

Eigen::MatrixXd SymTridiagonal::dense() const {
  const int n = dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = diag[static_cast<size_t>(i)];
    if (i + 1 < n) {
      m(i, i + 1) = off[static_cast<size_t>(i)];
      m(i + 1, i) = off[static_cast<size_t>(i)];
    }
  }
  return m;
}

SymTridiagonal add_scaled(const SymTridiagonal& a, double factor, const SymTridiagonal& b) {
  SymTridiagonal out = a;
  for (size_t i = 0; i < out.diag.size(); ++i) out.diag[i] += factor * b.diag[i];
  for (size_t i = 0; i < out.off.size(); ++i) out.off[i] += factor * b.off[i];
  return out;
}

SymTridiagonal stiffness_1d(const Grid1D& grid, const std::function<double(double)>& weight) {
  const size_t n = grid.nodes.size();
  if (n < 3) throw ConfigError("stiffness_1d: grid needs at least one interior node");
  FullTridiagonal full;
  full.diag.assign(n, 0.0);
  full.off.assign(n - 1, 0.0);
  for (size_t c = 0; c + 1 < n; ++c) {
    const double h = grid.nodes[c + 1] - grid.nodes[c];
    if (!(h > 0.0)) throw ConfigError("stiffness_1d: degenerate cell");
    const double w = weight(0.5 * (grid.nodes[c] + grid.nodes[c + 1]));
    full.diag[c] += w / h;
    full.diag[c + 1] += w / h;
    full.off[c] -= w / h;
  }
  return strip_boundary(full);
}

SymTridiagonal mass_1d(const Grid1D& grid, const std::function<double(double)>& weight) {
  const size_t n = grid.nodes.size();
  if (n < 3) throw ConfigError("mass_1d: grid needs at least one interior node");
  FullTridiagonal full;
  full.diag.assign(n, 0.0);
  full.off.assign(n - 1, 0.0);
  for (size_t c = 0; c + 1 < n; ++c) {
    const double h = grid.nodes[c + 1] - grid.nodes[c];
    if (!(h > 0.0)) throw ConfigError("mass_1d: degenerate cell");
    const double w = weight(0.5 * (grid.nodes[c] + grid.nodes[c + 1]));
    full.diag[c] += w * h / 3.0;
    full.diag[c + 1] += w * h / 3.0;
    full.off[c] += w * h / 6.0;
  }
  return strip_boundary(full);
}

SymTridiagonal mode_matrix(const PhysicalConfig& phys, const MeshConfig& mesh, int m,
                           bool use_hat) {
  if (m < 1) throw ConfigError("mode_matrix: mode index must be >= 1");
  if (use_hat && m > mesh.big_m() - 1)
    throw ConfigError("mode_matrix: hatted mode index must be <= M-1");
  const double lambda = use_hat ? discrete_lambda_hat(m, mesh.h_y()) : static_cast<double>(m);
  const Grid1D grid = make_x_grid(mesh, phys.half_width());
  auto sigma = [&phys](double x) { return phys.sigma(x); };
  return add_scaled(stiffness_1d(grid, sigma), lambda * lambda, mass_1d(grid, sigma));
}

namespace {

Eigen::MatrixXd left_apply(const SymTridiagonal& t, const Eigen::MatrixXd& u) {
  const int n = t.dim();
  Eigen::MatrixXd out(n, u.cols());
  for (int i = 0; i < n; ++i) {
    out.row(i) = t.diag[static_cast<size_t>(i)] * u.row(i);
    if (i > 0) out.row(i) += t.off[static_cast<size_t>(i - 1)] * u.row(i - 1);
    if (i + 1 < n) out.row(i) += t.off[static_cast<size_t>(i)] * u.row(i + 1);
  }
  return out;
}

Eigen::MatrixXd right_apply(const SymTridiagonal& t, const Eigen::MatrixXd& u) {
  const int n = t.dim();
  Eigen::MatrixXd out(u.rows(), n);
  for (int j = 0; j < n; ++j) {
    out.col(j) = t.diag[static_cast<size_t>(j)] * u.col(j);
    if (j > 0) out.col(j) += t.off[static_cast<size_t>(j - 1)] * u.col(j - 1);
    if (j + 1 < n) out.col(j) += t.off[static_cast<size_t>(j)] * u.col(j + 1);
  }
  return out;
}

}  // namespace

Eigen::MatrixXd TensorOperator::apply(const Eigen::MatrixXd& u) const {
  return right_apply(my, left_apply(kx, u)) + right_apply(ky, left_apply(mx, u));
}

Eigen::MatrixXd TensorOperator::dense() const {
  const int nx = kx.dim();
  const int ny = ky.dim();
  const Eigen::MatrixXd dkx = kx.dense();
  const Eigen::MatrixXd dmx = mx.dense();
  const Eigen::MatrixXd dky = ky.dense();
  const Eigen::MatrixXd dmy = my.dense();
  Eigen::MatrixXd out(static_cast<long>(nx) * ny, static_cast<long>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int jp = 0; jp < ny; ++jp)
      out.block(static_cast<long>(j) * nx, static_cast<long>(jp) * nx, nx, nx) =
          dmy(j, jp) * dkx + dky(j, jp) * dmx;
  return out;
}

System2D assemble_2d(const PhysicalConfig& phys, const MeshConfig& mesh) {
  const Grid1D xg = make_x_grid(mesh, phys.half_width());
  const Grid1D yg = make_y_grid(mesh);
  auto sigma = [&phys](double x) { return phys.sigma(x); };
  auto one = [](double) { return 1.0; };
  System2D sys;
  sys.op.kx = stiffness_1d(xg, sigma);
  sys.op.mx = mass_1d(xg, sigma);
  sys.op.ky = stiffness_1d(yg, one);
  sys.op.my = mass_1d(yg, one);
  sys.gram.kx = stiffness_1d(xg, one);
  sys.gram.mx = mass_1d(xg, one);
  sys.gram.ky = sys.op.ky;
  sys.gram.my = sys.op.my;
  return sys;
}

Eigen::MatrixXd load_vector(const PhysicalConfig& phys, const MeshConfig& mesh,
                            const std::function<double(double, double)>& f) {
  const Grid1D xg = make_x_grid(mesh, phys.half_width());
  const Grid1D yg = make_y_grid(mesh);
  const int nx = static_cast<int>(xg.nodes.size());
  const int ny = static_cast<int>(yg.nodes.size());
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(nx, ny);

  std::vector<double> ys(static_cast<size_t>(kGaussN * (ny - 1)));
  std::vector<double> wy(ys.size());
  std::vector<double> psiL(ys.size());
  for (int j = 0; j + 1 < ny; ++j) {
    const double y0 = yg.nodes[static_cast<size_t>(j)];
    const double y1 = yg.nodes[static_cast<size_t>(j + 1)];
    for (int q = 0; q < kGaussN; ++q) {
      const size_t k = static_cast<size_t>(j * kGaussN + q);
      ys[k] = 0.5 * (y0 + y1) + 0.5 * (y1 - y0) * kGaussX[q];
      wy[k] = 0.5 * (y1 - y0) * kGaussW[q];
      psiL[k] = (y1 - ys[k]) / (y1 - y0);
    }
  }

  for (int i = 0; i + 1 < nx; ++i) {
    const double x0 = xg.nodes[static_cast<size_t>(i)];
    const double x1 = xg.nodes[static_cast<size_t>(i + 1)];
    double xs[kGaussN], wx[kGaussN], phiL[kGaussN];
    for (int q = 0; q < kGaussN; ++q) {
      xs[q] = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * kGaussX[q];
      wx[q] = 0.5 * (x1 - x0) * kGaussW[q];
      phiL[q] = (x1 - xs[q]) / (x1 - x0);
    }
    for (int j = 0; j + 1 < ny; ++j) {
      double c00 = 0.0, c10 = 0.0, c01 = 0.0, c11 = 0.0;
      for (int qx = 0; qx < kGaussN; ++qx) {
        for (int qy = 0; qy < kGaussN; ++qy) {
          const size_t k = static_cast<size_t>(j * kGaussN + qy);
          const double fv = f(xs[qx], ys[k]) * wx[qx] * wy[k];
          const double pl = phiL[qx];
          const double ql = psiL[k];
          c00 += fv * pl * ql;
          c10 += fv * (1.0 - pl) * ql;
          c01 += fv * pl * (1.0 - ql);
          c11 += fv * (1.0 - pl) * (1.0 - ql);
        }
      }
      full(i, j) += c00;
      full(i + 1, j) += c10;
      full(i, j + 1) += c01;
      full(i + 1, j + 1) += c11;
    }
  }
  return full.block(1, 1, nx - 2, ny - 2);
}

SineBasis::SineBasis(const MeshConfig& mesh, const SymTridiagonal& mass_y) {
  const int ny = mesh.interior_y();
  if (ny < 1) throw ConfigError("SineBasis: mesh needs M >= 2");
  basis_.resize(ny, ny);
  tau_.resize(static_cast<size_t>(ny));
  Eigen::VectorXd s(ny);
  for (int m = 1; m <= ny; ++m) {
    for (int l = 1; l <= ny; ++l)
      s(l - 1) = std::sin(kPi * static_cast<double>(m) * l / mesh.big_m());
    const double norm2 = mass_y.quadratic_form(s);
    basis_.col(m - 1) = s / std::sqrt(norm2);
    tau_[static_cast<size_t>(m - 1)] = discrete_lambda_hat(m, mesh.h_y());
  }
  mass_basis_.resize(ny, ny);
  for (int c = 0; c < ny; ++c)
    mass_basis_.col(c) = mass_y.apply(Eigen::VectorXd(basis_.col(c)));
}

Eigen::MatrixXd SineBasis::to_modal(const Eigen::MatrixXd& nodal) const {
  return nodal * mass_basis_;
}

Eigen::MatrixXd SineBasis::to_nodal(const Eigen::MatrixXd& modal) const {
  return modal * basis_.transpose();
}

Eigen::MatrixXd SineBasis::transform_load(const Eigen::MatrixXd& load) const {
  return load * basis_;
}

void write_coo(std::ostream& os, const SymTridiagonal& m) {
  char buf[96];
  const int n = m.dim();
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      std::snprintf(buf, sizeof buf, "%d %d %.16e\n", i, i - 1, m.off[static_cast<size_t>(i - 1)]);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, "%d %d %.16e\n", i, i, m.diag[static_cast<size_t>(i)]);
    os << buf;
    if (i + 1 < n) {
      std::snprintf(buf, sizeof buf, "%d %d %.16e\n", i, i + 1, m.off[static_cast<size_t>(i)]);
      os << buf;
    }
  }
}

void write_coo(std::ostream& os, const Eigen::MatrixXd& m) {
  char buf[96];
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0) {
        std::snprintf(buf, sizeof buf, "%ld %ld %.16e\n", i, j, m(i, j));
        os << buf;
      }
}

TridiagonalLU::TridiagonalLU(const SymTridiagonal& t) : n_(t.dim()) {
  d_ = t.diag;
  dl_ = t.off;
  du_ = t.off;
  du2_.assign(n_ > 2 ? static_cast<size_t>(n_ - 2) : 0, 0.0);
  pivot_.assign(n_ > 1 ? static_cast<size_t>(n_ - 1) : 0, 0);
  for (int i = 0; i + 1 < n_; ++i) {
    if (std::abs(d_[static_cast<size_t>(i)]) >= std::abs(dl_[static_cast<size_t>(i)])) {
      const double di = d_[static_cast<size_t>(i)];
      if (di != 0.0) {
        const double fact = dl_[static_cast<size_t>(i)] / di;
        dl_[static_cast<size_t>(i)] = fact;
        d_[static_cast<size_t>(i + 1)] -= fact * du_[static_cast<size_t>(i)];
      } else {
        if (singular_row_ < 0) singular_row_ = i;
        dl_[static_cast<size_t>(i)] = 0.0;
      }
      if (i + 2 < n_) du2_[static_cast<size_t>(i)] = 0.0;
      pivot_[static_cast<size_t>(i)] = 0;
    } else {
      const double fact = d_[static_cast<size_t>(i)] / dl_[static_cast<size_t>(i)];
      d_[static_cast<size_t>(i)] = dl_[static_cast<size_t>(i)];
      dl_[static_cast<size_t>(i)] = fact;
      const double temp = du_[static_cast<size_t>(i)];
      du_[static_cast<size_t>(i)] = d_[static_cast<size_t>(i + 1)];
      d_[static_cast<size_t>(i + 1)] = temp - fact * d_[static_cast<size_t>(i + 1)];
      if (i + 2 < n_) {
        du2_[static_cast<size_t>(i)] = du_[static_cast<size_t>(i + 1)];
        du_[static_cast<size_t>(i + 1)] *= -fact;
      }
      pivot_[static_cast<size_t>(i)] = 1;
    }
  }
  if (singular_row_ < 0 && d_[static_cast<size_t>(n_ - 1)] == 0.0) singular_row_ = n_ - 1;
}

void TridiagonalLU::solve_in_place(Eigen::VectorXd& b) const {
  for (int i = 0; i + 1 < n_; ++i) {
    if (pivot_[static_cast<size_t>(i)] == 0) {
      b(i + 1) -= dl_[static_cast<size_t>(i)] * b(i);
    } else {
      const double temp = b(i);
      b(i) = b(i + 1);
      b(i + 1) = temp - dl_[static_cast<size_t>(i)] * b(i);
    }
  }
  b(n_ - 1) /= d_[static_cast<size_t>(n_ - 1)];
  if (n_ > 1)
    b(n_ - 2) = (b(n_ - 2) - du_[static_cast<size_t>(n_ - 2)] * b(n_ - 1)) /
                d_[static_cast<size_t>(n_ - 2)];
  for (int i = n_ - 3; i >= 0; --i)
    b(i) = (b(i) - du_[static_cast<size_t>(i)] * b(i + 1) - du2_[static_cast<size_t>(i)] * b(i + 2)) /
           d_[static_cast<size_t>(i)];
}

}  // namespace scfem
