#include "scfem/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "scfem/errors.hpp"
#include "scfem/stability.hpp"

namespace scfem {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr int kGaussN = 5;
constexpr double kGaussX[kGaussN] = {-0.906179845938663992797626878299, -0.538469310105683091036314420700,
                                     0.0, 0.538469310105683091036314420700,
                                     0.906179845938663992797626878299};
constexpr double kGaussW[kGaussN] = {0.236926885056189087514264040720, 0.478628670499366468041291514836,
                                     0.568888888888888888888888888889, 0.478628670499366468041291514836,
                                     0.236926885056189087514264040720};

struct PerModeContext {
  SymTridiagonal kx, mx;  // sigma-weighted
  SineBasis basis;
};

PerModeContext make_context(const PhysicalConfig& phys, const MeshConfig& mesh) {
  const Grid1D xg = make_x_grid(mesh, phys.half_width());
  const Grid1D yg = make_y_grid(mesh);
  auto sigma = [&phys](double x) { return phys.sigma(x); };
  auto one = [](double) { return 1.0; };
  return {stiffness_1d(xg, sigma), mass_1d(xg, sigma), SineBasis(mesh, mass_1d(yg, one))};
}

// Solves (K + tau_k^2 M) u_k = rhs_k for every column in the sine-mode basis.
Eigen::MatrixXd per_mode_solve(const SymTridiagonal& kx, const SymTridiagonal& mx,
                               const SineBasis& basis, const Eigen::MatrixXd& modal_rhs) {
  Eigen::MatrixXd out(modal_rhs.rows(), modal_rhs.cols());
  for (int k = 0; k < modal_rhs.cols(); ++k) {
    const double tau = basis.tau(k + 1);
    const TridiagonalLU lu(add_scaled(kx, tau * tau, mx));
    if (lu.singular()) {
      std::ostringstream os;
      os << "exactly singular pivot in mode " << (k + 1) << " (row " << lu.singular_row() << ")";
      throw SingularSystem(os.str(), k + 1);
    }
    Eigen::VectorXd col = modal_rhs.col(k);
    lu.solve_in_place(col);
    out.col(k) = col;
  }
  return out;
}

}  // namespace

SolutionField solve(const PhysicalConfig& phys, const MeshConfig& mesh,
                    const ManufacturedCase& mc) {
  const PerModeContext ctx = make_context(phys, mesh);
  const Eigen::MatrixXd load = load_vector(phys, mesh, mc.f);
  const Eigen::MatrixXd modal_rhs = ctx.basis.transform_load(load);
  const Eigen::MatrixXd modal_sol = per_mode_solve(ctx.kx, ctx.mx, ctx.basis, modal_rhs);
  SolutionField field{mesh, make_x_grid(mesh, phys.half_width()), make_y_grid(mesh),
                      ctx.basis.to_nodal(modal_sol)};
  return field;
}

SolutionField solve_dense_oracle(const PhysicalConfig& phys, const MeshConfig& mesh,
                                 const ManufacturedCase& mc) {
  if (mesh.total_unknowns() > kDenseGuard) {
    std::ostringstream os;
    os << "dense oracle refused: " << mesh.total_unknowns() << " unknowns exceed the cap of "
       << kDenseGuard;
    throw ConfigError(os.str());
  }
  const System2D sys = assemble_2d(phys, mesh);
  Eigen::MatrixXd load = load_vector(phys, mesh, mc.f);
  const long n = mesh.total_unknowns();
  const Eigen::Map<Eigen::VectorXd> b(load.data(), n);
  const Eigen::VectorXd x = Eigen::PartialPivLU<Eigen::MatrixXd>(sys.op.dense()).solve(b);
  SolutionField field{mesh, make_x_grid(mesh, phys.half_width()), make_y_grid(mesh),
                      Eigen::MatrixXd(Eigen::Map<const Eigen::MatrixXd>(
                          x.data(), mesh.interior_x(), mesh.interior_y()))};
  return field;
}

ErrorPair errors(const PhysicalConfig& phys, const MeshConfig& mesh, const ManufacturedCase& mc,
                 const SolutionField& field, H1Convention convention) {
  (void)phys;
  (void)mesh;
  const std::vector<double>& xn = field.xgrid.nodes;
  const std::vector<double>& yn = field.ygrid.nodes;
  const int nx = static_cast<int>(xn.size());
  const int ny = static_cast<int>(yn.size());
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(nx, ny);
  full.block(1, 1, nx - 2, ny - 2) = field.interior;

  // Per-y-cell Gauss data, reused across the x loop.
  std::vector<double> ys(static_cast<size_t>((ny - 1) * kGaussN));
  std::vector<double> wy(ys.size()), psiL(ys.size()), dyi(static_cast<size_t>(ny - 1));
  for (int j = 0; j + 1 < ny; ++j) {
    const double y0 = yn[static_cast<size_t>(j)], y1 = yn[static_cast<size_t>(j + 1)];
    dyi[static_cast<size_t>(j)] = 1.0 / (y1 - y0);
    for (int q = 0; q < kGaussN; ++q) {
      const size_t k = static_cast<size_t>(j * kGaussN + q);
      ys[k] = 0.5 * (y0 + y1) + 0.5 * (y1 - y0) * kGaussX[q];
      wy[k] = 0.5 * (y1 - y0) * kGaussW[q];
      psiL[k] = (y1 - ys[k]) * dyi[static_cast<size_t>(j)];
    }
  }

  double num_l2 = 0.0, den_l2 = 0.0, num_g = 0.0, den_g = 0.0;
  for (int i = 0; i + 1 < nx; ++i) {
    const double x0 = xn[static_cast<size_t>(i)], x1 = xn[static_cast<size_t>(i + 1)];
    const double dxi = 1.0 / (x1 - x0);
    double xs[kGaussN], wx[kGaussN], phiL[kGaussN];
    for (int q = 0; q < kGaussN; ++q) {
      xs[q] = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * kGaussX[q];
      wx[q] = 0.5 * (x1 - x0) * kGaussW[q];
      phiL[q] = (x1 - xs[q]) * dxi;
    }
    for (int j = 0; j + 1 < ny; ++j) {
      const double c00 = full(i, j), c10 = full(i + 1, j);
      const double c01 = full(i, j + 1), c11 = full(i + 1, j + 1);
      for (int qx = 0; qx < kGaussN; ++qx) {
        const double pl = phiL[qx];
        const double pr = 1.0 - pl;
        for (int qy = 0; qy < kGaussN; ++qy) {
          const size_t k = static_cast<size_t>(j * kGaussN + qy);
          const double ql = psiL[k];
          const double qr = 1.0 - ql;
          const double w = wx[qx] * wy[k];
          const double uh = c00 * pl * ql + c10 * pr * ql + c01 * pl * qr + c11 * pr * qr;
          const double uhx = ((c10 - c00) * ql + (c11 - c01) * qr) * dxi;
          const double uhy = ((c01 - c00) * pl + (c11 - c10) * pr) * dyi[static_cast<size_t>(j)];
          const double ue = mc.u(xs[qx], ys[k]);
          const auto g = mc.grad(xs[qx], ys[k]);
          num_l2 += w * (ue - uh) * (ue - uh);
          den_l2 += w * ue * ue;
          num_g += w * ((g[0] - uhx) * (g[0] - uhx) + (g[1] - uhy) * (g[1] - uhy));
          den_g += w * (g[0] * g[0] + g[1] * g[1]);
        }
      }
    }
  }
  ErrorPair e{};
  e.rel_l2 = std::sqrt(num_l2 / den_l2);
  if (convention == H1Convention::Seminorm)
    e.rel_h1 = std::sqrt(num_g / den_g);
  else
    e.rel_h1 = std::sqrt((num_g + num_l2) / (den_g + den_l2));
  return e;
}

double scenario_half_width(double kappa) {
  const double ry = solve_ry_for_rational_s(kappa, 0.5, 1, 2);
  return 10.0 * (kPi / 2.0) / ry;
}

MeshConfig scenario_mesh(Scenario scenario, const PhysicalConfig& phys, int m) {
  if (m < 1) throw ConfigError("scenario_mesh: m must be >= 1");
  const double L = scenario_half_width(phys.kappa());
  if (std::abs(phys.half_width() - L) > 1e-9 * L) {
    std::ostringstream os;
    os << "scenario_mesh: configured half-width " << phys.half_width()
       << " does not match the sweep family value " << L;
    throw ConfigError(os.str());
  }
  switch (scenario) {
    case Scenario::Critical:
      return MeshConfig::from_counts(L, 10 * m, 20 * m, 2 * m);
    case Scenario::NearCritical:
      return MeshConfig::from_counts(L, 10 * m + 5, 20 * m + 10, 2 * m + 1);
    case Scenario::Flipped:
      return MeshConfig::from_counts(L, 20 * m, 10 * m, 2 * m);
    case Scenario::Custom:
      break;
  }
  throw ConfigError("scenario_mesh: the custom scenario takes explicit meshes");
}

namespace {

SweepRecord make_record(const PhysicalConfig& phys, const MeshConfig& mesh, int m_index,
                        const SweepOptions& options) {
  const ManufacturedCase mc = make_reference_case(phys);
  const SolutionField field = solve(phys, mesh, mc);
  const ErrorPair e = errors(phys, mesh, mc, field, options.convention);
  SweepRecord rec{};
  rec.m_index = m_index;
  rec.h_minus = mesh.h_minus();
  rec.h_plus = mesh.h_plus();
  rec.h_y = mesh.h_y();
  rec.n_minus = mesh.n_minus();
  rec.n_plus = mesh.n_plus();
  rec.big_m = mesh.big_m();
  rec.rel_l2 = e.rel_l2;
  rec.rel_h1 = e.rel_h1;
  rec.min_abs_diag = min_abs_diagonal(phys, mesh).value;
  rec.min_gen_sv =
      std::min(std::min(std::abs(phys.sigma_minus()), phys.sigma_plus()), rec.min_abs_diag);
  return rec;
}

std::vector<SweepRecord> sweep_over(const PhysicalConfig& phys,
                                    const std::vector<MeshConfig>& meshes,
                                    const std::vector<int>& labels,
                                    const SweepOptions& options) {
  std::vector<SweepRecord> records(meshes.size());
  const unsigned workers =
      options.parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1u;
  if (workers <= 1 || meshes.size() <= 1) {
    for (size_t i = 0; i < meshes.size(); ++i)
      records[i] = make_record(phys, meshes[i], labels[i], options);
    return records;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= meshes.size()) return;
      try {
        records[i] = make_record(phys, meshes[i], labels[i], options);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::min<size_t>(workers, meshes.size()); ++w)
    pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return records;
}

}  // namespace

std::vector<SweepRecord> run_sweep(Scenario scenario, const PhysicalConfig& phys,
                                   const std::vector<int>& m_list, const SweepOptions& options) {
  if (scenario == Scenario::Custom)
    throw ConfigError("run_sweep: use run_sweep_custom for explicit meshes");
  std::vector<MeshConfig> meshes;
  meshes.reserve(m_list.size());
  for (int m : m_list) meshes.push_back(scenario_mesh(scenario, phys, m));
  return sweep_over(phys, meshes, m_list, options);
}

std::vector<SweepRecord> run_sweep_custom(const PhysicalConfig& phys,
                                          const std::vector<MeshConfig>& meshes,
                                          const SweepOptions& options) {
  std::vector<int> labels(meshes.size());
  for (size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i + 1);
  return sweep_over(phys, meshes, labels, options);
}

const std::vector<int>& reference_m_list() {
  static const std::vector<int> list = {1,  2,  3,  4,  5,  6,  7,  8,  10, 12, 15, 18, 22,
                                        26, 31, 38, 46, 55, 66, 79, 95, 114, 137, 164, 197};
  return list;
}

std::vector<double> generalized_spectrum_small(const PhysicalConfig& phys,
                                               const MeshConfig& mesh) {
  if (mesh.total_unknowns() > kDenseGuard) {
    std::ostringstream os;
    os << "generalized_spectrum_small refused: " << mesh.total_unknowns()
       << " unknowns exceed the cap of " << kDenseGuard;
    throw ConfigError(os.str());
  }
  const System2D sys = assemble_2d(phys, mesh);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      sys.op.dense(), sys.gram.dense(), Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> predicted_spectrum(const PhysicalConfig& phys, const MeshConfig& mesh) {
  std::vector<double> out;
  const int ny = mesh.interior_y();
  out.reserve(static_cast<size_t>(mesh.total_unknowns()));
  for (int i = 0; i < (mesh.n_minus() - 1) * ny; ++i) out.push_back(phys.sigma_minus());
  for (int i = 0; i < (mesh.n_plus() - 1) * ny; ++i) out.push_back(phys.sigma_plus());
  for (int m = 1; m <= ny; ++m)
    out.push_back(diagonal_entry(phys, mesh, m, DiagonalVariant::FullBounded).value);
  std::sort(out.begin(), out.end());
  return out;
}

SpectrumMatch spectrum_match(const PhysicalConfig& phys, const MeshConfig& mesh) {
  SpectrumMatch match;
  match.computed = generalized_spectrum_small(phys, mesh);
  match.predicted = predicted_spectrum(phys, mesh);
  if (match.computed.size() != match.predicted.size())
    throw ConsistencyError("spectrum_match: dimension mismatch");
  match.max_abs_deviation = 0.0;
  for (size_t i = 0; i < match.computed.size(); ++i)
    match.max_abs_deviation =
        std::max(match.max_abs_deviation, std::abs(match.computed[i] - match.predicted[i]));
  return match;
}

double kernel_residual(const PhysicalConfig& phys, const MeshConfig& mesh, int m) {
  const ModeProfile profile = mode_profile(phys, mesh, m, DiagonalVariant::FullBounded);
  const System2D sys = assemble_2d(phys, mesh);
  const Grid1D yg = make_y_grid(mesh);
  auto one = [](double) { return 1.0; };
  const SineBasis basis(mesh, mass_1d(yg, one));

  const int nx = mesh.interior_x();
  Eigen::VectorXd beta(nx);
  for (int i = 0; i < nx; ++i) beta(i) = profile.beta[static_cast<size_t>(i + 1)];
  const Eigen::MatrixXd x = beta * basis.matrix().col(m - 1).transpose();

  const Eigen::MatrixXd ax = sys.op.apply(x);
  const Eigen::MatrixXd gx = sys.gram.apply(x);
  // G^{-1}(Ax) through the same sine-mode reduction (the Gram tensor shares
  // the y factors).
  const Eigen::MatrixXd ginv_ax =
      basis.to_nodal(per_mode_solve(sys.gram.kx, sys.gram.mx, basis, basis.transform_load(ax)));
  const double num = (ax.array() * ginv_ax.array()).sum();
  const double den = (x.array() * gx.array()).sum();
  return std::sqrt(num / den);
}

double min_generalized_singular(const PhysicalConfig& phys, const MeshConfig& mesh,
                                bool force_analytic) {
  if (!force_analytic && mesh.total_unknowns() <= kDenseGuard) {
    const std::vector<double> ev = generalized_spectrum_small(phys, mesh);
    double best = std::abs(ev.front());
    for (double v : ev) best = std::min(best, std::abs(v));
    return best;
  }
  return std::min(std::min(std::abs(phys.sigma_minus()), phys.sigma_plus()),
                  min_abs_diagonal(phys, mesh).value);
}

void write_field(std::ostream& os, const SolutionField& field) {
  const int nx = static_cast<int>(field.xgrid.nodes.size());
  const int ny = static_cast<int>(field.ygrid.nodes.size());
  char buf[128];
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const bool interior = i > 0 && i + 1 < nx && j > 0 && j + 1 < ny;
      const double v = interior ? field.interior(i - 1, j - 1) : 0.0;
      std::snprintf(buf, sizeof buf, "%.16e %.16e %.16e\n", field.xgrid.nodes[static_cast<size_t>(i)],
                    field.ygrid.nodes[static_cast<size_t>(j)], v);
      os << buf;
    }
}

}  // namespace scfem
