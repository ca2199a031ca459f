#ifndef SCFEM_HARNESS_HPP
#define SCFEM_HARNESS_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "scfem/assembly.hpp"
#include "scfem/config.hpp"
#include "scfem/manufactured.hpp"
#include "scfem/spectral.hpp"

namespace scfem {

// Dense verification paths refuse meshes above this unknown count.
inline constexpr long kDenseGuard = 2000;

enum class Scenario { Critical, NearCritical, Flipped, Custom };
enum class H1Convention { Seminorm, Full };

struct SolutionField {
  MeshConfig mesh;
  Grid1D xgrid;
  Grid1D ygrid;
  Eigen::MatrixXd interior;  // interior_x() x interior_y()
};

struct ErrorPair {
  double rel_l2;
  double rel_h1;
};

struct SweepRecord {
  int m_index;
  double h_minus, h_plus, h_y;
  int n_minus, n_plus, big_m;
  double rel_l2, rel_h1;
  double min_gen_sv;
  double min_abs_diag;
};

struct SpectrumMatch {
  std::vector<double> computed;   // sorted generalized eigenvalues of (A, G)
  std::vector<double> predicted;  // sorted multiset {sigma-, sigma+, d_m}
  double max_abs_deviation;
};

// Per-mode solve: sine-transform the load, solve one tridiagonal system per
// y-mode by LU with partial pivoting, transform back.
SolutionField solve(const PhysicalConfig& phys, const MeshConfig& mesh,
                    const ManufacturedCase& mc);

// Dense LU on the assembled 2D system; unknowns capped at kDenseGuard.
SolutionField solve_dense_oracle(const PhysicalConfig& phys, const MeshConfig& mesh,
                                 const ManufacturedCase& mc);

ErrorPair errors(const PhysicalConfig& phys, const MeshConfig& mesh, const ManufacturedCase& mc,
                 const SolutionField& field, H1Convention convention = H1Convention::Seminorm);

// Scenario meshes, built from integer cell counts. Critical/NearCritical and
// Flipped follow the parameter family with r = 1/2 (resp. 2) and the y-ratio
// that places the critical angle at pi/2.
MeshConfig scenario_mesh(Scenario scenario, const PhysicalConfig& phys, int m);

// Half-width L = 10 * h_crit(1) of the critical family; the reference
// physical configuration uses this value.
double scenario_half_width(double kappa);

struct SweepOptions {
  H1Convention convention = H1Convention::Seminorm;
  bool parallel = true;
};

std::vector<SweepRecord> run_sweep(Scenario scenario, const PhysicalConfig& phys,
                                   const std::vector<int>& m_list,
                                   const SweepOptions& options = {});

std::vector<SweepRecord> run_sweep_custom(const PhysicalConfig& phys,
                                          const std::vector<MeshConfig>& meshes,
                                          const SweepOptions& options = {});

// The m-indices of the reference error-sweep figures.
const std::vector<int>& reference_m_list();

// Dense generalized symmetric eigensolve of (A, G); sorted eigenvalues.
std::vector<double> generalized_spectrum_small(const PhysicalConfig& phys,
                                               const MeshConfig& mesh);

// Predicted multiset {sigma- x (N--1)(M-1), sigma+ x (N+-1)(M-1), d_1..d_{M-1}}.
std::vector<double> predicted_spectrum(const PhysicalConfig& phys, const MeshConfig& mesh);

SpectrumMatch spectrum_match(const PhysicalConfig& phys, const MeshConfig& mesh);

// ||A x||_G / ||x||_G for x = (interface profile) tensor (sine mode); equals
// |d_m| for the FullBounded eigenvector.
double kernel_residual(const PhysicalConfig& phys, const MeshConfig& mesh, int m);

// Smallest |generalized eigenvalue| of (A, G): dense below the guard, else
// the closed-form min{|sigma-|, sigma+, min_m |d_m|}.
double min_generalized_singular(const PhysicalConfig& phys, const MeshConfig& mesh,
                                bool force_analytic = false);

// CSV serialization (17 significant digits; bit-exact round trip).
void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_sweep_csv(std::istream& is);

// Nodal field dump: "x y value" triples over the full grid, boundary included.
void write_field(std::ostream& os, const SolutionField& field);

}  // namespace scfem

#endif
