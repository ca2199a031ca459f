#ifndef SCFEM_SPECTRAL_HPP
#define SCFEM_SPECTRAL_HPP

#include <vector>

#include "scfem/config.hpp"

namespace scfem {

// Closed-form spectral quantities of the interface block: local recurrence
// coefficients, characteristic roots, diagonal entries of the four
// discretization variants and the auxiliary scalar functions behind them.

struct LocalCoeffs {
  double a;
  double b;
};

struct MuRoots {
  double mu1;
  double mu2;
  bool degenerate;
};

enum class DiagonalVariant { SemiUnbounded, FullUnbounded, SemiBounded, FullBounded };

struct ModeCoefficients {
  int mode_m = 0;
  double lambda = 0.0;  // m for semi-discrete variants, tau_m for full
  double a_minus = 0.0, a_plus = 0.0;
  double b_minus = 0.0, b_plus = 0.0;
  double mu1_minus = 0.0, mu2_minus = 0.0;
  double mu1_plus = 0.0, mu2_plus = 0.0;
  double mu_minus = 0.0, mu_plus = 0.0;  // selected roots (the |mu|<1 ones)
  double nu_minus = 0.0, nu_plus = 0.0;  // mu1/mu2, in (0,1) off the degeneracy
  bool degenerate_minus = false, degenerate_plus = false;
};

struct DiagonalEntry {
  int mode_m;
  DiagonalVariant variant;
  double value;
};

// Interface eigenvector coefficients beta_n, n = -N_minus..N_plus, scaled to
// unit H^1_0 norm of the associated tensor-product function.
struct ModeProfile {
  int mode_m;
  DiagonalVariant variant;
  double lambda;
  double beta0;
  std::vector<double> beta;  // size n_minus + n_plus + 1; beta.front()=beta.back()=0
  int n_minus;

  double at(int n) const { return beta[static_cast<size_t>(n + n_minus)]; }
};

// Geometric tails of the unbounded-domain interface eigenvector, truncated
// where |mu|^n drops below the cutoff.
struct TruncatedProfile {
  double beta0;
  std::vector<double> minus_tail;  // beta_{-1}, beta_{-2}, ...
  std::vector<double> plus_tail;   // beta_{1}, beta_{2}, ...
};

// a = 1/h + lambda^2 h/3, b = -1/h + lambda^2 h/6.
LocalCoeffs local_coeffs(double lambda, double h);

// Roots of b*mu^2 + 2a*mu + b. |mu1| < 1 < |mu2| and mu1*mu2 = 1 off the
// degeneracy b = 0, where (0, 1) is recorded by convention.
MuRoots mu_roots(double a, double b);

double f_kr(double kappa, double r, double t);

// The unique nonnegative root of f_kr, sqrt(12(1-kappa^2)/(kappa^2 r^2 - 1)).
double t_crit(double kappa, double r);

double frak_h(double ry, double s);

// The unique s in (0, pi] with frak_h(ry, s) = t_crit(kappa, r).
double s_crit(double kappa, double r, double ry);

// Discrete sine eigenvalue tau_m of the y-direction pencil, >= m.
double discrete_lambda_hat(int m, double hy);

double frak_q(double t);
double frak_j(double n, double q);
double frak_z(double r, double lambda, double L, double t);
double f_tilde(double kappa, double r, double lambda, double L, double t);

ModeCoefficients mode_coefficients(const PhysicalConfig& phys, const MeshConfig& mesh, int m,
                                   DiagonalVariant variant);

// Diagonal entry of the interface block, computed by both the root-quotient
// form and the composed-function form; the two must agree.
DiagonalEntry diagonal_entry(const PhysicalConfig& phys, const MeshConfig& mesh, int m,
                             DiagonalVariant variant);

ModeProfile mode_profile(const PhysicalConfig& phys, const MeshConfig& mesh, int m,
                         DiagonalVariant variant);

TruncatedProfile truncated_unbounded_profile(const ModeCoefficients& coeffs,
                                             double tail_cutoff = 1e-16);

// sign(mu)^k * |mu|^k without overflow for large k.
double signed_pow(double mu, long k);

}  // namespace scfem

#endif
