#ifndef SCFEM_STABILITY_HPP
#define SCFEM_STABILITY_HPP

#include <optional>
#include <string>
#include <vector>

#include "scfem/config.hpp"
#include "scfem/spectral.hpp"

namespace scfem {

enum class Regime { Stable, Unstable, Boundary };

enum class ConditionId {
  AssR_a,
  AssR_b,
  AssR_vv_a,
  AssR_vv_b,
  AssRy_a,
  AssRy_b,
  AssRy_vv_a,
  AssRy_vv_b,
  AssRL_vv_a,
  AssRL_vv_b,
  AssRyL_vv_a,
  AssRyL_vv_b,
  None
};

const char* to_string(Regime r);
const char* to_string(ConditionId c);

struct StabilityVerdict {
  Regime regime = Regime::Boundary;
  ConditionId condition = ConditionId::None;
  std::optional<double> min_factor;          // the min{...} expression of the stability estimate
  std::optional<double> inverse_norm_bound;  // 1/(|sigma_minus| * min_factor), Stable only
  std::optional<double> epsilon_slack;       // bounded-domain verdicts
  std::optional<double> critical_t;
  std::optional<double> critical_s;
  // Full-discretization diagnostics: stable overall but the semi-discrete
  // conditions alone would be unstable.
  bool semi_discrete_unstable = false;
  // Bounded-domain stability holds only for h_minus below an unquantified
  // threshold; serialized verdicts carry this caveat.
  bool small_h_caveat = false;
};

struct CriticalMesh {
  int m;
  double h_minus;
};

struct MinDiagonal {
  int m_star;
  double value;  // |d| at the minimizing mode
};

// Semi-discretization on the unbounded domain.
StabilityVerdict classify_semi(double kappa, double r, double sigma_abs = 1.0,
                               double tol = 1e-12);

// Full discretization on the unbounded domain.
StabilityVerdict classify_full(double kappa, double r, double ry, double sigma_abs = 1.0,
                               double tol = 1e-12);

// Bounded domain (semi when ry is absent, full when present) with slack
// epsilon in (0,1).
StabilityVerdict classify_bounded(double kappa, double r, std::optional<double> ry,
                                  double epsilon = 0.05, double sigma_abs = 1.0,
                                  double tol = 1e-12);

// Mesh widths h_minus with a (near-)singular discretization: s_crit/(r_y m)
// for the full discretization, t_crit/m for the semi one (ry absent).
std::vector<CriticalMesh> critical_meshes(double kappa, double r, std::optional<double> ry,
                                          int m_max);

// r_y making the critical angle rational: s_crit(kappa, r, r_y) = pi*l/k.
double solve_ry_for_rational_s(double kappa, double r, int l, int k);

// Minimizer of |d| over the FullBounded diagonal entries m = 1..M-1.
MinDiagonal min_abs_diagonal(const PhysicalConfig& phys, const MeshConfig& mesh);

}  // namespace scfem

#endif
