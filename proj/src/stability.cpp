#include "scfem/stability.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace scfem {

namespace {

constexpr double kPi = std::numbers::pi;

void require_classifiable(double kappa, double r) {
  if (!(kappa < 0.0)) throw ConfigError("classification requires kappa < 0");
  if (!(r > 0.0)) throw ConfigError("classification requires r > 0");
}

double quarter_min(double kappa, double r) {
  const double ak = std::abs(kappa);
  return std::min(std::min(1.0, ak),
                  std::min(std::abs((1.0 + kappa) / 2.0), std::abs((1.0 + r * kappa) / (1.0 + r))));
}

double quarter_min_full(double kappa, double r, double ry) {
  const double ak = std::abs(kappa);
  const double sy = std::sqrt(1.0 + ry * ry);
  const double sxy = std::sqrt(r * r + ry * ry);
  const double fourth = std::abs((sy + kappa * sxy) / (sy + sxy));
  return std::min(std::min(1.0, ak), std::min(std::abs((1.0 + kappa) / 2.0), fourth));
}

void finish_stable(StabilityVerdict& v, double min_factor, double sigma_abs) {
  v.regime = Regime::Stable;
  v.min_factor = min_factor;
  v.inverse_norm_bound = 1.0 / (sigma_abs * min_factor);
}

}  // namespace

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Stable: return "Stable";
    case Regime::Unstable: return "Unstable";
    case Regime::Boundary: return "Boundary";
  }
  return "?";
}

const char* to_string(ConditionId c) {
  switch (c) {
    case ConditionId::AssR_a: return "AssR_a";
    case ConditionId::AssR_b: return "AssR_b";
    case ConditionId::AssR_vv_a: return "AssR_vv_a";
    case ConditionId::AssR_vv_b: return "AssR_vv_b";
    case ConditionId::AssRy_a: return "AssRy_a";
    case ConditionId::AssRy_b: return "AssRy_b";
    case ConditionId::AssRy_vv_a: return "AssRy_vv_a";
    case ConditionId::AssRy_vv_b: return "AssRy_vv_b";
    case ConditionId::AssRL_vv_a: return "AssRL_vv_a";
    case ConditionId::AssRL_vv_b: return "AssRL_vv_b";
    case ConditionId::AssRyL_vv_a: return "AssRyL_vv_a";
    case ConditionId::AssRyL_vv_b: return "AssRyL_vv_b";
    case ConditionId::None: return "None";
  }
  return "?";
}

StabilityVerdict classify_semi(double kappa, double r, double sigma_abs, double tol) {
  require_classifiable(kappa, r);
  StabilityVerdict v;
  const double ak = std::abs(kappa);
  if (std::abs(ak - 1.0) <= tol || std::abs(r * ak - 1.0) <= tol) return v;  // Boundary
  if (ak < 1.0) {
    if (r * ak > 1.0) {
      v.regime = Regime::Unstable;
      v.condition = ConditionId::AssR_a;
      v.critical_t = t_crit(kappa, r);
    } else {
      finish_stable(v, quarter_min(kappa, r), sigma_abs);
      v.condition = ConditionId::AssR_vv_a;
    }
  } else {
    if (r * ak < 1.0) {
      v.regime = Regime::Unstable;
      v.condition = ConditionId::AssR_b;
      v.critical_t = t_crit(kappa, r);
    } else {
      finish_stable(v, quarter_min(kappa, r), sigma_abs);
      v.condition = ConditionId::AssR_vv_b;
    }
  }
  return v;
}

StabilityVerdict classify_full(double kappa, double r, double ry, double sigma_abs, double tol) {
  require_classifiable(kappa, r);
  if (!(ry > 0.0)) throw ConfigError("classification requires r_y > 0");
  StabilityVerdict v;
  const double ak = std::abs(kappa);
  const double lhs = r * r * kappa * kappa;
  const double rhs = 1.0 + ry * ry * (1.0 - kappa * kappa);
  if (std::abs(ak - 1.0) <= tol || std::abs(lhs - rhs) <= tol * std::max(1.0, std::abs(rhs)))
    return v;  // Boundary
  const bool unstable = (ak < 1.0 && lhs > rhs) || (ak > 1.0 && lhs < rhs);
  if (unstable) {
    v.regime = Regime::Unstable;
    v.condition = ak < 1.0 ? ConditionId::AssRy_a : ConditionId::AssRy_b;
    v.critical_t = t_crit(kappa, r);
    v.critical_s = s_crit(kappa, r, ry);
  } else {
    finish_stable(v, quarter_min_full(kappa, r, ry), sigma_abs);
    v.condition = ak < 1.0 ? ConditionId::AssRy_vv_a : ConditionId::AssRy_vv_b;
    const bool semi_unstable = (ak < 1.0 && r * ak > 1.0) || (ak > 1.0 && r * ak < 1.0);
    v.semi_discrete_unstable = semi_unstable;
  }
  return v;
}

StabilityVerdict classify_bounded(double kappa, double r, std::optional<double> ry,
                                  double epsilon, double sigma_abs, double tol) {
  require_classifiable(kappa, r);
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0,1)");
  StabilityVerdict v;
  v.epsilon_slack = epsilon;
  const double ak = std::abs(kappa);

  if (!ry) {
    const bool stable_a = ak * (1.0 + epsilon) < 1.0 && r * ak * (1.0 + epsilon) < 1.0;
    const bool stable_b = ak * (1.0 - epsilon) > 1.0 && r * ak * (1.0 - epsilon) > 1.0;
    if (stable_a || stable_b) {
      double mf = std::min(1.0, ak);
      for (double p : {+1.0, -1.0}) {
        mf = std::min(mf, std::abs(1.0 + (1.0 + p * epsilon) * kappa) / (2.0 + epsilon));
        mf = std::min(mf, std::abs(1.0 + (1.0 + p * epsilon) * kappa * r) /
                              (1.0 + (1.0 + epsilon) * r));
      }
      finish_stable(v, mf, sigma_abs);
      v.condition = stable_a ? ConditionId::AssRL_vv_a : ConditionId::AssRL_vv_b;
      v.small_h_caveat = true;
      return v;
    }
    const bool unstable =
        (ak < 1.0 - tol && r * ak > 1.0 + tol) || (ak > 1.0 + tol && r * ak < 1.0 - tol);
    if (unstable) {
      v.regime = Regime::Unstable;
      v.condition = ak < 1.0 ? ConditionId::AssR_a : ConditionId::AssR_b;
      v.critical_t = t_crit(kappa, r);
      return v;
    }
    return v;  // inconclusive band
  }

  if (!(*ry > 0.0)) throw ConfigError("classification requires r_y > 0");
  const double k2 = kappa * kappa;
  const double ry2 = *ry * *ry;
  auto stable_cond = [&](double slack) {
    const double ks = k2 * slack * slack;
    if (ak * slack < 1.0) return r * r * ks < 1.0 + ry2 * (1.0 - ks);
    if (ak * slack > 1.0) return r * r * ks > 1.0 + ry2 * (1.0 - ks);
    return false;
  };
  const bool stable_a = ak * (1.0 + epsilon) < 1.0 && stable_cond(1.0 + epsilon);
  const bool stable_b = ak * (1.0 - epsilon) > 1.0 && stable_cond(1.0 - epsilon);
  if (stable_a || stable_b) {
    const double sy = std::sqrt(1.0 + ry2);
    const double sxy = std::sqrt(r * r + ry2);
    double mf = std::min(1.0, ak);
    for (double p : {+1.0, -1.0}) {
      mf = std::min(mf, std::abs(1.0 + (1.0 + p * epsilon) * kappa) / (2.0 + epsilon));
      mf = std::min(mf, std::abs(sy + (1.0 + p * epsilon) * kappa * sxy) /
                            (sy + (1.0 + epsilon) * sxy));
    }
    finish_stable(v, mf, sigma_abs);
    v.condition = stable_a ? ConditionId::AssRyL_vv_a : ConditionId::AssRyL_vv_b;
    v.small_h_caveat = true;
    return v;
  }
  const double lhs = r * r * k2;
  const double rhs = 1.0 + ry2 * (1.0 - k2);
  const bool unstable = (ak < 1.0 - tol && lhs > rhs + tol) || (ak > 1.0 + tol && lhs < rhs - tol);
  if (unstable) {
    v.regime = Regime::Unstable;
    v.condition = ak < 1.0 ? ConditionId::AssRy_a : ConditionId::AssRy_b;
    v.critical_t = t_crit(kappa, r);
    v.critical_s = s_crit(kappa, r, *ry);
  }
  return v;
}

std::vector<CriticalMesh> critical_meshes(double kappa, double r, std::optional<double> ry,
                                          int m_max) {
  if (m_max < 1) throw ConfigError("critical_meshes: m_max must be >= 1");
  double h1 = 0.0;
  if (ry) {
    const StabilityVerdict v = classify_full(kappa, r, *ry);
    if (v.regime != Regime::Unstable) {
      std::ostringstream os;
      os << "critical_meshes: regime is " << to_string(v.regime) << " for kappa=" << kappa
         << ", r=" << r << ", r_y=" << *ry << "; no critical mesh sizes exist";
      throw NoCriticalMesh(os.str());
    }
    h1 = *v.critical_s / *ry;
  } else {
    const StabilityVerdict v = classify_semi(kappa, r);
    if (v.regime != Regime::Unstable) {
      std::ostringstream os;
      os << "critical_meshes: regime is " << to_string(v.regime) << " for kappa=" << kappa
         << ", r=" << r << "; no critical mesh sizes exist";
      throw NoCriticalMesh(os.str());
    }
    h1 = *v.critical_t;
  }
  std::vector<CriticalMesh> out;
  out.reserve(static_cast<size_t>(m_max));
  for (int m = 1; m <= m_max; ++m) out.push_back({m, h1 / m});
  return out;
}

double solve_ry_for_rational_s(double kappa, double r, int l, int k) {
  if (l < 1 || k < 2 || l >= k) throw ConfigError("solve_ry_for_rational_s: need 1 <= l < k");
  require_classifiable(kappa, r);
  const double c = std::cos(kPi * l / k) - 1.0;  // in [-2, 0)
  const double k2 = kappa * kappa;
  const double radicand = c * (1.0 - k2 * r * r) / ((1.0 - k2) * (6.0 + 2.0 * c));
  if (!(radicand > 0.0)) {
    std::ostringstream os;
    os << "solve_ry_for_rational_s: no admissible ratio for kappa=" << kappa << ", r=" << r
       << ", l/k=" << l << "/" << k;
    throw NoAdmissibleRatio(os.str());
  }
  const double ry = std::sqrt(radicand);
  const double s = s_crit(kappa, r, ry);
  if (std::abs(s - kPi * l / k) > 1e-12 * kPi) {
    std::ostringstream os;
    os << "solve_ry_for_rational_s: substitution check failed, s_crit=" << s << " vs "
       << kPi * l / k;
    throw ConsistencyError(os.str());
  }
  return ry;
}

namespace {

// |d| of a mode sitting exactly on the critical angle. There 1 + kappa R = 0
// identically, and the whole entry is the bounded-domain gap
// d = sigma_- kappa R (z - 1)/(1 + z R), with z - 1 = 2(x2 - x1)/((1+x1)(1+x2) j2)
// and x_i the geometric tail factors; the plain formula would lose this
// ~x1-sized value to cancellation noise.
double critical_mode_gap(const PhysicalConfig& phys, double r, double lambda_hat) {
  const double kappa = phys.kappa();
  const double t = t_crit(kappa, r);
  const double n = lambda_hat * phys.half_width();
  auto tail = [n](double q) { return q > 0.0 ? std::exp(n * std::log(q)) : 0.0; };
  const double x1 = tail(frak_q(t));
  const double x2 = tail(frak_q(r * t));
  const double j2 = (1.0 - x2) / (1.0 + x2);
  const double zm1 = 2.0 * (x2 - x1) / ((1.0 + x1) * (1.0 + x2) * j2);
  const double ratio = std::sqrt(r * r * t * t + 12.0) / std::sqrt(t * t + 12.0);
  return std::abs(phys.sigma_minus()) * std::abs(kappa * ratio * zm1) /
         (1.0 + ratio * (1.0 + zm1));
}

}  // namespace

MinDiagonal min_abs_diagonal(const PhysicalConfig& phys, const MeshConfig& mesh) {
  // Angle of the critical mode, when the parameter regime has one.
  double s_star = -1.0;
  try {
    s_star = s_crit(phys.kappa(), mesh.ratio_r(), mesh.ratio_ry());
  } catch (const NoRealRoot&) {
  }
  MinDiagonal best{0, 0.0};
  for (int m = 1; m <= mesh.big_m() - 1; ++m) {
    const double s_m = mesh.ratio_ry() * m * mesh.h_minus();
    double d;
    if (s_star > 0.0 && std::abs(s_m - s_star) <= 1e-12)
      d = critical_mode_gap(phys, mesh.ratio_r(), t_crit(phys.kappa(), mesh.ratio_r()) / mesh.h_minus());
    else
      d = std::abs(diagonal_entry(phys, mesh, m, DiagonalVariant::FullBounded).value);
    if (best.m_star == 0 || d < best.value) best = {m, d};
  }
  if (best.m_star == 0) throw ConfigError("min_abs_diagonal: mesh has no interior modes (M < 2)");
  return best;
}

}  // namespace scfem
