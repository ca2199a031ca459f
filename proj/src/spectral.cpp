#include "scfem/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace scfem {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegeneracyBand = 1e-12;  // |b| <= band*a counts as b = 0
constexpr double kClampTol = 1e-12;

// nu^n for nu in [0,1); underflow to 0 is the intended unbounded-domain limit.
double pow01(double nu, double n) {
  if (nu <= 0.0) return 0.0;
  return std::exp(n * std::log(nu));
}

bool is_full(DiagonalVariant v) {
  return v == DiagonalVariant::FullUnbounded || v == DiagonalVariant::FullBounded;
}

bool is_bounded(DiagonalVariant v) {
  return v == DiagonalVariant::SemiBounded || v == DiagonalVariant::FullBounded;
}

}  // namespace

double signed_pow(double mu, long k) {
  if (k == 0) return 1.0;
  if (mu == 0.0) return 0.0;
  const double mag = std::exp(static_cast<double>(k) * std::log(std::abs(mu)));
  return (mu < 0.0 && (k & 1L)) ? -mag : mag;
}

LocalCoeffs local_coeffs(double lambda, double h) {
  if (!(lambda > 0.0)) throw ConfigError("local_coeffs: lambda must be positive");
  if (!(h > 0.0)) throw ConfigError("local_coeffs: h must be positive");
  return {1.0 / h + lambda * lambda * h / 3.0, -1.0 / h + lambda * lambda * h / 6.0};
}

MuRoots mu_roots(double a, double b) {
  if (!(a > 0.0)) throw ConfigError("mu_roots: a must be positive");
  if (!(a * a - b * b > 0.0)) throw ConfigError("mu_roots: requires a^2 - b^2 > 0");
  if (std::abs(b) <= kDegeneracyBand * a) return {0.0, 1.0, true};
  const double s = std::sqrt(a * a - b * b);
  return {(-a + s) / b, (-a - s) / b, false};
}

double f_kr(double kappa, double r, double t) {
  if (!(r > 0.0)) throw ConfigError("f_kr: r must be positive");
  if (!(t >= 0.0)) throw ConfigError("f_kr: t must be nonnegative");
  const double ratio = std::sqrt(r * r * t * t + 12.0) / std::sqrt(t * t + 12.0);
  return (1.0 + kappa * ratio) / (1.0 + ratio);
}

double t_crit(double kappa, double r) {
  if (!(r > 0.0)) throw ConfigError("t_crit: r must be positive");
  const double ak = std::abs(kappa);
  const bool cond_a = ak < 1.0 && r * ak > 1.0;
  const bool cond_b = ak > 1.0 && r * ak < 1.0;
  if (!cond_a && !cond_b) {
    std::ostringstream os;
    os << "t_crit: no real root for kappa=" << kappa << ", r=" << r;
    throw NoRealRoot(os.str());
  }
  return std::sqrt(12.0 * (1.0 - kappa * kappa) / (kappa * kappa * r * r - 1.0));
}

// (1-cos s)/(2+cos s) through the half-angle sine, accurate for small s.
static double versine_quotient(double s) {
  const double sh = std::sin(0.5 * s);
  return 2.0 * sh * sh / (3.0 - 2.0 * sh * sh);
}

double frak_h(double ry, double s) {
  if (!(ry > 0.0)) throw ConfigError("frak_h: r_y must be positive");
  if (!(s >= 0.0 && s <= kPi)) throw ConfigError("frak_h: s must lie in [0, pi]");
  return std::sqrt(6.0 / (ry * ry) * versine_quotient(s));
}

double s_crit(double kappa, double r, double ry) {
  if (!(ry > 0.0)) throw ConfigError("s_crit: r_y must be positive");
  const double ak = std::abs(kappa);
  const double k2 = kappa * kappa;
  const double rhs = 1.0 + ry * ry * (1.0 - k2);
  const bool cond_a = ak < 1.0 && r * r * k2 > rhs;
  const bool cond_b = ak > 1.0 && r * r * k2 < rhs;
  if (!cond_a && !cond_b) {
    std::ostringstream os;
    os << "s_crit: no solution in (0, pi] for kappa=" << kappa << ", r=" << r << ", r_y=" << ry;
    throw NoRealRoot(os.str());
  }
  double arg = 1.0 + 6.0 * ry * ry * (1.0 - k2) / ((1.0 - k2 * r * r) - 2.0 * ry * ry * (1.0 - k2));
  if (std::abs(arg) > 1.0) {
    if (std::abs(arg) > 1.0 + kClampTol) {
      std::ostringstream os;
      os << "s_crit: arccos argument " << arg << " out of range";
      throw ConsistencyError(os.str());
    }
    arg = std::clamp(arg, -1.0, 1.0);
  }
  return std::acos(arg);
}

double discrete_lambda_hat(int m, double hy) {
  if (!(hy > 0.0)) throw ConfigError("discrete_lambda_hat: h_y must be positive");
  const double m_count = kPi / hy;
  const int big_m = static_cast<int>(std::round(m_count));
  if (big_m < 2 || std::abs(m_count - big_m) > 1e-9 * m_count)
    throw ConfigError("discrete_lambda_hat: pi/h_y is not an integer >= 2");
  if (m < 1 || m > big_m - 1)
    throw ConfigError("discrete_lambda_hat: mode index out of range 1..M-1");
  return std::sqrt(6.0 / (hy * hy) * versine_quotient(hy * m));
}

double frak_q(double t) {
  if (!(t >= 0.0)) throw ConfigError("frak_q: t must be nonnegative");
  if (t == 0.0) return std::exp(-2.0);
  const double s = std::sqrt(1.0 + t * t / 12.0);
  // ((1+t^2/3 - t*s)/(1+t^2/3 + t*s))^(1/t), written through log1p so the
  // cancellation at small t stays benign. The numerator equals
  // (1 - t^2/6)^2 / (1 + t^2/3 + t*s) >= 0 and vanishes exactly at t^2 = 6,
  // where q = 0; rounding may push the log1p argument a hair below -1.
  const double denom = 1.0 + t * t / 3.0 + t * s;
  const double arg = std::max(-1.0, -2.0 * t * s / denom);
  return std::exp(std::log1p(arg) / t);
}

double frak_j(double n, double q) {
  if (!(n > 0.0)) throw ConfigError("frak_j: n must be positive");
  // q = 0 is the image of the degeneracy t^2 = 6 under frak_q; j_n(0) = 1 is
  // its continuous extension.
  if (!(q >= 0.0 && q < 1.0)) throw ConfigError("frak_j: q must lie in [0,1)");
  const double qn = pow01(q, n);
  return (1.0 - qn) / (1.0 + qn);
}

double frak_z(double r, double lambda, double L, double t) {
  if (!(r > 0.0)) throw ConfigError("frak_z: r must be positive");
  if (!(lambda >= 1.0)) throw ConfigError("frak_z: lambda must be >= 1");
  if (!(L > 0.0)) throw ConfigError("frak_z: L must be positive");
  if (!(t >= 0.0)) throw ConfigError("frak_z: t must be nonnegative");
  const double n = lambda * L;
  return frak_j(n, frak_q(t)) / frak_j(n, frak_q(r * t));
}

double f_tilde(double kappa, double r, double lambda, double L, double t) {
  const double z = frak_z(r, lambda, L, t);
  const double ratio = std::sqrt(r * r * t * t + 12.0) / std::sqrt(t * t + 12.0);
  return (1.0 + kappa * z * ratio) / (1.0 + z * ratio);
}

ModeCoefficients mode_coefficients(const PhysicalConfig& phys, const MeshConfig& mesh, int m,
                                   DiagonalVariant variant) {
  (void)phys;
  if (m < 1) throw ConfigError("mode index must be >= 1");
  if (is_full(variant) && m > mesh.big_m() - 1)
    throw ConfigError("full-discretization mode index must be <= M-1");
  ModeCoefficients c;
  c.mode_m = m;
  c.lambda = is_full(variant) ? discrete_lambda_hat(m, mesh.h_y()) : static_cast<double>(m);
  const LocalCoeffs lm = local_coeffs(c.lambda, mesh.h_minus());
  const LocalCoeffs lp = local_coeffs(c.lambda, mesh.h_plus());
  c.a_minus = lm.a;
  c.b_minus = lm.b;
  c.a_plus = lp.a;
  c.b_plus = lp.b;
  const MuRoots rm = mu_roots(lm.a, lm.b);
  const MuRoots rp = mu_roots(lp.a, lp.b);
  c.mu1_minus = rm.mu1;
  c.mu2_minus = rm.mu2;
  c.mu1_plus = rp.mu1;
  c.mu2_plus = rp.mu2;
  c.mu_minus = rm.mu1;
  c.mu_plus = rp.mu1;
  c.degenerate_minus = rm.degenerate;
  c.degenerate_plus = rp.degenerate;
  c.nu_minus = rm.degenerate ? 0.0 : rm.mu1 / rm.mu2;
  c.nu_plus = rp.degenerate ? 0.0 : rp.mu1 / rp.mu2;
  return c;
}

namespace {

struct SideWeights {
  double minus;  // J_- * sqrt(a_-^2 - b_-^2)   (bounded)  or  b_- mu_- + a_-  (unbounded)
  double plus;
};

SideWeights quotient_weights(const ModeCoefficients& c, const MeshConfig& mesh, bool bounded) {
  if (!bounded) return {c.b_minus * c.mu_minus + c.a_minus, c.b_plus * c.mu_plus + c.a_plus};
  const double sm = std::sqrt(c.a_minus * c.a_minus - c.b_minus * c.b_minus);
  const double sp = std::sqrt(c.a_plus * c.a_plus - c.b_plus * c.b_plus);
  const double num = pow01(c.nu_minus, mesh.n_minus());
  const double nup = pow01(c.nu_plus, mesh.n_plus());
  return {(1.0 + num) / (1.0 - num) * sm, (1.0 + nup) / (1.0 - nup) * sp};
}

}  // namespace

DiagonalEntry diagonal_entry(const PhysicalConfig& phys, const MeshConfig& mesh, int m,
                             DiagonalVariant variant) {
  const ModeCoefficients c = mode_coefficients(phys, mesh, m, variant);
  const double sm = phys.sigma_minus();
  const double sp = phys.sigma_plus();
  const double kappa = phys.kappa();

  const SideWeights w = quotient_weights(c, mesh, is_bounded(variant));
  const double quotient = (sm * w.minus + sp * w.plus) / (w.minus + w.plus);

  const double t =
      is_full(variant) ? frak_h(mesh.ratio_ry(), mesh.ratio_ry() * m * mesh.h_minus())
                       : c.lambda * mesh.h_minus();
  double func = 0.0;
  switch (variant) {
    case DiagonalVariant::SemiUnbounded:
    case DiagonalVariant::FullUnbounded:
      func = sm * f_kr(kappa, mesh.ratio_r(), t);
      break;
    case DiagonalVariant::SemiBounded:
    case DiagonalVariant::FullBounded:
      func = sm * f_tilde(kappa, mesh.ratio_r(), c.lambda, phys.half_width(), t);
      break;
  }

  const double tol =
      std::max(1e-10 * std::max(std::abs(quotient), std::abs(func)),
               1e-10 * std::abs(sm) * (1.0 + std::abs(kappa)));
  if (std::abs(quotient - func) > tol) {
    std::ostringstream os;
    os << "diagonal_entry: route disagreement at m=" << m << " variant="
       << static_cast<int>(variant) << ": quotient=" << quotient << " function=" << func;
    throw ConsistencyError(os.str());
  }
  return {m, variant, func};
}

ModeProfile mode_profile(const PhysicalConfig& phys, const MeshConfig& mesh, int m,
                         DiagonalVariant variant) {
  if (!is_bounded(variant))
    throw ConfigError("mode_profile: only the bounded-domain variants have finite profiles");
  const ModeCoefficients c = mode_coefficients(phys, mesh, m, variant);

  const SideWeights w = quotient_weights(c, mesh, true);
  const double radicand = w.minus + w.plus;
  if (!(radicand > 0.0)) {
    std::ostringstream os;
    os << "mode_profile: non-positive normalization radicand " << radicand << " at m=" << m
       << " (lambda=" << c.lambda << ", h_minus=" << mesh.h_minus() << ", r=" << mesh.ratio_r()
       << ")";
    throw DegenerateNormalization(os.str());
  }
  ModeProfile p;
  p.mode_m = m;
  p.variant = variant;
  p.lambda = c.lambda;
  p.n_minus = mesh.n_minus();
  p.beta0 = 1.0 / std::sqrt(radicand);
  p.beta.assign(static_cast<size_t>(mesh.n_minus() + mesh.n_plus() + 1), 0.0);

  // beta_n = beta0 (mu1^|n| - nu^N mu2^|n|)/(1 - nu^N). The second term is
  // evaluated in log space: nu^N |mu2|^n = exp(N log nu + n log|mu2|), whose
  // exponent stays <= N log|mu1| < 0 for |n| <= N.
  auto fill_side = [&](int count, double mu1, double mu2, double nu, int dir) {
    const double nu_n = pow01(nu, count);
    const double denom = 1.0 - nu_n;
    const double log_nu_n = nu > 0.0 ? count * std::log(nu) : 0.0;
    for (int n = 1; n < count; ++n) {
      const double term1 = signed_pow(mu1, n);
      double term2 = 0.0;
      if (nu > 0.0) {
        const double mag = std::exp(log_nu_n + n * std::log(std::abs(mu2)));
        term2 = (mu2 < 0.0 && (n & 1)) ? -mag : mag;
      }
      p.beta[static_cast<size_t>(mesh.n_minus() + dir * n)] = p.beta0 * (term1 - term2) / denom;
    }
  };
  p.beta[static_cast<size_t>(mesh.n_minus())] = p.beta0;
  fill_side(mesh.n_minus(), c.mu1_minus, c.mu2_minus, c.nu_minus, -1);
  fill_side(mesh.n_plus(), c.mu1_plus, c.mu2_plus, c.nu_plus, +1);
  return p;
}

TruncatedProfile truncated_unbounded_profile(const ModeCoefficients& c, double tail_cutoff) {
  if (!(tail_cutoff > 0.0 && tail_cutoff < 1.0))
    throw ConfigError("truncated_unbounded_profile: cutoff must lie in (0,1)");
  TruncatedProfile p;
  const double radicand =
      c.b_minus * c.mu_minus + c.a_minus + c.a_plus + c.b_plus * c.mu_plus;
  if (!(radicand > 0.0))
    throw DegenerateNormalization("truncated_unbounded_profile: non-positive radicand");
  p.beta0 = 1.0 / std::sqrt(radicand);
  auto tail = [&](double mu) {
    std::vector<double> out;
    if (mu == 0.0) return out;
    const int n_max = static_cast<int>(std::ceil(std::log(tail_cutoff) / std::log(std::abs(mu))));
    out.reserve(static_cast<size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) out.push_back(p.beta0 * signed_pow(mu, n));
    return out;
  };
  p.minus_tail = tail(c.mu_minus);
  p.plus_tail = tail(c.mu_plus);
  return p;
}

}  // namespace scfem
