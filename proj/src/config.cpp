#include "scfem/config.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace scfem {

namespace {

constexpr double kIntegralityTol = 1e-12;

// Nearest integer of a positive ratio, or -1 if outside tolerance.
int integer_count(double ratio) {
  const double rounded = std::round(ratio);
  if (rounded < 1.0) return -1;
  if (std::abs(ratio - rounded) > kIntegralityTol * ratio) return -1;
  return static_cast<int>(rounded);
}

}  // namespace

PhysicalConfig::PhysicalConfig(double sigma_minus, double sigma_plus, double half_width_L)
    : sigma_minus_(sigma_minus), sigma_plus_(sigma_plus), half_width_(half_width_L) {
  if (!(sigma_minus < 0.0))
    throw ConfigError("sigma_minus must be strictly negative, got " + std::to_string(sigma_minus));
  if (!(sigma_plus > 0.0))
    throw ConfigError("sigma_plus must be strictly positive, got " + std::to_string(sigma_plus));
  if (!(half_width_L > 0.0))
    throw ConfigError("half-width L must be positive, got " + std::to_string(half_width_L));
  if (std::abs(kappa() + 1.0) < 1e-14)
    throw ConfigError("contrast kappa = -1 is excluded (ill-posed problem)");
}

MeshConfig::MeshConfig(double h_minus, double ratio_r, double ratio_ry, double half_width_L) {
  if (!(h_minus > 0.0) || !(ratio_r > 0.0) || !(ratio_ry > 0.0))
    throw ConfigError("h_minus, r and r_y must be positive");
  if (!(half_width_L > 0.0)) throw ConfigError("half-width L must be positive");
  h_minus_ = h_minus;
  ratio_r_ = ratio_r;
  ratio_ry_ = ratio_ry;
  n_minus_ = integer_count(half_width_L / h_minus);
  n_plus_ = integer_count(half_width_L / (h_minus * ratio_r));
  big_m_ = integer_count(std::numbers::pi / (h_minus * ratio_ry));
  if (n_minus_ < 0) throw ConfigError("L/h_minus is not an integer within 1e-12");
  if (n_plus_ < 0) throw ConfigError("L/h_plus is not an integer within 1e-12");
  if (big_m_ < 0) throw ConfigError("pi/h_y is not an integer within 1e-12");
}

MeshConfig MeshConfig::from_counts(double half_width_L, int n_minus, int n_plus, int big_m) {
  if (n_minus < 1 || n_plus < 1 || big_m < 1)
    throw ConfigError("cell counts must be positive integers");
  if (!(half_width_L > 0.0)) throw ConfigError("half-width L must be positive");
  MeshConfig cfg;
  cfg.h_minus_ = half_width_L / n_minus;
  cfg.ratio_r_ = static_cast<double>(n_minus) / n_plus;
  cfg.ratio_ry_ = (std::numbers::pi / big_m) / cfg.h_minus_;
  cfg.n_minus_ = n_minus;
  cfg.n_plus_ = n_plus;
  cfg.big_m_ = big_m;
  return cfg;
}

}  // namespace scfem
