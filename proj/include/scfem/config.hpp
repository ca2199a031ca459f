#ifndef SCFEM_CONFIG_HPP
#define SCFEM_CONFIG_HPP

#include "scfem/errors.hpp"

namespace scfem {

// Piecewise-constant diffusion coefficient on (-L,L)x(0,pi): sigma_minus on
// x<0, sigma_plus on x>0. kappa = sigma_plus/sigma_minus < 0 is the contrast;
// kappa = -1 is excluded (ill-posed).
class PhysicalConfig {
public:
  PhysicalConfig(double sigma_minus, double sigma_plus, double half_width_L);

  double sigma_minus() const { return sigma_minus_; }
  double sigma_plus() const { return sigma_plus_; }
  double half_width() const { return half_width_; }
  double kappa() const { return sigma_plus_ / sigma_minus_; }
  double sigma(double x) const { return x < 0.0 ? sigma_minus_ : sigma_plus_; }

private:
  double sigma_minus_;
  double sigma_plus_;
  double half_width_;
};

// Tensor-product mesh described by h_minus and the ratios r = h_plus/h_minus,
// r_y = h_y/h_minus. The cell counts N_minus = L/h_minus, N_plus = L/h_plus
// and M = pi/h_y must be integers (relative tolerance 1e-12).
class MeshConfig {
public:
  MeshConfig(double h_minus, double ratio_r, double ratio_ry, double half_width_L);

  // Exact construction from integer cell counts; h's and ratios are derived.
  static MeshConfig from_counts(double half_width_L, int n_minus, int n_plus, int big_m);

  double h_minus() const { return h_minus_; }
  double h_plus() const { return h_minus_ * ratio_r_; }
  double h_y() const { return h_minus_ * ratio_ry_; }
  double ratio_r() const { return ratio_r_; }
  double ratio_ry() const { return ratio_ry_; }
  int n_minus() const { return n_minus_; }
  int n_plus() const { return n_plus_; }
  int big_m() const { return big_m_; }

  // Interior unknown counts of the Dirichlet problem.
  int interior_x() const { return n_minus_ + n_plus_ - 1; }
  int interior_y() const { return big_m_ - 1; }
  long total_unknowns() const { return static_cast<long>(interior_x()) * interior_y(); }

private:
  MeshConfig() = default;
  double h_minus_ = 0.0;
  double ratio_r_ = 0.0;
  double ratio_ry_ = 0.0;
  int n_minus_ = 0;
  int n_plus_ = 0;
  int big_m_ = 0;
};

}  // namespace scfem

#endif
