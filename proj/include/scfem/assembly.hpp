#ifndef SCFEM_ASSEMBLY_HPP
#define SCFEM_ASSEMBLY_HPP

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <vector>

#include "scfem/config.hpp"

namespace scfem {

// 1D node set. The x-grid runs x_n = h_minus*n for n<0 and h_plus*n for n>=0;
// the y-grid is uniform on (0, pi).
struct Grid1D {
  std::vector<double> nodes;  // strictly increasing, boundary included
  int interface_index;        // position of x = 0 (0 for grids without one)

  int cells() const { return static_cast<int>(nodes.size()) - 1; }
  int interior() const { return static_cast<int>(nodes.size()) - 2; }
};

Grid1D make_x_grid(const MeshConfig& mesh, double half_width_L);
Grid1D make_y_grid(const MeshConfig& mesh);

// Symmetric tridiagonal operator on interior nodes (bandwidth 1).
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // size diag.size()-1

  static constexpr int bandwidth = 1;
  int dim() const { return static_cast<int>(diag.size()); }
  void apply(const double* x, double* y) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  double quadratic_form(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd dense() const;
};

SymTridiagonal add_scaled(const SymTridiagonal& a, double factor, const SymTridiagonal& b);

// P1 stiffness/mass matrices with a cell-wise constant weight, Dirichlet rows
// and columns eliminated.
SymTridiagonal stiffness_1d(const Grid1D& grid, const std::function<double(double)>& weight);
SymTridiagonal mass_1d(const Grid1D& grid, const std::function<double(double)>& weight);

// K_x^sigma + lambda^2 M_x^sigma with lambda = m (use_hat=false) or tau_m.
SymTridiagonal mode_matrix(const PhysicalConfig& phys, const MeshConfig& mesh, int m,
                           bool use_hat);

// Sum-of-Kronecker operator K_x (x) M_y + M_x (x) K_y acting on interior
// coefficient matrices U (rows = x index, columns = y index).
struct TensorOperator {
  SymTridiagonal kx, mx, ky, my;

  Eigen::MatrixXd apply(const Eigen::MatrixXd& u) const;
  Eigen::MatrixXd dense() const;  // lexicographic, x fastest
  long dim() const { return static_cast<long>(kx.dim()) * ky.dim(); }
};

struct System2D {
  TensorOperator op;    // sigma-weighted x factors
  TensorOperator gram;  // H^1_0 metric (unit weight)
};

System2D assemble_2d(const PhysicalConfig& phys, const MeshConfig& mesh);

// <f, phi_n (x) psi_m> over interior nodes by 5-point Gauss per cell and
// direction (exact through polynomial degree 9 per direction).
Eigen::MatrixXd load_vector(const PhysicalConfig& phys, const MeshConfig& mesh,
                            const std::function<double(double, double)>& f);

// Discrete sine eigenbasis of the y-direction pencil (K_y, M_y). Columns of
// the basis matrix are M_y-orthonormal and diagonalize K_y with values tau^2.
class SineBasis {
public:
  SineBasis(const MeshConfig& mesh, const SymTridiagonal& mass_y);

  int modes() const { return static_cast<int>(tau_.size()); }
  double tau(int m) const { return tau_[static_cast<size_t>(m - 1)]; }
  const Eigen::MatrixXd& matrix() const { return basis_; }

  // Expansion coefficients of nodal data in the sine basis (rows = x).
  Eigen::MatrixXd to_modal(const Eigen::MatrixXd& nodal) const;
  Eigen::MatrixXd to_nodal(const Eigen::MatrixXd& modal) const;
  // Load functionals transform with the plain transpose.
  Eigen::MatrixXd transform_load(const Eigen::MatrixXd& load) const;

private:
  Eigen::MatrixXd basis_;    // interior_y x interior_y
  Eigen::MatrixXd mass_basis_;  // M_y * basis, cached for to_modal
  std::vector<double> tau_;
};

// Coordinate text export, one "row col value" triple per line.
void write_coo(std::ostream& os, const SymTridiagonal& m);
void write_coo(std::ostream& os, const Eigen::MatrixXd& m);

// Tridiagonal LU with partial pivoting (one fill-in superdiagonal).
class TridiagonalLU {
public:
  explicit TridiagonalLU(const SymTridiagonal& t);

  bool singular() const { return singular_row_ >= 0; }
  int singular_row() const { return singular_row_; }
  void solve_in_place(Eigen::VectorXd& b) const;

private:
  int n_;
  std::vector<double> dl_, d_, du_, du2_;
  std::vector<int> pivot_;
  int singular_row_ = -1;
};

}  // namespace scfem

#endif
