#ifndef SCFEM_MANUFACTURED_HPP
#define SCFEM_MANUFACTURED_HPP

#include <array>
#include <functional>

#include "scfem/config.hpp"

namespace scfem {

// Exact solution, its gradient, and the matching right-hand side of
// -div(sigma grad u) = f. The source jumps across x = 0 with sigma; the flux
// sigma du/dx is continuous there (both one-sided values vanish).
struct ManufacturedCase {
  std::function<double(double, double)> u;
  std::function<std::array<double, 2>(double, double)> grad;
  std::function<double(double, double)> f;
};

// u(x,y) = (1 - x^2/L^2) * y (y - pi) (y - 2 pi).
ManufacturedCase make_reference_case(const PhysicalConfig& phys);

}  // namespace scfem

#endif
