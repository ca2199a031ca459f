#include "scfem/manufactured.hpp"

#include <numbers>

namespace scfem {

ManufacturedCase make_reference_case(const PhysicalConfig& phys) {
  const double L = phys.half_width();
  const double sm = phys.sigma_minus();
  const double sp = phys.sigma_plus();
  constexpr double pi = std::numbers::pi;

  ManufacturedCase c;
  c.u = [L](double x, double y) {
    return (1.0 - x * x / (L * L)) * y * (y - pi) * (y - 2.0 * pi);
  };
  c.grad = [L](double x, double y) {
    const double p = y * (y - pi) * (y - 2.0 * pi);
    const double dp = 3.0 * y * y - 6.0 * pi * y + 2.0 * pi * pi;
    return std::array<double, 2>{-2.0 * x / (L * L) * p, (1.0 - x * x / (L * L)) * dp};
  };
  c.f = [L, sm, sp](double x, double y) {
    const double sigma = x < 0.0 ? sm : sp;
    const double p = y * (y - pi) * (y - 2.0 * pi);
    return -sigma * (-2.0 * p / (L * L) + 6.0 * (1.0 - x * x / (L * L)) * (y - pi));
  };
  return c;
}

}  // namespace scfem
