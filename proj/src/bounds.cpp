#include "onreg/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "onreg/errors.hpp"

namespace onreg {

PotentialBounds poly_cover_potential_bound(double A, double p, double c) {
  if (!(A >= 1.0 && p >= 1.0 && c >= 1.0)) throw DomainError("need A, p, c >= 1");
  const double phi = p * (std::log2(A) + 1.0 / std::numbers::ln2);
  return {phi, 4.0 * c * phi};
}

double lipschitz_cover_bound(double L, double delta, std::size_t d, double C0) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("delta must lie in (0,1]");
  if (!(L >= 1.0)) throw DomainError("Lipschitz constant must be >= 1");
  return std::pow(8.0 * L / delta, static_cast<double>(d)) * std::log2(C0 / delta);
}

double transfer_cover_bound(double p, double alpha, double K,
                            const std::function<double(double)>& phi_inverse, double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (K == 0.0) return 1.0;
  const double t = phi_inverse(eps);
  if (t <= 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(4.0 * alpha * K / t, p);
}

double transfer_potential_bound(double p, double alpha, double K, double q) {
  if (!(q > 0.0)) throw DomainError("modulus exponent must be positive");
  return p * std::log2(4.0 * alpha * K) + p / (q * std::numbers::ln2);
}

}  // namespace onreg
