#pragma once

#include <cstddef>
#include <functional>

namespace onreg {

struct PotentialBounds {
  double phi_bound = 0.0;
  double donl_bound = 0.0;
};

/// Classes with N(H, eps) <= (A/eps)^p on (0, 1]:
/// Phi <= p (log2 A + 1/ln 2) and D_onl <= 4c times that.
PotentialBounds poly_cover_potential_bound(double A, double p, double c);

/// log2 N(H_L, delta; sup norm) <= (8L/delta)^d log2(C0/delta) for
/// delta in (0, 1]; C0 = 9 comes from 2 ceil(4/delta) + 1 <= 9/delta.
double lipschitz_cover_bound(double L, double delta, std::size_t d, double C0 = 9.0);

/// Covering bound transferred from a p-dimensional parameter box:
/// N(H, eps) <= (4 alpha K / phi_inv(eps))^p. Returns +inf when
/// phi_inv(eps) == 0 and 1 when K == 0.
double transfer_cover_bound(double p, double alpha, double K,
                            const std::function<double(double)>& phi_inverse, double eps);

/// Integrated form for power moduli phi(t) = t^q on a class of diameter <= 1:
/// Phi <= p log2(4 alpha K) + p / (q ln 2).
double transfer_potential_bound(double p, double alpha, double K, double q);

}  // namespace onreg
