#pragma once

// Contour quadrature of Theta_b = b(lambda) / (y lambda) d lambda over atlas
// cycles and gamma paths, and the period vector phi(b).
//
// Every contour is reduced once to its moments M_m = int lambda^m / (y lambda)
// d lambda, so the period of any b is sum_m b_m M_m.

#include "sgspec/curve.hpp"

#include <vector>

namespace sgspec {

struct QuadratureConfig {
  int base_nodes = 256;
  int max_refinements = 6;
  double rel_tol = 1e-10;

  void validate() const;  // throws Domain
};

struct ContourMoments {
  std::vector<cplx> moments;   // M_0 .. M_{n-1}
  std::vector<double> scale;   // sum |h_k| |lambda_k|^m, the L1 size of each moment integrand
  int level = 0;               // refinement level that met the tolerance
  int nodes = 0;               // node count at that level
  double change = 0.0;         // max_m |M_m(level) - M_m(level-1)| / scale_m
  int end_sheet = 1;           // +1 if y returns to y_start at the end point, -1 if it flips

  /// sum_m b_m M_m; throws DegreeOverflow if deg b exceeds the moment count.
  cplx apply(const CPoly& b) const;
};

/// Moments 0 .. n_moments-1 of one contour, refined until two successive
/// levels agree to cfg.rel_tol. Throws AccuracyError (carrying the finest
/// moments) when max_refinements is exhausted and Proximity when a node
/// comes within the curve margin of a branch point.
ContourMoments contour_moments(const SpectralCurve& c, const Contour& contour, int n_moments,
                               const QuadratureConfig& cfg);

cplx integrate_theta(const SpectralCurve& c, const CPoly& b, const Contour& contour,
                     const QuadratureConfig& cfg);

struct AtlasMoments {
  std::vector<ContourMoments> a, b, gamma;
};

/// Moments of every contour in the atlas (gammas only if attached). The
/// default count covers polynomials of degree g+1.
AtlasMoments atlas_moments(const SpectralCurve& c, const HomologyAtlas& atlas, const QuadratureConfig& cfg,
                           int n_moments = -1);

std::vector<cplx> a_periods(const SpectralCurve& c, const CPoly& b, const HomologyAtlas& atlas,
                            const QuadratureConfig& cfg);
std::vector<cplx> a_periods(const AtlasMoments& m, const CPoly& b);

struct PeriodVector {
  std::vector<double> entries;  // Im-free part of raw / (2 pi i)
  std::vector<cplx> raw;        // B_1..B_g, gamma_1, gamma_2 integrals
  double residual_imag = 0.0;   // max |Im(raw / (2 pi i))|
};

/// Tolerance on A-periods for the phi precondition, relative to max(1, |b|).
inline constexpr double kAPeriodTol = 1e-8;

/// phi(b) = (1 / 2 pi i) (int_B1, ..., int_Bg, int_gamma1, int_gamma2) of
/// Theta_b. Gamma paths are built for (lambda1, lambda2) when the atlas has
/// none. Throws Precondition when an A-period of b does not vanish.
PeriodVector phi_vector(const SpectralCurve& c, const CPoly& b, cplx lambda1, cplx lambda2,
                        const HomologyAtlas& atlas, const QuadratureConfig& cfg);
PeriodVector phi_vector(const AtlasMoments& m, const CPoly& b, bool check_a_periods = true);

}  // namespace sgspec
