#pragma once

// The two-dimensional real space of degree-(g+1) star-symmetric polynomials
// whose differentials have vanishing A-periods.

#include "sgspec/periods.hpp"

#include <array>
#include <vector>

namespace sgspec {

struct BBasis {
  CPoly b1, b2;
  // gram[i][j] = Re sum_k conj(bi_k) bj_k
  std::array<std::array<double, 2>, 2> gram{};
  double a_period_residual = 0.0;  // max |A_j-period| over both members
};

std::array<std::array<double, 2>, 2> coefficient_gram(const CPoly& b1, const CPoly& b2);

/// Real basis of the star-symmetric polynomials of degree <= g+1:
/// (lambda^k + lambda^(g+1-k), i lambda^k - i lambda^(g+1-k)) for
/// 2k < g+1, then lambda^((g+1)/2) when g+1 is even. g+2 elements.
std::vector<CPoly> real_parametrization(int g);

/// Real coordinates of a star-symmetric polynomial in real_parametrization(g).
std::vector<double> real_coordinates(const CPoly& b, int g);

struct BSpaceReport {
  std::vector<double> singular_values;   // of the constraint matrix, descending
  double a_period_imag = 0.0;            // max |Im A-period| over the parametrization
};

/// Basis of the null space of the real A-period constraints. The null
/// space is spanned by the right singular vectors of the two smallest
/// singular values; within it, b1 is the normalized projection of the first
/// coordinate axis with a significant component and b2 its unit complement,
/// signed so its first significant coordinate is positive.
/// Throws Rank when the constraint map has numerical rank below g.
BBasis compute_b_basis(const SpectralCurve& c, const HomologyAtlas& atlas, const QuadratureConfig& cfg,
                       BSpaceReport* report = nullptr);
BBasis compute_b_basis(const SpectralCurve& c, const AtlasMoments& moments, BSpaceReport* report = nullptr);

/// Sine of the largest principal angle between the real spans of two pairs
/// of polynomials, in the real coefficient space.
double span_distance(const CPoly& p1, const CPoly& p2, const CPoly& q1, const CPoly& q2);

}  // namespace sgspec
