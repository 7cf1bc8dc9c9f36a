#pragma once

// Algebraic invariants of a pair (b1, b2): the rational map f = b1 / b2, the
// discriminant, residue and level sums of a / (b1 b2), the Bezout
// polynomials c1, c2 and the resulting classification of the curve.

#include "sgspec/bspace.hpp"

#include <array>
#include <utility>

namespace sgspec {

struct ClassifyOptions {
  double tol_S = 1e-8;  // on span_resultant(b1, b2)
  double tol_R = 1e-8;  // absolute, on |residue_sum|
};

struct ClassLabel {
  bool in_S = false;
  bool in_R = false;
  cplx residue_sum{};
  cplx discriminant{};
  double discriminant_scaled = 0.0;
  int degree_f = 0;
  // Bezout data; empty when in_S.
  int degree_c1 = -1, degree_c2 = -1;
  double bezout_residual = 0.0;
  // Residual of lambda^(g-1) conj(c(1/conj lambda)) = c(lambda) over c1, c2.
  // Recorded only; membership does not depend on it.
  double c_reality_residual = 0.0;
  ClassifyOptions options;
};

/// Degree of the rational map b1/b2 after cancelling common roots.
/// Throws Degeneracy for proportional inputs, Domain when both are zero.
int f_degree(const CPoly& b1, const CPoly& b2);

/// prod over roots (with multiplicity) of (beta1_i - beta2_j).
/// Throws Domain unless deg b1 == deg b2.
cplx discriminant_delta(const CPoly& b1, const CPoly& b2);

/// |Res(b1, b2)| / (|b1|_2^n |b2|_2^n) with n = deg; lies in [0, 1].
double normalized_resultant(const CPoly& b1, const CPoly& b2);

/// normalized_resultant of the pair after orthonormalizing it in the real
/// coefficient inner product; depends only on span(b1, b2) and is the
/// largest value normalized_resultant takes over bases of that span.
double span_resultant(const CPoly& b1, const CPoly& b2);

/// Sum of residues of a / (b1 b2) d lambda over f^-1(0), i.e. over the
/// roots of b1 (plus the point at infinity when deg b1 < deg b2). Simple
/// roots use a(beta) / (b1'(beta) b2(beta)); clusters use a small circle.
/// Throws Degeneracy when b1 and b2 share a root.
cplx residue_sum(const CPoly& a, const CPoly& b1, const CPoly& b2);

/// sum over f^-1(p) of a / (b1' b2 - b2' b1); p may be complex or infinite.
cplx level_sum(const CPoly& a, const CPoly& b1, const CPoly& b2, const SpherePoint& p);

/// Unique (c1, c2) of degree <= g with c1 b2 - c2 b1 = a, where
/// g = max(deg b1, deg b2) - 1. Throws Degeneracy when the system is
/// singular (b1, b2 with a common root).
std::pair<CPoly, CPoly> c_polynomials(const CPoly& a, const CPoly& b1, const CPoly& b2);

ClassLabel classify(const SpectralCurve& c, const BBasis& basis, const ClassifyOptions& opts = {});
ClassLabel classify(const CPoly& a, const CPoly& b1, const CPoly& b2, const ClassifyOptions& opts = {});

/// Real 2x2 matrix (A, B; C, D) acting as (A b1 + B b2, C b1 + D b2).
using Mat2 = std::array<double, 4>;

BBasis mobius_act(const BBasis& basis, const Mat2& m);

/// Rotate the basis by SO(2) so that b1(alpha) = 0 for alpha on the unit
/// circle (where b1/b2 is real).
BBasis so2_align(const BBasis& basis, cplx alpha);

}  // namespace sgspec
