#pragma once

// Handle attachment at a unit-circle point alpha, the induced families of
// B-space bases, and the degree and residue-limit laws along t -> 0.
//
// Sign convention. The literal product (lambda - alpha e^t)(conj(alpha)
// lambda - e^-t) a(lambda) is the negative of the positively normalized
// polynomial of the enlarged root set. Members carry the positive one, so
// y is multiplied by -i relative to the literal product, and the member
// bases are i times the literal family: b_t(0) = -i alpha sqrt(conj alpha)
// b(0) and b_t -> i sqrt(conj alpha) (lambda - alpha) b. Residue sums are
// unchanged by this rescaling.

#include "sgspec/invariants.hpp"

#include <optional>
#include <vector>

namespace sgspec {

/// New root alpha e^-|t| added to the roots of c. Throws Domain when
/// |alpha| != 1, DoublePoint for t = 0 and Degeneracy on a root collision.
SpectralCurve attach_handle(const SpectralCurve& c, cplx alpha, double t);

struct HandleFamily {
  SpectralCurve base;
  BBasis base_basis;
  cplx alpha;
  cplx sqrt_alpha_bar;
  bool principal_sqrt = true;  // false selects -sqrt(conj alpha)
  std::vector<double> t_values;
  std::vector<SpectralCurve> curves;
  std::vector<BBasis> bases;  // filled by deform_b_family
};

HandleFamily make_handle_family(const SpectralCurve& base, const BBasis& base_basis, cplx alpha,
                                std::vector<double> t_values, bool principal_sqrt = true);

/// i sqrt(conj alpha) (lambda - alpha) b: the t -> 0 limit of the member
/// polynomial that starts from b.
CPoly handle_limit_polynomial(const HandleFamily& fam, const CPoly& b);

/// The literal-convention polynomial, -i times a member polynomial.
CPoly literal_frame(const CPoly& b);

/// For each t, the unique pair in the B-space of the member curve with
/// b_it(0) = -i alpha sqrt(conj alpha) b_i(0). Fills fam.bases.
/// Throws Rank (reporting the smallest t that worked) when the evaluation
/// at 0 is singular on the B-space.
std::vector<BBasis> deform_b_family(HandleFamily& fam, const QuadratureConfig& cfg, unsigned threads = 1);

struct FDegreeRow {
  double t = 0.0;
  int degree_f = 0;
  std::vector<cplx> df_roots;
  std::vector<cplx> new_roots;      // the two roots not matched to base critical points
  double max_circle_deviation = 0;  // max ||r| - 1| over new_roots
};

struct FDegreeReport {
  int base_degree = 0;
  std::vector<cplx> base_df_roots;
  std::vector<FDegreeRow> rows;
};

/// Throws Precondition when the base is in S or df is singular at alpha.
FDegreeReport track_f_degree(const HandleFamily& fam);

struct LimitReport {
  std::vector<double> t_values;
  std::vector<cplx> residue_sums;
  cplx base_sum{};
  cplx residue_at_alpha{};
  cplx target{};          // base_sum - 2 residue_at_alpha
  cplx extrapolated{};    // polynomial extrapolation to t = 0
  double error = 0.0;     // |extrapolated - target|
  std::vector<double> observed_orders;  // log2 of successive difference ratios
  bool passed = false;    // error <= tolerance
  double tolerance = 1e-4;
};

/// Throws Precondition unless the base basis has b1(alpha) = 0 and the
/// family bases are filled.
LimitReport handle_limit_check(const HandleFamily& fam, double tolerance = 1e-4);

/// Neville evaluation at x = 0 of the interpolant through (x_k, y_k).
cplx extrapolate_to_zero(const std::vector<double>& x, const std::vector<cplx>& y);

}  // namespace sgspec
