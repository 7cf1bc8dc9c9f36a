#pragma once

// Complex polynomial algebra in double precision: arithmetic, the reality
// star-involution, simultaneous root finding, resultants and Wronskians.

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace sgspec {

using cplx = std::complex<double>;

/// Polynomial with complex coefficients, index = power of lambda.
/// Exact trailing zeros are trimmed, so the stored leading coefficient is
/// nonzero unless the polynomial is zero (empty coefficient list).
class CPoly {
 public:
  CPoly() = default;
  explicit CPoly(std::vector<cplx> coeffs);
  CPoly(std::initializer_list<cplx> coeffs);

  static CPoly constant(cplx c);
  static CPoly monomial(int power, cplx c = 1.0);
  /// lead * prod (lambda - r)
  static CPoly from_roots(std::span<const cplx> roots, cplx lead = 1.0);

  bool is_zero() const noexcept { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  const std::vector<cplx>& coeffs() const noexcept { return c_; }
  /// Coefficient of lambda^k, zero beyond the degree.
  cplx operator[](int k) const noexcept;
  cplx leading() const noexcept { return c_.empty() ? cplx{} : c_.back(); }
  double max_abs_coeff() const noexcept;
  double norm2() const noexcept;

  cplx operator()(cplx x) const noexcept;
  CPoly derivative() const;
  /// Drop leading coefficients with |c| <= tol * (1 + max|c|).
  CPoly trimmed(double tol) const;

  CPoly& operator+=(const CPoly& o);
  CPoly& operator-=(const CPoly& o);
  CPoly& operator*=(cplx s);

  friend CPoly operator+(CPoly a, const CPoly& b) { return a += b; }
  friend CPoly operator-(CPoly a, const CPoly& b) { return a -= b; }
  friend CPoly operator*(CPoly a, cplx s) { return a *= s; }
  friend CPoly operator*(cplx s, CPoly a) { return a *= s; }
  friend CPoly operator*(const CPoly& a, const CPoly& b);
  friend bool operator==(const CPoly&, const CPoly&) = default;

 private:
  void trim();
  std::vector<cplx> c_;
};

/// max_k |p_k - q_k| / (1 + max_k max(|p_k|, |q_k|))
double coeff_distance(const CPoly& p, const CPoly& q);

/// lambda^n * conj(p(1 / conj(lambda))): coefficients reversed and
/// conjugated, padded to length n+1. Throws DegreeOverflow if deg p > n.
CPoly star(const CPoly& p, int n);

/// star(p, n) == p within tol (relative coefficient distance).
bool is_star_symmetric(const CPoly& p, int n, double tol = 1e-12);

struct Root {
  cplx value;
  int multiplicity = 1;
};

/// Roots of a nonzero polynomial by Aberth-Ehrlich iteration, with a
/// companion-matrix fallback and Newton polishing. Roots closer than
/// 1e-8 * (1 + |root|) are merged into one entry with a multiplicity.
/// The product lead * prod (lambda - r)^mult reproduces p within tol in
/// coeff_distance, otherwise an AccuracyError carries the best iterate.
std::vector<Root> roots(const CPoly& p, double tol = 1e-10);

/// Roots repeated according to multiplicity.
std::vector<cplx> root_values(const CPoly& p, double tol = 1e-10);

/// Merge numerically coincident values; exposed for callers that cluster
/// their own root lists.
std::vector<Root> cluster(std::span<const cplx> values, double rel = 1e-8);

/// Determinant of the Sylvester matrix (rows of p's coefficients, highest
/// first, followed by rows of q's). Equals lc(p)^deg q * lc(q)^deg p *
/// prod (alpha_i - beta_j).
cplx resultant(const CPoly& p, const CPoly& q);

/// b1' b2 - b2' b1
CPoly wronskian(const CPoly& b1, const CPoly& b2);

}  // namespace sgspec
