#include "sgspec/invariants.hpp"

#include "sgspec/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>

namespace sgspec {

namespace {

constexpr int kCircleNodes = 256;
constexpr double kClusterRel = 1e-3;

// Remainder of n modulo d (d nonzero).
CPoly poly_rem(const CPoly& n, const CPoly& d) {
  std::vector<cplx> r = n.coeffs();
  const int dd = d.degree();
  for (int k = static_cast<int>(r.size()) - 1; k >= dd; --k) {
    const cplx q = r[k] / d.leading();
    for (int j = 0; j <= dd; ++j) r[k - dd + j] -= q * d[j];
    r[k] = 0.0;
  }
  return CPoly(std::move(r));
}

// Residue at infinity of n / d d lambda: minus the coefficient of 1/lambda.
cplx residue_at_infinity(const CPoly& n, const CPoly& d) {
  if (n.is_zero() || n.degree() - d.degree() < -1) return 0.0;
  const CPoly r = poly_rem(n, d);
  return -r[d.degree() - 1] / d.leading();
}

// Sum of the residues of n / (bb * d2) at the roots of bb. Roots closer than
// kClusterRel are summed together by a circle around their mean, since the
// simple-root formula loses all accuracy on nearly double roots.
cplx sum_residues(const CPoly& n, const CPoly& bb, const CPoly& d2) {
  if (bb.degree() <= 0) return 0.0;
  const auto vals = root_values(bb);
  const auto groups = cluster(vals, kClusterRel);
  const auto r2 = d2.degree() > 0 ? root_values(d2) : std::vector<cplx>{};
  const CPoly dbb = bb.derivative();
  cplx total = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const cplx z = groups[i].value;
    if (groups[i].multiplicity == 1) {
      total += n(z) / (dbb(z) * d2(z));
      continue;
    }
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < groups.size(); ++j)
      if (j != i) gap = std::min(gap, std::abs(groups[j].value - z));
    for (const cplx& w : r2) gap = std::min(gap, std::abs(w - z));
    const double rho = std::isfinite(gap) ? 0.5 * gap : 0.5 * (1.0 + std::abs(z));
    cplx s = 0.0;
    for (int k = 0; k < kCircleNodes; ++k) {
      const cplx e = std::polar(rho, 2 * std::numbers::pi * (k + 0.5) / kCircleNodes);
      const cplx w = z + e;
      s += n(w) / (bb(w) * d2(w)) * e;
    }
    total += s / static_cast<double>(kCircleNodes);
  }
  return total;
}

void require_coprime(const CPoly& p, const CPoly& q, const char* what) {
  const double nr = normalized_resultant(p, q);
  if (nr < 1e-12) {
    std::ostringstream os;
    os << what << ": polynomials share a root (normalized resultant " << nr << "), the pair lies in S";
    throw Error(ErrorKind::Degeneracy, os.str());
  }
}

}  // namespace

int f_degree(const CPoly& b1, const CPoly& b2) {
  if (b1.is_zero() && b2.is_zero()) throw Error(ErrorKind::Domain, "f_degree: both polynomials are zero");
  const int n = std::max(b1.degree(), b2.degree()) + 1;
  double n1 = 0, n2 = 0;
  cplx ip = 0.0;
  for (int k = 0; k < n; ++k) {
    n1 += std::norm(b1[k]);
    n2 += std::norm(b2[k]);
    ip += std::conj(b1[k]) * b2[k];
  }
  if (n1 * n2 - std::norm(ip) <= 1e-20 * n1 * n2)
    throw Error(ErrorKind::Degeneracy, "f_degree: b1 and b2 are proportional");
  const auto r1 = b1.degree() > 0 ? roots(b1) : std::vector<Root>{};
  const auto r2 = b2.degree() > 0 ? roots(b2) : std::vector<Root>{};
  int common = 0;
  for (const auto& x : r1)
    for (const auto& y : r2)
      if (std::abs(x.value - y.value) <= 1e-6 * (1.0 + std::abs(x.value)))
        common += std::min(x.multiplicity, y.multiplicity);
  return std::max(b1.degree(), b2.degree()) - common;
}

cplx discriminant_delta(const CPoly& b1, const CPoly& b2) {
  if (b1.degree() != b2.degree() || b1.is_zero()) {
    std::ostringstream os;
    os << "discriminant needs equal degrees, got " << b1.degree() << " and " << b2.degree();
    throw Error(ErrorKind::Domain, os.str());
  }
  const auto r1 = root_values(b1), r2 = root_values(b2);
  cplx d = 1.0;
  for (const cplx& x : r1)
    for (const cplx& y : r2) d *= x - y;
  return d;
}

double normalized_resultant(const CPoly& b1, const CPoly& b2) {
  const cplx r = resultant(b1, b2);
  return std::abs(r) / (std::pow(b1.norm2(), b2.degree()) * std::pow(b2.norm2(), b1.degree()));
}

double span_resultant(const CPoly& b1, const CPoly& b2) {
  const double n1 = b1.norm2();
  if (!(n1 > 0.0)) return 0.0;
  const CPoly u1 = (1.0 / n1) * b1;
  double c = 0.0;
  for (int k = 0; k <= std::max(u1.degree(), b2.degree()); ++k) c += (std::conj(u1[k]) * b2[k]).real();
  const CPoly w = b2 - c * u1;
  const double n2 = w.norm2();
  if (!(n2 > 1e-14 * b2.norm2())) return 0.0;
  return normalized_resultant(u1, (1.0 / n2) * w);
}

cplx level_sum(const CPoly& a, const CPoly& b1, const CPoly& b2, const SpherePoint& p) {
  require_coprime(b1, b2, "level_sum");
  CPoly bb, d2, n;
  if (p.at_infinity) {
    bb = b2;
    d2 = b1;
    n = -1.0 * a;
  } else {
    bb = (b1 - p.z * b2).trimmed(1e-14);
    d2 = b2;
    n = a;
  }
  if (bb.is_zero()) throw Error(ErrorKind::Degeneracy, "level_sum: b1 - p b2 vanishes identically");
  return sum_residues(n, bb, d2) + residue_at_infinity(n, bb * d2);
}

cplx residue_sum(const CPoly& a, const CPoly& b1, const CPoly& b2) {
  return level_sum(a, b1, b2, SpherePoint{0.0, false});
}

std::pair<CPoly, CPoly> c_polynomials(const CPoly& a, const CPoly& b1, const CPoly& b2) {
  const int g = std::max(b1.degree(), b2.degree()) - 1;
  if (g < 0) throw Error(ErrorKind::Domain, "c_polynomials: b1, b2 must have degree at least 1");
  if (a.degree() > 2 * g) throw Error(ErrorKind::DegreeOverflow, "c_polynomials: deg a exceeds 2g");
  const int m = 2 * g + 2;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(m, m);
  Eigen::VectorXcd rhs(m);
  for (int k = 0; k < m; ++k) {
    rhs[k] = a[k];
    for (int i = 0; i <= g; ++i) {
      if (k - i >= 0) {
        M(k, i) = b2[k - i];
        M(k, g + 1 + i) = -b1[k - i];
      }
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!(s[m - 1] > 1e-12 * s[0])) {
    std::ostringstream os;
    os << "c_polynomials: Bezout system is singular (condition " << s[0] / s[m - 1]
       << "); b1 and b2 share a root";
    throw Error(ErrorKind::Degeneracy, os.str());
  }
  const Eigen::VectorXcd x = svd.solve(rhs);
  std::vector<cplx> c1(g + 1), c2(g + 1);
  for (int i = 0; i <= g; ++i) {
    c1[i] = x[i];
    c2[i] = x[g + 1 + i];
  }
  return {CPoly(std::move(c1)), CPoly(std::move(c2))};
}

ClassLabel classify(const CPoly& a, const CPoly& b1, const CPoly& b2, const ClassifyOptions& opts) {
  ClassLabel out;
  out.options = opts;
  out.degree_f = -1;
  try {
    out.degree_f = f_degree(b1, b2);
  } catch (const Error&) {
  }
  if (b1.degree() == b2.degree()) out.discriminant = discriminant_delta(b1, b2);
  out.discriminant_scaled = span_resultant(b1, b2);
  out.in_S = out.discriminant_scaled < opts.tol_S;
  if (out.in_S) return out;

  out.residue_sum = residue_sum(a, b1, b2);
  out.in_R = std::abs(out.residue_sum) > opts.tol_R;

  const auto [c1, c2] = c_polynomials(a, b1, b2);
  out.degree_c1 = c1.trimmed(1e-8).degree();
  out.degree_c2 = c2.trimmed(1e-8).degree();
  out.bezout_residual = coeff_distance(c1 * b2 - c2 * b1, a);

  const int g = std::max(b1.degree(), b2.degree()) - 1;
  for (const CPoly* c : {&c1, &c2}) {
    // lambda^(g-1) conj(c(1/conj lambda)) has coefficient conj(c_k) at power g-1-k.
    double worst = 0.0;
    const double scale = 1.0 + c->max_abs_coeff();
    for (int power = -1; power <= g; ++power) {
      const int k = g - 1 - power;
      const cplx lhs = (k >= 0 && k <= g) ? std::conj((*c)[k]) : cplx{};
      const cplx rhs = power >= 0 ? (*c)[power] : cplx{};
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    out.c_reality_residual = std::max(out.c_reality_residual, worst);
  }
  return out;
}

ClassLabel classify(const SpectralCurve& c, const BBasis& basis, const ClassifyOptions& opts) {
  return classify(c.a(), basis.b1, basis.b2, opts);
}

BBasis mobius_act(const BBasis& basis, const Mat2& m) {
  const double det = m[0] * m[3] - m[1] * m[2];
  const double scale = std::abs(m[0]) + std::abs(m[1]) + std::abs(m[2]) + std::abs(m[3]);
  if (!(std::abs(det) > 1e-14 * scale * scale)) throw Error(ErrorKind::Domain, "mobius_act: singular matrix");
  BBasis out;
  out.b1 = m[0] * basis.b1 + m[1] * basis.b2;
  out.b2 = m[2] * basis.b1 + m[3] * basis.b2;
  out.gram = coefficient_gram(out.b1, out.b2);
  out.a_period_residual = std::max(std::abs(m[0]) + std::abs(m[1]), std::abs(m[2]) + std::abs(m[3])) *
                          basis.a_period_residual;
  return out;
}

BBasis so2_align(const BBasis& basis, cplx alpha) {
  const cplx v1 = basis.b1(alpha), v2 = basis.b2(alpha);
  // v1 and v2 share a phase on the unit circle; reduce both to real numbers.
  const cplx big = std::abs(v1) >= std::abs(v2) ? v1 : v2;
  if (big == cplx{}) return basis;
  const cplx u = big / std::abs(big);
  const double phi = std::atan2(-(v1 * std::conj(u)).real(), (v2 * std::conj(u)).real());
  const double c = std::cos(phi), s = std::sin(phi);
  return mobius_act(basis, {c, s, -s, c});
}

}  // namespace sgspec
