#include "sgspec/polyalg.hpp"

#include "sgspec/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sgspec {

CPoly::CPoly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { trim(); }

CPoly::CPoly(std::initializer_list<cplx> coeffs) : c_(coeffs) { trim(); }

CPoly CPoly::constant(cplx c) { return CPoly(std::vector<cplx>{c}); }

CPoly CPoly::monomial(int power, cplx c) {
  std::vector<cplx> v(static_cast<std::size_t>(power) + 1, cplx{});
  v.back() = c;
  return CPoly(std::move(v));
}

CPoly CPoly::from_roots(std::span<const cplx> roots, cplx lead) {
  std::vector<cplx> v{lead};
  for (const cplx r : roots) {
    v.push_back(cplx{});
    for (std::size_t k = v.size() - 1; k > 0; --k) v[k] = v[k - 1] - r * v[k];
    v[0] = -r * v[0];
  }
  return CPoly(std::move(v));
}

void CPoly::trim() {
  while (!c_.empty() && c_.back() == cplx{}) c_.pop_back();
}

cplx CPoly::operator[](int k) const noexcept {
  if (k < 0 || k >= static_cast<int>(c_.size())) return {};
  return c_[static_cast<std::size_t>(k)];
}

double CPoly::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (const cplx& c : c_) m = std::max(m, std::abs(c));
  return m;
}

double CPoly::norm2() const noexcept {
  double s = 0.0;
  for (const cplx& c : c_) s += std::norm(c);
  return std::sqrt(s);
}

cplx CPoly::operator()(cplx x) const noexcept {
  cplx acc{};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

CPoly CPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<cplx> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return CPoly(std::move(d));
}

CPoly CPoly::trimmed(double tol) const {
  const double thresh = tol * (1.0 + max_abs_coeff());
  std::vector<cplx> v = c_;
  while (!v.empty() && std::abs(v.back()) <= thresh) v.pop_back();
  return CPoly(std::move(v));
}

CPoly& CPoly::operator+=(const CPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

CPoly& CPoly::operator-=(const CPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

CPoly& CPoly::operator*=(cplx s) {
  for (cplx& c : c_) c *= s;
  trim();
  return *this;
}

CPoly operator*(const CPoly& a, const CPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<cplx> v(a.c_.size() + b.c_.size() - 1, cplx{});
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  return CPoly(std::move(v));
}

double coeff_distance(const CPoly& p, const CPoly& q) {
  const int n = std::max(p.degree(), q.degree());
  double diff = 0.0;
  for (int k = 0; k <= n; ++k) diff = std::max(diff, std::abs(p[k] - q[k]));
  return diff / (1.0 + std::max(p.max_abs_coeff(), q.max_abs_coeff()));
}

CPoly star(const CPoly& p, int n) {
  if (p.degree() > n) {
    std::ostringstream os;
    os << "star: degree " << p.degree() << " exceeds " << n;
    throw Error(ErrorKind::DegreeOverflow, os.str());
  }
  std::vector<cplx> v(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) v[static_cast<std::size_t>(k)] = std::conj(p[n - k]);
  return CPoly(std::move(v));
}

bool is_star_symmetric(const CPoly& p, int n, double tol) {
  if (p.degree() > n) return false;
  return coeff_distance(star(p, n), p) <= tol;
}

namespace {

constexpr double kEps = 2.220446049250313e-16;

struct HornerResult {
  cplx p, dp;
  double bound;  // running-error bound for p
};

HornerResult horner2(const std::vector<cplx>& c, cplx z) {
  cplx p = c.back(), dp{};
  double bound = std::abs(p);
  const double az = std::abs(z);
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[k];
    bound = bound * az + std::abs(p);
  }
  return {p, dp, bound * kEps * 4.0};
}

// Aberth-Ehrlich on coefficients with nonzero constant and leading terms.
std::vector<cplx> aberth(const std::vector<cplx>& c, bool& converged) {
  const std::size_t n = c.size() - 1;
  std::vector<cplx> z(n);
  const double r = std::pow(std::abs(c.front()) / std::abs(c.back()), 1.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
    z[k] = std::polar(r, th);
  }
  std::vector<bool> done(n, false);
  converged = false;
  for (int iter = 0; iter < 500; ++iter) {
    bool all = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const HornerResult h = horner2(c, z[i]);
      if (std::abs(h.p) <= h.bound) {
        done[i] = true;
        continue;
      }
      const cplx ratio = h.p / h.dp;
      cplx sum{};
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      const cplx w = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
        all = false;
        continue;
      }
      z[i] -= w;
      if (std::abs(w) <= 2.0 * kEps * std::abs(z[i])) done[i] = true;
      else all = false;
    }
    if (all) {
      converged = true;
      break;
    }
  }
  return z;
}

std::vector<cplx> companion_roots(const std::vector<cplx>& c) {
  const Eigen::Index n = static_cast<Eigen::Index>(c.size()) - 1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) m(0, k) = -c[static_cast<std::size_t>(n - 1 - k)] / c.back();
  for (Eigen::Index k = 1; k < n; ++k) m(k, k - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  std::vector<cplx> out(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
  return out;
}

void newton_polish(const std::vector<cplx>& c, std::vector<cplx>& z) {
  for (cplx& r : z) {
    for (int it = 0; it < 3; ++it) {
      const HornerResult h = horner2(c, r);
      if (std::abs(h.p) <= h.bound || h.dp == cplx{}) break;
      const cplx step = h.p / h.dp;
      if (std::abs(step) > 1e-6 * (1.0 + std::abs(r))) break;  // not in the quadratic basin
      r -= step;
    }
  }
}

}  // namespace

std::vector<Root> cluster(std::span<const cplx> values, double rel) {
  std::vector<Root> out;
  std::vector<cplx> sums;
  for (const cplx v : values) {
    bool merged = false;
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (std::abs(v - out[k].value) < rel * (1.0 + std::abs(v))) {
        sums[k] += v;
        out[k].multiplicity += 1;
        out[k].value = sums[k] / static_cast<double>(out[k].multiplicity);
        merged = true;
        break;
      }
    }
    if (!merged) {
      out.push_back({v, 1});
      sums.push_back(v);
    }
  }
  return out;
}

std::vector<cplx> root_values(const CPoly& p, double tol) {
  if (p.is_zero()) throw Error(ErrorKind::Domain, "roots: zero polynomial");
  const auto& c = p.coeffs();
  std::size_t zeros = 0;
  while (c[zeros] == cplx{}) ++zeros;
  std::vector<cplx> reduced(c.begin() + static_cast<std::ptrdiff_t>(zeros), c.end());
  std::vector<cplx> out(zeros, cplx{});
  if (reduced.size() <= 1) return out;

  auto accept = [&](std::vector<cplx> z) {
    std::vector<cplx> all = out;
    all.insert(all.end(), z.begin(), z.end());
    return std::pair{coeff_distance(CPoly::from_roots(all, p.leading()), p), all};
  };

  std::vector<cplx> z;
  if (reduced.size() == 2) {
    z = {-reduced[0] / reduced[1]};
  } else {
    bool ok = false;
    z = aberth(reduced, ok);
    newton_polish(reduced, z);
  }
  auto [err, all] = accept(z);
  if (err <= tol) return all;

  std::vector<cplx> zc = companion_roots(reduced);
  newton_polish(reduced, zc);
  auto [err2, all2] = accept(zc);
  if (err2 <= tol) return all2;

  std::ostringstream os;
  os << "roots: reconstruction error " << std::min(err, err2) << " exceeds " << tol;
  throw AccuracyError(os.str(), err <= err2 ? all : all2);
}

std::vector<Root> roots(const CPoly& p, double tol) {
  const std::vector<cplx> v = root_values(p, tol);
  return cluster(v, 1e-8);
}

cplx resultant(const CPoly& p, const CPoly& q) {
  if (p.is_zero() && q.is_zero()) throw Error(ErrorKind::Domain, "resultant: both polynomials are zero");
  if (p.is_zero() || q.is_zero()) return {};
  const int m = p.degree(), n = q.degree();
  const int size = m + n;
  if (size == 0) return 1.0;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(size, size);
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) s(r, r + k) = p[m - k];
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) s(n + r, r + k) = q[n - k];
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(s).determinant();
}

CPoly wronskian(const CPoly& b1, const CPoly& b2) {
  CPoly w = b1.derivative() * b2 - b2.derivative() * b1;
  // For equal degrees d the lambda^(2d-1) terms cancel identically; drop
  // the rounding residue so it does not show up as a spurious huge root.
  const int d = b1.degree();
  if (d >= 1 && d == b2.degree() && w.degree() == 2 * d - 1) {
    std::vector<cplx> c = w.coeffs();
    c.pop_back();
    w = CPoly(std::move(c));
  }
  return w;
}

}  // namespace sgspec
