#include "sgspec/bspace.hpp"

#include "sgspec/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace sgspec {

namespace {

constexpr double kRankTol = 1e-8;
constexpr double kSignificant = 1e-6;

Eigen::VectorXd real_vector(const CPoly& p, int n) {
  Eigen::VectorXd v(2 * n);
  for (int k = 0; k < n; ++k) {
    v[2 * k] = p[k].real();
    v[2 * k + 1] = p[k].imag();
  }
  return v;
}

Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

}  // namespace

std::array<std::array<double, 2>, 2> coefficient_gram(const CPoly& b1, const CPoly& b2) {
  const int n = std::max(b1.degree(), b2.degree()) + 1;
  auto dot = [n](const CPoly& p, const CPoly& q) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += (std::conj(p[k]) * q[k]).real();
    return s;
  };
  return {{{dot(b1, b1), dot(b1, b2)}, {dot(b2, b1), dot(b2, b2)}}};
}

std::vector<CPoly> real_parametrization(int g) {
  if (g < 0) throw Error(ErrorKind::Domain, "genus must be non-negative");
  const int n = g + 1;
  const cplx i(0, 1);
  std::vector<CPoly> out;
  for (int k = 0; 2 * k < n; ++k) {
    out.push_back(CPoly::monomial(k) + CPoly::monomial(n - k));
    out.push_back(CPoly::monomial(k, i) - CPoly::monomial(n - k, i));
  }
  if (n % 2 == 0) out.push_back(CPoly::monomial(n / 2));
  return out;
}

std::vector<double> real_coordinates(const CPoly& b, int g) {
  const int n = g + 1;
  std::vector<double> x;
  for (int k = 0; 2 * k < n; ++k) {
    // b_k = x + i y with b = x (l^k + l^(n-k)) + y (i l^k - i l^(n-k)) + ...
    x.push_back(b[k].real());
    x.push_back(b[k].imag());
  }
  if (n % 2 == 0) x.push_back(b[n / 2].real());
  return x;
}

BBasis compute_b_basis(const SpectralCurve& c, const AtlasMoments& moments, BSpaceReport* report) {
  const int g = c.genus();
  const auto P = real_parametrization(g);
  const int n = g + 2;

  Eigen::MatrixXd C(g, n);
  double imag_max = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto ap = a_periods(moments, P[k]);
    for (int j = 0; j < g; ++j) {
      C(j, k) = ap[j].real();
      imag_max = std::max(imag_max, std::abs(ap[j].imag()));
    }
  }

  Eigen::MatrixXd N(n, 2);
  std::vector<double> sv;
  if (g == 0) {
    N.setIdentity();
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
    for (int i = 0; i < svd.singularValues().size(); ++i) sv.push_back(svd.singularValues()[i]);
    if (!(sv.back() > kRankTol * sv.front())) {
      std::ostringstream os;
      os << "A-period constraint map has numerical rank below " << g << "; singular values:";
      for (double s : sv) os << ' ' << s;
      throw Error(ErrorKind::Rank, os.str());
    }
    N = svd.matrixV().rightCols(2);
  }
  if (report) {
    report->singular_values = sv;
    report->a_period_imag = imag_max;
  }

  int k0 = 0;
  while (k0 < n && N.row(k0).norm() <= kSignificant) ++k0;
  const Eigen::Vector2d w = N.row(k0).transpose();
  const Eigen::Vector2d wp(-w[1], w[0]);
  Eigen::VectorXd v1 = N * w / w.norm();
  Eigen::VectorXd v2 = N * wp / w.norm();
  for (int k = 0; k < n; ++k) {
    if (k == k0 || std::abs(v2[k]) <= kSignificant) continue;
    if (v2[k] < 0) v2 = -v2;
    break;
  }

  BBasis out;
  for (int k = 0; k < n; ++k) {
    out.b1 += v1[k] * P[k];
    out.b2 += v2[k] * P[k];
  }
  out.gram = coefficient_gram(out.b1, out.b2);
  for (const CPoly* b : {&out.b1, &out.b2})
    for (const cplx& p : a_periods(moments, *b)) out.a_period_residual = std::max(out.a_period_residual, std::abs(p));
  return out;
}

BBasis compute_b_basis(const SpectralCurve& c, const HomologyAtlas& atlas, const QuadratureConfig& cfg,
                       BSpaceReport* report) {
  HomologyAtlas cycles = atlas;
  cycles.gammas.clear();
  return compute_b_basis(c, atlas_moments(c, cycles, cfg), report);
}

double span_distance(const CPoly& p1, const CPoly& p2, const CPoly& q1, const CPoly& q2) {
  const int n = std::max({p1.degree(), p2.degree(), q1.degree(), q2.degree()}) + 1;
  Eigen::MatrixXd P(2 * n, 2), Q(2 * n, 2);
  P << real_vector(p1, n), real_vector(p2, n);
  Q << real_vector(q1, n), real_vector(q2, n);
  const Eigen::MatrixXd U = orthonormal_columns(P), V = orthonormal_columns(Q);
  const Eigen::MatrixXd R = V - U * (U.transpose() * V);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(R);
  return svd.singularValues()[0];
}

}  // namespace sgspec
