#include "sgspec/search.hpp"

#include "sgspec/errors.hpp"
#include "sgspec/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>

namespace sgspec {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

std::vector<double> to_double(const IntVec& m) { return {m.begin(), m.end()}; }

// Largest singular value of the (rows x 2) matrix [x y] given column norms
// and inner product.
double spectral_norm_2col(double xx, double yy, double xy) {
  const double tr = xx + yy, det = xx * yy - xy * xy;
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  return std::sqrt(std::max(0.0, 0.5 * tr + disc));
}

// Orthonormal basis of the orthogonal complement of span(v1, v2) in R^n.
std::vector<std::vector<double>> complement(const std::vector<double>& v1, const std::vector<double>& v2) {
  const int n = static_cast<int>(v1.size());
  Eigen::MatrixXd m(n, 2);
  for (int k = 0; k < n; ++k) {
    m(k, 0) = v1[static_cast<std::size_t>(k)];
    m(k, 1) = v2[static_cast<std::size_t>(k)];
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  std::vector<std::vector<double>> w;
  for (int j = 2; j < n; ++j) {
    std::vector<double> col(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) col[static_cast<std::size_t>(k)] = q(k, j);
    w.push_back(std::move(col));
  }
  return w;
}

long long gcd_all(const IntVec& m) {
  long long g = 0;
  for (const long long x : m) g = std::gcd(g, x < 0 ? -x : x);
  return g;
}

// Primitive representative with first nonzero entry positive; empty if zero.
IntVec normalize(IntVec m) {
  const long long g = gcd_all(m);
  if (g == 0) return {};
  for (long long& x : m) x /= g;
  for (const long long x : m) {
    if (x == 0) continue;
    if (x < 0)
      for (long long& y : m) y = -y;
    break;
  }
  return m;
}

long long max_entry(const IntVec& m) {
  long long e = 0;
  for (const long long x : m) e = std::max(e, x < 0 ? -x : x);
  return e;
}

struct Candidate {
  IntVec m;
  double angle = 0.0;   // sine of the angle between m and the plane
  double norm2 = 0.0;
  std::vector<double> a;  // W^T m
};

bool candidate_less(const Candidate& x, const Candidate& y) {
  if (x.angle != y.angle) return x.angle < y.angle;
  if (x.norm2 != y.norm2) return x.norm2 < y.norm2;
  return x.m < y.m;
}

Candidate make_candidate(IntVec m, const std::vector<std::vector<double>>& w) {
  Candidate c;
  c.norm2 = 0.0;
  for (const long long x : m) c.norm2 += static_cast<double>(x) * static_cast<double>(x);
  const std::vector<double> md = to_double(m);
  double aa = 0.0;
  for (const auto& col : w) {
    c.a.push_back(dot(col, md));
    aa += c.a.back() * c.a.back();
  }
  c.angle = std::sqrt(aa / c.norm2);
  c.m = std::move(m);
  return c;
}

// Sine of the largest principal angle between span(x.m, y.m) and the plane;
// negative when the two vectors are dependent.
double pair_distance(const Candidate& x, const Candidate& y) {
  double xy = 0.0;
  for (std::size_t k = 0; k < x.m.size(); ++k) xy += static_cast<double>(x.m[k]) * static_cast<double>(y.m[k]);
  const double c = xy / x.norm2;
  const double perp2 = y.norm2 - c * xy;
  if (!(perp2 > 1e-9 * y.norm2)) return -1.0;
  // Columns of W^T V with V = [x/|x|, (y - c x)/|y - c x|].
  double uu = 0.0, vv = 0.0, uv = 0.0;
  const double sx = 1.0 / std::sqrt(x.norm2), sp = 1.0 / std::sqrt(perp2);
  for (std::size_t k = 0; k < x.a.size(); ++k) {
    const double u = x.a[k] * sx;
    const double v = (y.a[k] - c * x.a[k]) * sp;
    uu += u * u;
    vv += v * v;
    uv += u * v;
  }
  return std::min(1.0, spectral_norm_2col(uu, vv, uv));
}

int exhaustive_bound(int n, const RationalSearchOptions& o) {
  int q = o.exhaustive_min;
  while (std::pow(2.0 * (q + 1) + 1.0, n) <= o.exhaustive_budget) ++q;
  return q;
}

// Primitive vectors of the lattice ladder, independent of any entry bound.
std::vector<IntVec> lattice_vectors(const std::vector<std::vector<double>>& w, int n) {
  std::vector<IntVec> out;
  const int d = n + static_cast<int>(w.size());
  for (int k = 0; k <= 80; ++k) {
    const double C = std::pow(2.0, 0.5 * k);
    std::vector<std::vector<double>> cols(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(d)));
    for (int i = 0; i < n; ++i) {
      cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
      for (std::size_t r = 0; r < w.size(); ++r)
        cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(n) + r] = C * w[r][static_cast<std::size_t>(i)];
    }
    std::vector<IntVec> U;
    try {
      U = lll_reduce(cols);
    } catch (const Error&) {
      break;
    }
    long long smallest = std::numeric_limits<long long>::max();
    for (std::size_t i = 0; i < U.size(); ++i) {
      smallest = std::min(smallest, max_entry(U[i]));
      out.push_back(U[i]);
      for (std::size_t j = 0; j < i; ++j) {
        IntVec s(U[i].size()), t(U[i].size());
        for (std::size_t r = 0; r < s.size(); ++r) {
          s[r] = U[i][r] + U[j][r];
          t[r] = U[i][r] - U[j][r];
        }
        out.push_back(std::move(s));
        out.push_back(std::move(t));
      }
    }
    if (smallest > 10'000'000) break;
  }
  return out;
}

}  // namespace

PlaneFrame plane_from_phi(const std::vector<double>& phi1, const std::vector<double>& phi2, const BBasis& basis) {
  const double n1 = norm(phi1);
  if (!(n1 > 0.0)) throw Error(ErrorKind::Rank, "degenerate plane: phi(b1) vanishes");
  PlaneFrame f;
  f.basis = basis;
  f.phi1 = phi1;
  f.phi2 = phi2;
  f.v1 = phi1;
  for (double& x : f.v1) x /= n1;
  f.v2 = phi2;
  for (int pass = 0; pass < 2; ++pass) {
    const double c = dot(f.v1, f.v2);
    for (std::size_t k = 0; k < f.v2.size(); ++k) f.v2[k] -= c * f.v1[k];
  }
  const double n2 = norm(f.v2);
  if (!(n2 > 1e-10 * norm(phi2)) || !(n2 > 0.0)) throw Error(ErrorKind::Rank, "degenerate plane: phi(b1), phi(b2) dependent");
  for (double& x : f.v2) x /= n2;
  return f;
}

PlaneFrame grassmann_plane(const SpectralCurve& c, cplx lambda1, cplx lambda2, const HomologyAtlas& atlas,
                           const QuadratureConfig& cfg) {
  HomologyAtlas full = atlas;
  if (full.gammas.empty()) {
    full.gammas = gamma_paths(c, lambda1, lambda2);
    full.sym1 = lambda1;
    full.sym2 = lambda2;
  }
  const AtlasMoments m = atlas_moments(c, full, cfg);
  const BBasis basis = compute_b_basis(c, m);
  const PeriodVector p1 = phi_vector(m, basis.b1), p2 = phi_vector(m, basis.b2);
  PlaneFrame f = plane_from_phi(p1.entries, p2.entries, basis);
  f.residual_imag = std::max(p1.residual_imag, p2.residual_imag);
  return f;
}

double plane_distance(const std::vector<double>& u1, const std::vector<double>& u2, const std::vector<double>& w1,
                      const std::vector<double>& w2) {
  const PlaneFrame a = plane_from_phi(u1, u2, {});
  const PlaneFrame b = plane_from_phi(w1, w2, {});
  const auto comp = complement(b.v1, b.v2);
  double uu = 0.0, vv = 0.0, uv = 0.0;
  for (const auto& col : comp) {
    const double x = dot(col, a.v1), y = dot(col, a.v2);
    uu += x * x;
    vv += y * y;
    uv += x * y;
  }
  return std::min(1.0, spectral_norm_2col(uu, vv, uv));
}

std::vector<IntVec> lll_reduce(std::vector<std::vector<double>>& b, double delta) {
  const std::size_t n = b.size();
  std::vector<IntVec> U(n, IntVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) U[i][i] = 1;
  if (n == 0) return U;
  std::vector<std::vector<double>> bs(n);
  std::vector<std::vector<double>> mu(n, std::vector<double>(n, 0.0));
  std::vector<double> B(n);
  auto gram_schmidt = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      bs[i] = b[i];
      for (std::size_t j = 0; j < i; ++j) {
        mu[i][j] = B[j] > 0.0 ? dot(b[i], bs[j]) / B[j] : 0.0;
        for (std::size_t r = 0; r < bs[i].size(); ++r) bs[i][r] -= mu[i][j] * bs[j][r];
      }
      B[i] = dot(bs[i], bs[i]);
    }
  };
  gram_schmidt();
  std::size_t k = 1;
  int guard = 0;
  while (k < n) {
    if (++guard > 100000) throw Error(ErrorKind::Divergence, "lll_reduce: iteration limit");
    for (std::size_t j = k; j-- > 0;) {
      const double q = std::round(mu[k][j]);
      if (q == 0.0) continue;
      if (std::abs(q) > 4e15) throw Error(ErrorKind::Accuracy, "lll_reduce: coefficient overflow");
      const auto qi = static_cast<long long>(q);
      for (std::size_t r = 0; r < b[k].size(); ++r) b[k][r] -= q * b[j][r];
      for (std::size_t r = 0; r < n; ++r) U[k][r] -= qi * U[j][r];
      for (std::size_t l = 0; l <= j; ++l) mu[k][l] -= q * (l == j ? 1.0 : mu[j][l]);
    }
    if (B[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      std::swap(U[k], U[k - 1]);
      gram_schmidt();
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return U;
}

RationalPlane nearest_rational_plane(const PlaneFrame& p, int Q, const RationalSearchOptions& opts) {
  if (Q < 1) throw Error(ErrorKind::Domain, "nearest_rational_plane: Q must be at least 1");
  const int n = static_cast<int>(p.v1.size());
  if (n < 2) throw Error(ErrorKind::Domain, "nearest_rational_plane: dimension below 2");
  const auto w = complement(p.v1, p.v2);
  const int qe = std::min(Q, exhaustive_bound(n, opts));

  // Only candidates with angle below the best pair distance can matter, so
  // the enumeration keeps the `cap` smallest angles and grows cap if the
  // optimum is not provably inside the kept set.
  std::size_t cap = 20000;
  for (;;) {
    auto worse = [](const Candidate& x, const Candidate& y) { return candidate_less(x, y); };
    std::priority_queue<Candidate, std::vector<Candidate>, decltype(worse)> heap(worse);
    std::size_t seen = 0;
    auto offer = [&](IntVec m) {
      m = normalize(std::move(m));
      if (m.empty() || max_entry(m) > Q) return;
      Candidate c = make_candidate(std::move(m), w);
      ++seen;
      if (heap.size() < cap) {
        heap.push(std::move(c));
      } else if (candidate_less(c, heap.top())) {
        heap.pop();
        heap.push(std::move(c));
      }
    };

    IntVec v(static_cast<std::size_t>(n), -qe);
    for (;;) {
      // first nonzero entry positive and gcd 1: each primitive line once
      bool lead_ok = false;
      for (const long long x : v)
        if (x != 0) {
          lead_ok = x > 0;
          break;
        }
      if (lead_ok && gcd_all(v) == 1) offer(v);
      std::size_t i = 0;
      while (i < v.size() && v[i] == qe) v[i++] = -qe;
      if (i == v.size()) break;
      ++v[i];
    }
    if (opts.lattice_candidates && !w.empty())
      for (IntVec& m : lattice_vectors(w, n)) offer(std::move(m));

    std::vector<Candidate> cands;
    cands.reserve(heap.size());
    while (!heap.empty()) {
      cands.push_back(heap.top());
      heap.pop();
    }
    std::reverse(cands.begin(), cands.end());
    // drop duplicates (lattice vectors may repeat enumerated ones)
    cands.erase(std::unique(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) { return x.m == y.m; }),
                cands.end());

    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 1; i < cands.size(); ++i) {
      if (cands[i].angle >= best) break;
      for (std::size_t j = 0; j < i; ++j) {
        const double d = pair_distance(cands[j], cands[i]);
        if (d >= 0.0 && d < best) {
          best = d;
          bi = j;
          bj = i;
        }
      }
    }
    const bool complete = seen <= cap || (!cands.empty() && best <= cands.back().angle);
    if (!std::isfinite(best)) {
      if (complete) throw Error(ErrorKind::NotFound, "nearest_rational_plane: no independent pair within the entry bound");
    } else if (complete) {
      RationalPlane out;
      out.m1 = cands[bi].m;
      out.m2 = cands[bj].m;
      if (out.m1 < out.m2) std::swap(out.m1, out.m2);
      out.distance = best;
      out.Q = Q;
      out.candidates = seen;
      out.exhaustive_bound = qe;
      return out;
    }
    cap *= 4;
  }
}

PlaneFit fit_to_targets(const SpectralCurve& c, cplx lambda1, cplx lambda2, const IntVec& m1, const IntVec& m2,
                        const QuadratureConfig& cfg, const AtlasOptions& atlas_opts) {
  const int n = c.genus() + 2;
  if (static_cast<int>(m1.size()) != n || static_cast<int>(m2.size()) != n)
    throw Error(ErrorKind::Domain, "fit_to_targets: target length must be g+2");
  const HomologyAtlas atlas = full_atlas(c, lambda1, lambda2, atlas_opts);
  const AtlasMoments mom = atlas_moments(c, atlas, cfg);
  const BBasis basis = compute_b_basis(c, mom);
  const PeriodVector p1 = phi_vector(mom, basis.b1), p2 = phi_vector(mom, basis.b2);

  Eigen::MatrixXd F(n, 2), M(n, 2);
  for (int k = 0; k < n; ++k) {
    F(k, 0) = p1.entries[static_cast<std::size_t>(k)];
    F(k, 1) = p2.entries[static_cast<std::size_t>(k)];
    M(k, 0) = static_cast<double>(m1[static_cast<std::size_t>(k)]);
    M(k, 1) = static_cast<double>(m2[static_cast<std::size_t>(k)]);
  }
  const Eigen::MatrixXd G = F.colPivHouseholderQr().solve(M);
  PlaneFit fit;
  fit.basis = mobius_act(basis, {G(0, 0), G(1, 0), G(0, 1), G(1, 1)});
  fit.basis.a_period_residual = 0.0;
  for (const CPoly* b : {&fit.basis.b1, &fit.basis.b2})
    for (const cplx& ap : a_periods(mom, *b)) fit.basis.a_period_residual = std::max(fit.basis.a_period_residual, std::abs(ap));
  const PeriodVector q1 = phi_vector(mom, fit.basis.b1, false), q2 = phi_vector(mom, fit.basis.b2, false);
  fit.phi1 = q1.entries;
  fit.phi2 = q2.entries;
  fit.residual_imag = std::max(q1.residual_imag, q2.residual_imag);
  for (int k = 0; k < n; ++k) {
    fit.residual = std::max(fit.residual, std::abs(fit.phi1[static_cast<std::size_t>(k)] - M(k, 0)));
    fit.residual = std::max(fit.residual, std::abs(fit.phi2[static_cast<std::size_t>(k)] - M(k, 1)));
  }
  fit.label = classify(c, fit.basis);
  return fit;
}

namespace {

std::vector<cplx> unpack(const Eigen::VectorXd& x) {
  std::vector<cplx> e(static_cast<std::size_t>(x.size() / 2));
  for (std::size_t j = 0; j < e.size(); ++j) e[j] = {x(2 * static_cast<Eigen::Index>(j)), x(2 * static_cast<Eigen::Index>(j) + 1)};
  return e;
}

// Iterate past tol to leave margin for certification at doubled quadrature.
constexpr double kPolish = 1e-3;

struct Eval {
  SpectralCurve curve = SpectralCurve::from_roots({});
  PlaneFit fit;
  Eigen::VectorXd r;
};

}  // namespace

NewtonResult newton_refine(const SpectralCurve& c0, cplx lambda1, cplx lambda2, const IntVec& m1, const IntVec& m2,
                           const NewtonOptions& opts) {
  opts.cfg.validate();
  const int g = c0.genus();
  const int n = g + 2;
  AtlasOptions aopts;
  aopts.frame = opts.frame ? *opts.frame : default_sheet_frame(c0);

  // N: orthonormal complement of span(m1, m2), fixed for the whole run.
  std::vector<std::vector<double>> N;
  {
    const PlaneFrame target = plane_from_phi(to_double(m1), to_double(m2), {});
    N = complement(target.v1, target.v2);
  }
  auto evaluate = [&](const Eigen::VectorXd& x) {
    Eval e;
    e.curve = SpectralCurve::from_roots(unpack(x));
    e.fit = fit_to_targets(e.curve, lambda1, lambda2, m1, m2, opts.cfg, aopts);
    e.r.resize(2 * (n - 2));
    for (int j = 0; j < n - 2; ++j) {
      e.r(2 * j) = dot(N[static_cast<std::size_t>(j)], e.fit.phi1);
      e.r(2 * j + 1) = dot(N[static_cast<std::size_t>(j)], e.fit.phi2);
    }
    return e;
  };

  Eigen::VectorXd x(2 * g);
  for (int j = 0; j < g; ++j) {
    x(2 * j) = c0.etas()[static_cast<std::size_t>(j)].real();
    x(2 * j + 1) = c0.etas()[static_cast<std::size_t>(j)].imag();
  }
  std::vector<NewtonStep> trace;
  Eval cur = evaluate(x);
  trace.push_back({0, cur.fit.residual, cur.r.norm(), 0.0, 0.0, cur.fit.label.in_R});
  if (g == 0 || cur.fit.residual < kPolish * opts.tol) return {cur.curve, *aopts.frame, cur.fit, trace};

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    Eigen::MatrixXd J(2 * g, 2 * g);
    for (int k = 0; k < 2 * g; ++k) {
      const double h = opts.fd_scale * (1.0 + std::abs(cplx{x(2 * (k / 2)), x(2 * (k / 2) + 1)}));
      Eigen::VectorXd xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      try {
        J.col(k) = (evaluate(xp).r - evaluate(xm).r) / (2.0 * h);
      } catch (const Error& e) {
        trace.push_back({iter, cur.fit.residual, cur.r.norm(), 0.0, 0.0, cur.fit.label.in_R});
        throw NewtonFailure(e.kind(), std::string("newton_refine: Jacobian evaluation failed: ") + e.what(), trace);
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cond = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
    if (!(cond <= opts.cond_max)) {
      trace.push_back({iter, cur.fit.residual, cur.r.norm(), 0.0, cond, cur.fit.label.in_R});
      std::ostringstream os;
      os << "newton_refine: Jacobian condition " << cond << " exceeds " << opts.cond_max << " (in_R=" << cur.fit.label.in_R
         << ", residue_sum=" << cur.fit.label.residue_sum << ", |delta|=" << cur.fit.label.discriminant_scaled << ")";
      throw NewtonFailure(ErrorKind::IllConditioned, os.str(), trace);
    }
    const Eigen::VectorXd dx = svd.solve(-cur.r);
    const double f0 = cur.r.norm();
    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 12; ++ls, step *= 0.5) {
      try {
        Eval cand = evaluate(x + step * dx);
        if (cand.r.norm() <= (1.0 - 1e-4 * step) * f0) {
          x += step * dx;
          cur = std::move(cand);
          accepted = true;
          break;
        }
      } catch (const Error&) {
        // outside the admissible domain or geometry failure: damp further
      }
    }
    if (!accepted) {
      // below tol the iteration has only been polishing; quadrature noise ends it
      if (cur.fit.residual < opts.tol) return {cur.curve, *aopts.frame, cur.fit, trace};
      trace.push_back({iter, cur.fit.residual, cur.r.norm(), 0.0, cond, cur.fit.label.in_R});
      throw NewtonFailure(ErrorKind::Divergence, "newton_refine: line search failed", trace);
    }
    trace.push_back({iter, cur.fit.residual, cur.r.norm(), step, cond, cur.fit.label.in_R});
    if (cur.fit.residual < kPolish * opts.tol) return {cur.curve, *aopts.frame, cur.fit, trace};
  }
  if (cur.fit.residual < opts.tol) return {cur.curve, *aopts.frame, cur.fit, trace};
  std::ostringstream os;
  os << "newton_refine: no convergence in " << opts.max_iter << " iterations (residual " << cur.fit.residual << ")";
  throw NewtonFailure(ErrorKind::Divergence, os.str(), trace);
}

TorusCertificate certify(const SpectralCurve& c, cplx lambda1, cplx lambda2, const IntVec& m1, const IntVec& m2,
                         const QuadratureConfig& cfg, double threshold, std::uint64_t seed,
                         std::optional<SheetFrame> frame) {
  cfg.validate();
  AtlasOptions aopts;
  aopts.frame = frame ? *frame : default_sheet_frame(c);
  const PlaneFit fit = fit_to_targets(c, lambda1, lambda2, m1, m2, cfg, aopts);
  QuadratureConfig doubled = cfg;
  doubled.base_nodes *= 2;
  const PlaneFit fit2 = fit_to_targets(c, lambda1, lambda2, m1, m2, doubled, aopts);
  TorusCertificate cert;
  cert.curve = c;
  cert.lambda1 = lambda1;
  cert.lambda2 = lambda2;
  cert.m1 = m1;
  cert.m2 = m2;
  cert.frame = *aopts.frame;
  cert.basis = fit.basis;
  cert.residual = fit.residual;
  cert.residual_doubled = fit2.residual;
  cert.threshold = threshold;
  cert.quadrature = cfg;
  cert.seed = seed;
  cert.label = fit.label;
  if (!(fit.residual < threshold) || !(fit2.residual < threshold) || fit2.residual > 2.0 * fit.residual + 1e-10) {
    std::ostringstream os;
    os << "certificate revoked: residual " << fit.residual << ", at doubled quadrature " << fit2.residual
       << " (threshold " << threshold << ")";
    throw Error(ErrorKind::Revoked, os.str());
  }
  return cert;
}

std::vector<cplx> sample_roots(int g, std::uint64_t seed, std::uint64_t stream, double min_separation) {
  if (g < 0) throw Error(ErrorKind::Domain, "sample_roots: negative genus");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 gen(seq);
  auto unit = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  for (;;) {
    std::vector<cplx> e;
    for (int j = 0; j < g; ++j) {
      const double r = std::sqrt(0.04 + 0.6 * unit());
      const double th = 2.0 * std::numbers::pi * unit();
      e.push_back(std::polar(r, th));
    }
    bool ok = true;
    for (std::size_t i = 0; i < e.size() && ok; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (std::abs(e[i] - e[j]) < min_separation) ok = false;
    if (ok) return e;
  }
}

SearchResult search_torus(const SearchOptions& opts) {
  SearchResult res;
  for (int k = 0; k < opts.max_attempts; ++k) {
    SearchAttempt att;
    att.index = k;
    att.etas = (k == 0 && !opts.start.empty()) ? opts.start : sample_roots(opts.genus, opts.seed, static_cast<std::uint64_t>(k));
    try {
      const SpectralCurve c = SpectralCurve::from_roots(att.etas);
      const HomologyAtlas atlas = full_atlas(c, opts.lambda1, opts.lambda2);
      const PlaneFrame frame = grassmann_plane(c, opts.lambda1, opts.lambda2, atlas, opts.newton.cfg);
      if (!classify(c, frame.basis).in_R) {
        att.outcome = "not in R";
        res.attempts.push_back(att);
        continue;
      }
      const RationalPlane rp = nearest_rational_plane(frame, opts.Q);
      att.plane_distance = rp.distance;
      if (rp.distance > opts.max_plane_distance) {
        att.outcome = "plane too far";
        res.attempts.push_back(att);
        continue;
      }
      const NewtonResult nr = newton_refine(c, opts.lambda1, opts.lambda2, rp.m1, rp.m2, opts.newton);
      att.iterations = static_cast<int>(nr.trace.size()) - 1;
      res.certificate = certify(nr.curve, opts.lambda1, opts.lambda2, rp.m1, rp.m2, opts.newton.cfg, opts.newton.tol, opts.seed,
                                   nr.frame);
      att.outcome = "certified";
      res.attempts.push_back(att);
      return res;
    } catch (const NewtonFailure& e) {
      att.iterations = static_cast<int>(e.trace().size()) - 1;
      att.outcome = std::string(to_string(e.kind())) + ": " + e.what();
    } catch (const Error& e) {
      att.outcome = std::string(to_string(e.kind())) + ": " + e.what();
    }
    res.attempts.push_back(att);
  }
  return res;
}

std::vector<DensityRow> density_scan(const DensityOptions& opts) {
  opts.cfg.validate();
  std::vector<DensityRow> rows(static_cast<std::size_t>(std::max(0, opts.samples)));
  parallel_for(rows.size(), opts.threads, [&](std::size_t i) {
    DensityRow& row = rows[i];
    row.index = static_cast<int>(i);
    for (int attempt = 0; attempt <= opts.max_resamples; ++attempt) {
      row.resamples = attempt;
      row.etas = sample_roots(opts.genus, opts.seed, static_cast<std::uint64_t>(i) * 1024 + static_cast<std::uint64_t>(attempt));
      try {
        const SpectralCurve c = SpectralCurve::from_roots(row.etas);
        const HomologyAtlas atlas = full_atlas(c, opts.lambda1, opts.lambda2);
        const AtlasMoments mom = atlas_moments(c, atlas, opts.cfg);
        const BBasis basis = compute_b_basis(c, mom);
        const ClassLabel lab = classify(c, basis);
        row.in_R = lab.in_R;
        row.in_S = lab.in_S;
        row.residue_sum = lab.residue_sum;
        row.discriminant_scaled = lab.discriminant_scaled;
        row.distances.clear();
        if (opts.with_planes) {
          const PeriodVector p1 = phi_vector(mom, basis.b1), p2 = phi_vector(mom, basis.b2);
          const PlaneFrame f = plane_from_phi(p1.entries, p2.entries, basis);
          for (const int Q : opts.Q_list) row.distances.push_back(nearest_rational_plane(f, Q).distance);
        }
        row.error.clear();
        return;
      } catch (const Error& e) {
        row.error = std::string(to_string(e.kind())) + ": " + e.what();
      }
    }
  });
  return rows;
}

namespace {

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

DensitySummary summarize(const std::vector<DensityRow>& rows, const std::vector<int>& Q_list) {
  DensitySummary s;
  s.Q = Q_list;
  int ok = 0, inr = 0;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      ++s.failures;
      continue;
    }
    ++ok;
    inr += r.in_R ? 1 : 0;
  }
  s.r_fraction = ok > 0 ? static_cast<double>(inr) / ok : 0.0;
  for (std::size_t q = 0; q < Q_list.size(); ++q) {
    std::vector<double> d;
    for (const auto& r : rows)
      if (r.error.empty() && q < r.distances.size()) d.push_back(r.distances[q]);
    s.median.push_back(quantile(d, 0.5));
    s.q10.push_back(quantile(d, 0.1));
    s.q90.push_back(quantile(d, 0.9));
  }
  return s;
}

}  // namespace sgspec
