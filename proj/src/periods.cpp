#include "sgspec/periods.hpp"

#include "sgspec/errors.hpp"
#include "sgspec/kernels.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sgspec {

namespace {

constexpr int kRule = 16;

struct Rule {
  std::array<double, kRule> x{}, w{};
};

// Full 16-point Gauss-Legendre rule on [-1, 1], nodes ascending.
const Rule& gauss_rule() {
  static const Rule rule = [] {
    using G = boost::math::quadrature::gauss<double, kRule>;
    const auto& ax = G::abscissa();
    const auto& wt = G::weights();
    Rule r;
    const int h = kRule / 2;
    for (int i = 0; i < h; ++i) {
      r.x[h - 1 - i] = -ax[i];
      r.w[h - 1 - i] = wt[i];
      r.x[h + i] = ax[i];
      r.w[h + i] = wt[i];
    }
    return r;
  }();
  return rule;
}

struct Panel {
  int piece;
  double s0, s1;
};

void split_panel(const PathPiece& piece, int index, double s0, double s1, const std::vector<cplx>& sing,
                 int depth, std::vector<Panel>& out) {
  const double len = piece.length() * (s1 - s0);
  const cplx mid = piece.at(0.5 * (s0 + s1));
  double d = std::numeric_limits<double>::infinity();
  for (const cplx& p : sing) d = std::min(d, std::abs(mid - p));
  d -= 0.5 * len;
  if (len > d && depth < 40) {
    const double sm = 0.5 * (s0 + s1);
    split_panel(piece, index, s0, sm, sing, depth + 1, out);
    split_panel(piece, index, sm, s1, sing, depth + 1, out);
    return;
  }
  out.push_back({index, s0, s1});
}

std::vector<Panel> base_panels(const Contour& k, const std::vector<cplx>& sing, int base_nodes) {
  double total = 0.0;
  for (const auto& p : k.pieces) total += p.length();
  const int budget = std::max(1, base_nodes / kRule);
  std::vector<Panel> out;
  for (std::size_t i = 0; i < k.pieces.size(); ++i) {
    const auto& piece = k.pieces[i];
    if (piece.length() == 0.0) continue;
    const int n = std::max(1, static_cast<int>(std::ceil(budget * piece.length() / total)));
    for (int j = 0; j < n; ++j)
      split_panel(piece, static_cast<int>(i), static_cast<double>(j) / n, static_cast<double>(j + 1) / n, sing, 0,
                  out);
  }
  return out;
}

struct LevelResult {
  std::vector<cplx> moments;
  std::vector<double> scale;
  int nodes = 0;
  int end_sheet = 1;
};

LevelResult integrate_level(const SpectralCurve& c, const Contour& k, const std::vector<Panel>& panels, int level,
                            int n_moments) {
  const Rule& rule = gauss_rule();
  const int sub = 1 << level;
  const std::size_t n = panels.size() * sub * kRule;
  std::vector<double> xr(n), xi(n), tr(n), ti(n);
  std::size_t idx = 0;
  for (const Panel& p : panels) {
    const auto& piece = k.pieces[p.piece];
    const double ds = (p.s1 - p.s0) / sub;
    for (int q = 0; q < sub; ++q) {
      const double a = p.s0 + q * ds;
      for (int r = 0; r < kRule; ++r) {
        const double s = a + 0.5 * ds * (rule.x[r] + 1.0);
        const cplx z = piece.at(s);
        const cplx t = piece.tangent(s) * (0.5 * ds * rule.w[r]);
        xr[idx] = z.real();
        xi[idx] = z.imag();
        tr[idx] = t.real();
        ti[idx] = t.imag();
        ++idx;
      }
    }
  }

  std::vector<double> vr(n), vi(n);
  const auto& la = c.lambda_a().coeffs();
  kernels::eval_poly(la, xr, xi, vr, vi);

  const auto sing = c.finite_branch_points();
  const double delta = c.margin();
  std::vector<double> hr(n), hi(n), habs(n), xabs(n), zeros(n, 0.0);
  cplx prev = k.y_start;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx z(xr[i], xi[i]);
    for (const cplx& p : sing)
      if (std::abs(z - p) < delta) {
        std::ostringstream os;
        os << k.label << ": quadrature node " << z << " within " << delta << " of branch point " << p;
        throw Error(ErrorKind::Proximity, os.str());
      }
    const cplx w = std::sqrt(cplx(vr[i], vi[i]));
    const double dp = std::abs(prev - w), dm = std::abs(prev + w);
    if (std::min(dp, dm) > 0.5 * std::max(dp, dm)) {
      std::ostringstream os;
      os << k.label << ": nodes too sparse to continue y near " << z;
      throw Error(ErrorKind::Refinement, os.str());
    }
    prev = dp <= dm ? w : -w;
    const cplx h = cplx(tr[i], ti[i]) / (prev * z);
    hr[i] = h.real();
    hi[i] = h.imag();
    habs[i] = std::abs(h);
    xabs[i] = std::abs(z);
  }

  LevelResult out;
  out.nodes = static_cast<int>(n);
  out.moments.assign(n_moments, 0.0);
  std::vector<cplx> sc(n_moments);
  kernels::weighted_moments(hr, hi, xr, xi, out.moments);
  kernels::weighted_moments(habs, zeros, xabs, zeros, sc);
  out.scale.resize(n_moments);
  for (int m = 0; m < n_moments; ++m) out.scale[m] = sc[m].real();

  const cplx we = std::sqrt(c.lambda_a()(k.end()));
  const cplx yend = std::abs(prev - we) <= std::abs(prev + we) ? we : -we;
  out.end_sheet = std::abs(yend - k.y_start) <= std::abs(yend + k.y_start) ? 1 : -1;
  return out;
}

}  // namespace

void QuadratureConfig::validate() const {
  if (base_nodes < 16) throw Error(ErrorKind::Domain, "base_nodes must be at least 16");
  if (max_refinements < 1) throw Error(ErrorKind::Domain, "max_refinements must be at least 1");
  if (!(rel_tol > 0.0)) throw Error(ErrorKind::Domain, "rel_tol must be positive");
}

cplx ContourMoments::apply(const CPoly& b) const {
  if (b.degree() >= static_cast<int>(moments.size()))
    throw Error(ErrorKind::DegreeOverflow, "polynomial degree exceeds the available moments");
  cplx s = 0.0;
  for (int m = 0; m <= b.degree(); ++m) s += b[m] * moments[m];
  return s;
}

ContourMoments contour_moments(const SpectralCurve& c, const Contour& contour, int n_moments,
                               const QuadratureConfig& cfg) {
  cfg.validate();
  const auto panels = base_panels(contour, c.finite_branch_points(), cfg.base_nodes);
  LevelResult prev = integrate_level(c, contour, panels, 0, n_moments);
  double change = 0.0;
  for (int level = 1; level <= cfg.max_refinements; ++level) {
    LevelResult cur = integrate_level(c, contour, panels, level, n_moments);
    change = 0.0;
    for (int m = 0; m < n_moments; ++m) {
      const double s = std::max(cur.scale[m], std::numeric_limits<double>::min());
      change = std::max(change, std::abs(cur.moments[m] - prev.moments[m]) / s);
    }
    if (change <= cfg.rel_tol) {
      ContourMoments out;
      out.moments = std::move(cur.moments);
      out.scale = std::move(cur.scale);
      out.level = level;
      out.nodes = cur.nodes;
      out.change = change;
      out.end_sheet = cur.end_sheet;
      return out;
    }
    prev = std::move(cur);
  }
  std::ostringstream os;
  os << contour.label << ": quadrature not converged after " << cfg.max_refinements
     << " refinements (relative change " << change << ")";
  throw AccuracyError(os.str(), prev.moments);
}

cplx integrate_theta(const SpectralCurve& c, const CPoly& b, const Contour& contour, const QuadratureConfig& cfg) {
  if (b.is_zero()) return 0.0;
  return contour_moments(c, contour, b.degree() + 1, cfg).apply(b);
}

AtlasMoments atlas_moments(const SpectralCurve& c, const HomologyAtlas& atlas, const QuadratureConfig& cfg,
                           int n_moments) {
  if (n_moments < 0) n_moments = c.genus() + 2;
  AtlasMoments m;
  for (const auto& k : atlas.a_cycles) m.a.push_back(contour_moments(c, k, n_moments, cfg));
  for (const auto& k : atlas.b_cycles) m.b.push_back(contour_moments(c, k, n_moments, cfg));
  for (const auto& k : atlas.gammas) m.gamma.push_back(contour_moments(c, k, n_moments, cfg));
  return m;
}

std::vector<cplx> a_periods(const AtlasMoments& m, const CPoly& b) {
  std::vector<cplx> out;
  for (const auto& a : m.a) out.push_back(a.apply(b));
  return out;
}

std::vector<cplx> a_periods(const SpectralCurve& c, const CPoly& b, const HomologyAtlas& atlas,
                            const QuadratureConfig& cfg) {
  std::vector<cplx> out;
  for (const auto& k : atlas.a_cycles) out.push_back(integrate_theta(c, b, k, cfg));
  return out;
}

PeriodVector phi_vector(const AtlasMoments& m, const CPoly& b, bool check_a_periods) {
  if (check_a_periods) {
    const double tol = kAPeriodTol * std::max(1.0, b.norm2());
    const auto ap = a_periods(m, b);
    for (std::size_t j = 0; j < ap.size(); ++j)
      if (std::abs(ap[j]) > tol) {
        std::ostringstream os;
        os << "A" << j + 1 << "-period " << ap[j] << " does not vanish (tolerance " << tol << ")";
        throw Error(ErrorKind::Precondition, os.str());
      }
  }
  if (m.gamma.size() != 2) throw Error(ErrorKind::Precondition, "atlas has no gamma paths");
  PeriodVector pv;
  for (const auto& k : m.b) pv.raw.push_back(k.apply(b));
  for (const auto& k : m.gamma) pv.raw.push_back(k.apply(b));
  const cplx two_pi_i(0.0, 2 * std::numbers::pi);
  for (const cplx& r : pv.raw) {
    const cplx e = r / two_pi_i;
    pv.entries.push_back(e.real());
    pv.residual_imag = std::max(pv.residual_imag, std::abs(e.imag()));
  }
  return pv;
}

PeriodVector phi_vector(const SpectralCurve& c, const CPoly& b, cplx lambda1, cplx lambda2,
                        const HomologyAtlas& atlas, const QuadratureConfig& cfg) {
  HomologyAtlas at = atlas;
  if (at.gammas.empty()) {
    at.gammas = gamma_paths(c, lambda1, lambda2);
    at.sym1 = lambda1;
    at.sym2 = lambda2;
  }
  const int n = std::max(c.genus() + 2, b.degree() + 1);
  return phi_vector(atlas_moments(c, at, cfg, n), b);
}

}  // namespace sgspec
