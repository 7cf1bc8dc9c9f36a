#include "sgspec/curve.hpp"

#include "sgspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sgspec {

namespace {

constexpr double kPi = std::numbers::pi;

double dist_to_segment(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((p - a) * std::conj(d)).real() / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

double dist_to_ray(cplx p, double angle) {
  const cplx u = std::polar(1.0, angle);
  const double t = std::max(0.0, (p * std::conj(u)).real());
  return std::abs(p - t * u);
}

double wrap_angle(double x) {
  while (x <= -kPi) x += 2 * kPi;
  while (x > kPi) x -= 2 * kPi;
  return x;
}

// Midpoint of the largest circular gap between the given angles.
double widest_gap_midpoint(std::vector<double> angles) {
  for (double& a : angles) a = wrap_angle(a);
  std::sort(angles.begin(), angles.end());
  double best_gap = -1.0, best_mid = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double lo = angles[i];
    const double hi = i + 1 < angles.size() ? angles[i + 1] : angles[0] + 2 * kPi;
    if (hi - lo > best_gap) {
      best_gap = hi - lo;
      best_mid = 0.5 * (lo + hi);
    }
  }
  return wrap_angle(best_mid);
}

// sqrt with its branch cut along the ray at angle psi.
cplx sqrt_cut(cplx z, double psi) {
  const cplx rot = std::polar(1.0, psi - kPi);
  return std::polar(1.0, 0.5 * (psi - kPi)) * std::sqrt(z / rot);
}

// Counterclockwise stadium of half-width r around the segment p -> q. The
// start point is the midpoint of one straight side: the side at -n when
// right_side is set, the side at +n otherwise.
std::vector<PathPiece> stadium(cplx p, cplx q, double r, bool right_side) {
  const cplx u = (q - p) / std::abs(q - p);
  const cplx n = cplx(0, 1) * u;
  const double an = std::arg(n);
  const cplx m = 0.5 * (p + q);
  std::vector<PathPiece> loop = {
      PathPiece::segment(m - r * n, q - r * n),
      PathPiece::arc(q, r, an - kPi, an),
      PathPiece::segment(q + r * n, p + r * n),
      PathPiece::arc(p, r, an, an + kPi),
      PathPiece::segment(p - r * n, m - r * n),
  };
  if (right_side) return loop;
  // Rotate so that the walk starts at the midpoint of the +n side.
  return {
      PathPiece::segment(m + r * n, p + r * n),
      PathPiece::arc(p, r, an, an + kPi),
      PathPiece::segment(p - r * n, q - r * n),
      PathPiece::arc(q, r, an - kPi, an),
      PathPiece::segment(q + r * n, m + r * n),
  };
}

double distance_to_cuts(const SpectralCurve& c, const SheetFrame& f, cplx z) {
  double d = dist_to_ray(z, f.cut_angle);
  for (int j = 0; j < c.genus(); ++j) d = std::min(d, dist_to_segment(z, c.etas()[j], c.mirror(j)));
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// SpectralCurve

SpectralCurve SpectralCurve::from_roots(std::vector<cplx> etas) {
  for (std::size_t j = 0; j < etas.size(); ++j) {
    const double r = std::abs(etas[j]);
    if (!std::isfinite(r) || r <= 0.0 || r >= 1.0) {
      std::ostringstream os;
      os << "eta_" << j + 1 << " = " << etas[j] << " must satisfy 0 < |eta| < 1";
      throw Error(ErrorKind::Domain, os.str());
    }
  }
  for (std::size_t i = 0; i < etas.size(); ++i)
    for (std::size_t j = i + 1; j < etas.size(); ++j)
      if (std::abs(etas[i] - etas[j]) <= 1e-8) {
        std::ostringstream os;
        os << "eta_" << i + 1 << " and eta_" << j + 1 << " coincide (" << etas[i] << ")";
        throw Error(ErrorKind::Degeneracy, os.str());
      }

  SpectralCurve c;
  c.etas_ = std::move(etas);
  const int g = c.genus();
  CPoly a = CPoly::constant(g % 2 == 0 ? 1.0 : -1.0);
  for (const cplx& e : c.etas_) {
    const cplx phase = std::conj(e) / std::abs(e);
    a = a * CPoly{-e * phase, phase} * CPoly{-1.0 / std::conj(e), 1.0};
  }
  // Symmetrize against rounding so the reality condition holds to the last bit.
  std::vector<cplx> s(2 * g + 1);
  for (int k = 0; k <= 2 * g; ++k) s[k] = 0.5 * (a[k] + std::conj(a[2 * g - k]));
  c.a_ = CPoly(std::move(s));
  c.lambda_a_ = c.a_ * CPoly::monomial(1);

  const auto pts = c.finite_branch_points();
  double dmin = 1.0;
  bool any = false;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = std::abs(pts[i] - pts[j]);
      dmin = any ? std::min(dmin, d) : d;
      any = true;
    }
  c.margin_ = 1e-2 * dmin;
  return c;
}

cplx SpectralCurve::mirror(int j) const { return 1.0 / std::conj(etas_.at(j)); }

std::vector<cplx> SpectralCurve::finite_branch_points() const {
  std::vector<cplx> pts{0.0};
  for (int j = 0; j < genus(); ++j) {
    pts.push_back(etas_[j]);
    pts.push_back(mirror(j));
  }
  return pts;
}

cplx SpectralCurve::y_plus(cplx lambda) const {
  double theta = std::arg(lambda);
  if (theta <= -kPi) theta += 2 * kPi;
  const int g = genus();
  const cplx v = a_(lambda) * std::pow(lambda, -g);
  return std::polar(1.0, 0.5 * (g + 1) * theta) * std::sqrt(v);
}

CurveValidation SpectralCurve::validate(int grid) const {
  CurveValidation v;
  const int g = genus();
  v.reality_residual = coeff_distance(star(a_, 2 * g), a_);
  v.lead_modulus_error = std::abs(std::abs(a_.leading()) - 1.0);
  v.positivity_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid; ++k) {
    const cplx l = std::polar(1.0, 2 * kPi * k / grid);
    const cplx w = a_(l) * std::pow(l, -g);
    v.positivity_min = std::min(v.positivity_min, w.real());
    v.positivity_imag = std::max(v.positivity_imag, std::abs(w.imag()));
  }
  v.min_root_separation = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g; ++i)
    for (int j = i + 1; j < g; ++j)
      v.min_root_separation = std::min(v.min_root_separation, std::abs(etas_[i] - etas_[j]));
  if (g < 2) v.min_root_separation = 0.0;

  for (int j = 0; j < g; ++j) {
    const double r = std::abs(etas_[j]);
    if (!(r > 0.0 && r < 1.0)) v.failures.push_back("eta_" + std::to_string(j + 1) + " outside the punctured unit disk");
  }
  if (g >= 2 && v.min_root_separation <= 1e-8) v.failures.push_back("coincident roots");
  if (v.reality_residual > 1e-14) v.failures.push_back("reality condition violated");
  if (!(v.positivity_min > 0.0)) v.failures.push_back("positivity condition violated");
  if (v.positivity_imag > 1e-10 * (1.0 + a_.max_abs_coeff())) v.failures.push_back("lambda^-g a not real on the unit circle");
  if (v.lead_modulus_error > 1e-12) v.failures.push_back("leading coefficient not of unit modulus");
  v.valid = v.failures.empty();
  return v;
}

std::vector<SpherePoint> branch_points(const SpectralCurve& c) {
  std::vector<SpherePoint> out;
  for (const cplx& z : c.finite_branch_points()) out.push_back({z, false});
  out.push_back(SpherePoint::infinity());
  return out;
}

std::vector<cplx> y_continue(const SpectralCurve& c, const std::vector<cplx>& path, cplx y_start) {
  if (path.empty()) return {};
  const auto pts = c.finite_branch_points();
  const double delta = c.margin();
  const CPoly& la = c.lambda_a();
  const cplx v0 = la(path[0]);
  if (std::abs(y_start * y_start - v0) > 1e-8 * (1.0 + std::abs(v0))) {
    std::ostringstream os;
    os << "y_start^2 = " << y_start * y_start << " but lambda a(lambda) = " << v0 << " at " << path[0];
    throw Error(ErrorKind::Domain, os.str());
  }
  std::vector<cplx> out;
  out.reserve(path.size());
  cplx prev = y_start;
  for (std::size_t i = 0; i < path.size(); ++i) {
    for (const cplx& p : pts)
      if (std::abs(path[i] - p) < delta) {
        std::ostringstream os;
        os << "path point " << i << " = " << path[i] << " within " << delta << " of branch point " << p;
        throw Error(ErrorKind::Proximity, os.str());
      }
    const cplx w = std::sqrt(la(path[i]));
    const double dp = std::abs(prev - w), dm = std::abs(prev + w);
    if (std::min(dp, dm) > 0.5 * std::max(dp, dm)) {
      std::ostringstream os;
      os << "step to path point " << i << " too coarse to continue y";
      throw Error(ErrorKind::Refinement, os.str());
    }
    prev = dp <= dm ? w : -w;
    out.push_back(prev);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Path pieces and contours

PathPiece PathPiece::segment(cplx a, cplx b) {
  PathPiece p;
  p.kind = Kind::Segment;
  p.from = a;
  p.to = b;
  return p;
}

PathPiece PathPiece::arc(cplx center, double radius, double theta0, double theta1) {
  PathPiece p;
  p.kind = Kind::Arc;
  p.center = center;
  p.radius = radius;
  p.theta0 = theta0;
  p.theta1 = theta1;
  return p;
}

cplx PathPiece::at(double s) const {
  if (kind == Kind::Segment) return from + s * (to - from);
  return center + std::polar(radius, theta0 + s * (theta1 - theta0));
}

cplx PathPiece::tangent(double s) const {
  if (kind == Kind::Segment) return to - from;
  const double dth = theta1 - theta0;
  return cplx(0, dth) * std::polar(radius, theta0 + s * dth);
}

double PathPiece::length() const {
  if (kind == Kind::Segment) return std::abs(to - from);
  return radius * std::abs(theta1 - theta0);
}

std::vector<cplx> Contour::sample(int per_piece) const {
  std::vector<cplx> out;
  for (const auto& p : pieces)
    for (int k = 0; k < per_piece; ++k) out.push_back(p.at(static_cast<double>(k) / per_piece));
  out.push_back(end());
  return out;
}

double Contour::min_distance_to(const std::vector<cplx>& points, int per_piece) const {
  double d = std::numeric_limits<double>::infinity();
  for (const cplx& z : sample(per_piece))
    for (const cplx& p : points) d = std::min(d, std::abs(z - p));
  return d;
}

int winding_number(const Contour& contour, cplx point, int per_piece) {
  const auto pts = contour.sample(per_piece);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += std::arg((pts[i + 1] - point) / (pts[i] - point));
  return static_cast<int>(std::lround(total / (2 * kPi)));
}

// ---------------------------------------------------------------------------
// Sheet convention

SheetFrame default_sheet_frame(const SpectralCurve& c) {
  if (c.genus() == 0) return {kPi, 0.0};
  std::vector<double> angles;
  for (const cplx& e : c.etas()) angles.push_back(std::arg(e));
  SheetFrame f;
  f.cut_angle = widest_gap_midpoint(angles);
  angles.push_back(f.cut_angle);
  f.ref_angle = widest_gap_midpoint(angles);
  return f;
}

cplx sheet_value(const SpectralCurve& c, const SheetFrame& frame, cplx lambda) {
  const cplx kappa = std::sqrt(c.lead_phase());
  auto raw = [&](cplx z) {
    cplx y = kappa * sqrt_cut(z, frame.cut_angle);
    for (int j = 0; j < c.genus(); ++j) {
      const cplx e = c.etas()[j];
      y *= (z - e) * std::sqrt((z - c.mirror(j)) / (z - e));
    }
    return y;
  };
  const cplx ref = std::polar(1.0, frame.ref_angle);
  const cplx target = c.y_plus(ref);
  const cplx r = raw(ref);
  const double sign = std::abs(r - target) <= std::abs(r + target) ? 1.0 : -1.0;
  return sign * raw(lambda);
}

// ---------------------------------------------------------------------------
// Atlas

namespace {

Contour make_stadium(const SpectralCurve& c, const SheetFrame& frame, cplx p, cplx q,
                     const std::vector<cplx>& others, double max_radius, const std::string& label) {
  double dist = std::numeric_limits<double>::infinity();
  for (const cplx& o : others) dist = std::min(dist, dist_to_segment(o, p, q));
  const double r = std::min(0.5 * dist, max_radius);
  if (!(r >= c.margin())) {
    std::ostringstream os;
    os << label << ": stadium half-width " << r << " below the safety margin " << c.margin()
       << "; the root configuration needs a smaller margin";
    throw Error(ErrorKind::Geometry, os.str());
  }
  const cplx u = (q - p) / std::abs(q - p);
  const cplx n = cplx(0, 1) * u;
  const cplx m = 0.5 * (p + q);
  const bool right = distance_to_cuts(c, frame, m - r * n) >= distance_to_cuts(c, frame, m + r * n);
  Contour k;
  k.label = label;
  k.pieces = stadium(p, q, r, right);
  k.closed = true;
  k.y_start = sheet_value(c, frame, k.start());
  return k;
}

}  // namespace

HomologyAtlas adapted_homology(const SpectralCurve& c, const AtlasOptions& opts) {
  HomologyAtlas at;
  at.frame = opts.frame ? *opts.frame : default_sheet_frame(c);
  at.margin = c.margin();
  const int g = c.genus();
  const auto pts = c.finite_branch_points();

  for (int j = 0; j < g; ++j) {
    std::vector<cplx> others;
    for (std::size_t k = 0; k < pts.size(); ++k)
      if (k != static_cast<std::size_t>(2 * j + 1) && k != static_cast<std::size_t>(2 * j + 2)) others.push_back(pts[k]);
    at.a_cycles.push_back(make_stadium(c, at.frame, c.etas()[j], c.mirror(j), others, opts.max_radius,
                                       "A" + std::to_string(j + 1)));
  }
  for (int j = 0; j < g; ++j) {
    std::vector<cplx> others;
    for (std::size_t k = 1; k < pts.size(); ++k)
      if (k != static_cast<std::size_t>(2 * j + 1)) others.push_back(pts[k]);
    at.b_cycles.push_back(make_stadium(c, at.frame, 0.0, c.etas()[j], others, opts.max_radius,
                                       "B" + std::to_string(j + 1)));
  }

  auto wind_row = [&](const Contour& k) {
    std::vector<int> row;
    for (const cplx& p : pts) row.push_back(winding_number(k, p));
    return row;
  };
  for (const auto& k : at.a_cycles) at.winding.push_back(wind_row(k));
  for (const auto& k : at.b_cycles) at.winding.push_back(wind_row(k));

  for (int j = 0; j < g; ++j) {
    const auto& wa = at.winding[j];
    const int enclosed = std::count_if(wa.begin(), wa.end(), [](int w) { return w != 0; });
    if (wa[0] != 0 || wa[2 * j + 1] != 1 || wa[2 * j + 2] != 1 || enclosed != 2)
      throw Error(ErrorKind::Geometry, "A" + std::to_string(j + 1) + " does not enclose exactly its root pair");
    const auto& wb = at.winding[g + j];
    const int enclosed_b = std::count_if(wb.begin(), wb.end(), [](int w) { return w != 0; });
    if (enclosed_b % 2 != 0)
      throw Error(ErrorKind::Geometry, "B" + std::to_string(j + 1) + " encloses an odd number of branch points");
  }
  at.intersections.assign(g, std::vector<int>(g, 0));
  for (int j = 0; j < g; ++j)
    for (int k = 0; k < g; ++k) {
      int shared = 0;
      for (std::size_t p = 0; p < pts.size(); ++p)
        if (at.winding[j][p] != 0 && at.winding[g + k][p] != 0) ++shared;
      at.intersections[j][k] = shared % 2;
    }
  return at;
}

std::vector<Contour> gamma_paths(const SpectralCurve& c, cplx lambda1, cplx lambda2, GammaRoute route) {
  const std::array<cplx, 2> sym{lambda1, lambda2};
  for (int j = 0; j < 2; ++j)
    if (std::abs(std::abs(sym[j]) - 1.0) > 1e-10) {
      std::ostringstream os;
      os << "Sym point lambda_" << j + 1 << " = " << sym[j] << " is not on the unit circle";
      throw Error(ErrorKind::Domain, os.str());
    }
  if (std::abs(lambda1 - lambda2) < 1e-12) throw Error(ErrorKind::Domain, "Sym points coincide");
  const auto pts = c.finite_branch_points();
  for (int j = 0; j < 2; ++j)
    for (const cplx& p : pts)
      if (std::abs(sym[j] - p) < c.margin()) {
        std::ostringstream os;
        os << "Sym point lambda_" << j + 1 << " lies on branch point " << p;
        throw Error(ErrorKind::Domain, os.str());
      }

  double rmin = 1.0, rmax = 1.0;
  for (int j = 0; j < c.genus(); ++j) {
    rmin = std::min(rmin, std::abs(c.etas()[j]));
    rmax = std::max(rmax, std::abs(c.mirror(j)));
  }
  std::vector<Contour> out;
  for (int j = 0; j < 2; ++j) {
    const double th = std::arg(sym[j]);
    const double rad = route == GammaRoute::AroundZero ? std::min(0.5, 0.5 * rmin) : 2.0 * rmax;
    const cplx turn = std::polar(rad, th);
    Contour k;
    k.label = "gamma" + std::to_string(j + 1);
    k.closed = false;
    k.pieces = {PathPiece::segment(sym[j], turn), PathPiece::arc(0.0, rad, th, th + 2 * kPi),
                PathPiece::segment(turn, sym[j])};
    k.y_start = c.y_plus(sym[j]);
    std::vector<cplx> avoid;
    for (const cplx& p : pts)
      if (route == GammaRoute::AroundInfinity || p != cplx(0.0)) avoid.push_back(p);
    if (!avoid.empty() && k.min_distance_to(avoid) < c.margin())
      throw Error(ErrorKind::Geometry, k.label + " passes within the safety margin of a branch point");
    out.push_back(std::move(k));
  }
  return out;
}

HomologyAtlas full_atlas(const SpectralCurve& c, cplx lambda1, cplx lambda2, const AtlasOptions& opts,
                         GammaRoute route) {
  HomologyAtlas at = adapted_homology(c, opts);
  at.gammas = gamma_paths(c, lambda1, lambda2, route);
  at.sym1 = lambda1;
  at.sym2 = lambda2;
  return at;
}

}  // namespace sgspec
