#pragma once

// Spectral curves y^2 = lambda a(lambda) of finite-type sinh-Gordon
// solutions, branch data, analytic continuation of y and the adapted
// homology atlas used by the period integrals.

#include "sgspec/polyalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sgspec {

/// A point of the Riemann sphere.
struct SpherePoint {
  cplx z{};
  bool at_infinity = false;
  static SpherePoint infinity() { return {cplx{}, true}; }
};

struct CurveValidation {
  bool valid = false;
  double reality_residual = 0.0;     // coeff_distance(star(a, 2g), a)
  double positivity_min = 0.0;       // min over the unit-circle grid of Re(lambda^-g a)
  double positivity_imag = 0.0;      // max |Im(lambda^-g a)| on the same grid
  double lead_modulus_error = 0.0;   // | |lead| - 1 |
  double min_root_separation = 0.0;  // min pairwise distance of the etas
  std::vector<std::string> failures;
};

class SpectralCurve {
 public:
  /// a(lambda) = (-1)^g prod conj(eta)/|eta| (lambda - eta)(lambda - 1/conj(eta)).
  /// Throws Domain for |eta| outside (0,1) and Degeneracy for coincident
  /// roots (pairwise distance <= 1e-8).
  static SpectralCurve from_roots(std::vector<cplx> etas);

  int genus() const noexcept { return static_cast<int>(etas_.size()); }
  const std::vector<cplx>& etas() const noexcept { return etas_; }
  const CPoly& a() const noexcept { return a_; }
  /// lambda * a(lambda)
  const CPoly& lambda_a() const noexcept { return lambda_a_; }
  cplx lead_phase() const noexcept { return a_.leading(); }

  /// 1 / conj(eta_j)
  cplx mirror(int j) const;
  /// 0, then eta_1, mirror_1, eta_2, mirror_2, ...
  std::vector<cplx> finite_branch_points() const;
  /// Safety distance for contours: 1e-2 * min pairwise branch distance.
  double margin() const noexcept { return margin_; }

  /// The canonical sheet over a unit-circle point lambda = e^{i theta},
  /// theta in (-pi, pi]: y = e^{i (g+1) theta / 2} sqrt(lambda^-g a(lambda)).
  /// It is fixed by the antiholomorphic involution rho.
  cplx y_plus(cplx lambda_on_circle) const;

  CurveValidation validate(int grid = 1024) const;

 private:
  SpectralCurve() = default;
  std::vector<cplx> etas_;
  CPoly a_;
  CPoly lambda_a_;
  double margin_ = 1e-2;
};

/// Branch points of y^2 = lambda a(lambda): 0, the 2g roots of a, infinity.
std::vector<SpherePoint> branch_points(const SpectralCurve& c);

/// Continue y along a polyline of lambda values, picking at each point the
/// square root of lambda a(lambda) nearest the previous value.
/// Throws Domain when y_start does not square to lambda_0 a(lambda_0),
/// Proximity when a point is closer than the curve margin to a branch point,
/// and Refinement when consecutive points are too far apart to tell the two
/// roots apart.
std::vector<cplx> y_continue(const SpectralCurve& c, const std::vector<cplx>& path, cplx y_start);

// ---------------------------------------------------------------------------
// Contours

struct PathPiece {
  enum class Kind { Segment, Arc };
  Kind kind = Kind::Segment;
  cplx from{}, to{};                                    // segment
  cplx center{};                                        // arc
  double radius = 0.0, theta0 = 0.0, theta1 = 0.0;      // arc, theta0 -> theta1

  static PathPiece segment(cplx a, cplx b);
  static PathPiece arc(cplx center, double radius, double theta0, double theta1);

  cplx at(double s) const;       // s in [0, 1]
  cplx tangent(double s) const;  // d lambda / d s
  double length() const;
};

/// A piecewise path in the lambda-plane together with the value of y at its
/// first point, which fixes the starting sheet.
struct Contour {
  std::string label;
  std::vector<PathPiece> pieces;
  cplx y_start{};
  bool closed = true;

  cplx start() const { return pieces.front().at(0.0); }
  cplx end() const { return pieces.back().at(1.0); }
  /// Dense polyline sample (n points per piece), including both ends.
  std::vector<cplx> sample(int per_piece = 256) const;
  double min_distance_to(const std::vector<cplx>& points, int per_piece = 512) const;
};

/// Numerical argument principle on a closed contour.
int winding_number(const Contour& contour, cplx point, int per_piece = 512);

/// Sheet convention for contour start points: y is the analytic branch on the
/// plane cut along the segments [eta_j, 1/conj(eta_j)] and the ray from 0 to
/// infinity at cut_angle, signed so that it agrees with y_plus at the unit
/// circle point e^{i ref_angle}.
struct SheetFrame {
  double cut_angle = 0.0;
  double ref_angle = 0.0;
};

SheetFrame default_sheet_frame(const SpectralCurve& c);
cplx sheet_value(const SpectralCurve& c, const SheetFrame& frame, cplx lambda);

enum class GammaRoute { AroundZero, AroundInfinity };

struct AtlasOptions {
  std::optional<SheetFrame> frame;  // pin the sheet convention (Newton runs)
  double max_radius = 0.5;          // cap on stadium half-widths
};

struct HomologyAtlas {
  SheetFrame frame;
  double margin = 0.0;
  std::vector<Contour> a_cycles;
  std::vector<Contour> b_cycles;
  std::vector<Contour> gammas;  // empty until gamma paths are attached
  cplx sym1{}, sym2{};

  // winding[k][p]: winding of contour k (A cycles then B cycles) around the
  // finite branch point p (ordering of SpectralCurve::finite_branch_points).
  std::vector<std::vector<int>> winding;
  // Mod-2 intersection numbers A_j . B_k from shared enclosed branch points.
  std::vector<std::vector<int>> intersections;
};

/// A_j: counterclockwise stadium around the radial segment
/// [eta_j, 1/conj(eta_j)]; B_j: counterclockwise stadium around [0, eta_j].
/// Throws Geometry when a stadium cannot keep the margin from the other
/// branch points.
HomologyAtlas adapted_homology(const SpectralCurve& c, const AtlasOptions& opts = {});

/// gamma_j: from (lambda_j, y_plus) along the ray to a small circle around
/// 0 (or outward to a large circle around infinity), once around, and back;
/// it ends on the other sheet over lambda_j.
std::vector<Contour> gamma_paths(const SpectralCurve& c, cplx lambda1, cplx lambda2,
                                 GammaRoute route = GammaRoute::AroundZero);

/// Atlas with gamma paths attached.
HomologyAtlas full_atlas(const SpectralCurve& c, cplx lambda1, cplx lambda2,
                         const AtlasOptions& opts = {},
                         GammaRoute route = GammaRoute::AroundZero);

}  // namespace sgspec
