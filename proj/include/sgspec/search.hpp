#pragma once

// The rational-plane criterion: the image plane of phi, its nearest rational
// planes, Newton refinement of the roots onto a rational plane, torus
// certificates and Monte-Carlo density scans.

#include "sgspec/errors.hpp"
#include "sgspec/invariants.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sgspec {

using IntVec = std::vector<long long>;

struct PlaneFrame {
  std::vector<double> v1, v2;    // orthonormal, spanning phi(B)
  BBasis basis;                  // the basis the frame was computed from
  std::vector<double> phi1, phi2;
  double residual_imag = 0.0;
};

/// Orthonormalize phi(b1), phi(b2). Throws Rank when they are dependent.
PlaneFrame plane_from_phi(const std::vector<double>& phi1, const std::vector<double>& phi2, const BBasis& basis);

/// Frame of phi(B) for the curve; gamma paths are attached when missing.
PlaneFrame grassmann_plane(const SpectralCurve& c, cplx lambda1, cplx lambda2, const HomologyAtlas& atlas,
                           const QuadratureConfig& cfg);

/// Sine of the largest principal angle between span(u1, u2) and span(w1, w2).
double plane_distance(const std::vector<double>& u1, const std::vector<double>& u2, const std::vector<double>& w1,
                      const std::vector<double>& w2);

struct RationalPlane {
  IntVec m1, m2;
  double distance = 0.0;
  int Q = 0;
  std::size_t candidates = 0;
  int exhaustive_bound = 0;  // entries up to this bound were enumerated completely
};

struct RationalSearchOptions {
  int exhaustive_min = 8;              // always enumerate completely up to this bound
  double exhaustive_budget = 3e7;      // and further while (2Q+1)^n stays below this
  bool lattice_candidates = true;
};

/// Closest plane spanned by two primitive integer vectors with entries
/// bounded by Q, over a candidate set that grows with Q: all primitive
/// vectors up to the exhaustive bound plus short vectors of LLL-reduced
/// simultaneous-approximation lattices. The returned distance is therefore
/// non-increasing in Q.
RationalPlane nearest_rational_plane(const PlaneFrame& p, int Q, const RationalSearchOptions& opts = {});

/// LLL reduction (delta = 0.99) of the columns of a real basis; returns
/// the unimodular integer transform U with reduced = basis * U.
std::vector<IntVec> lll_reduce(std::vector<std::vector<double>>& columns, double delta = 0.99);

struct NewtonOptions {
  double tol = 1e-8;
  int max_iter = 30;
  double fd_scale = 1e-6;
  double cond_max = 1e10;
  QuadratureConfig cfg;
  std::optional<SheetFrame> frame;  // default: the start curve's frame, pinned for the run
};

struct NewtonStep {
  int iter = 0;
  double residual = 0.0;   // max |F G - M|
  double norm = 0.0;       // |N^T F G|_2
  double step = 0.0;       // accepted damping factor
  double cond = 0.0;       // Jacobian condition number
  bool in_R = false;
};

struct PlaneFit {
  BBasis basis;                    // b1, b2 re-fitted so phi(b_i) ~ m_i
  std::vector<double> phi1, phi2;  // phi of the fitted basis
  double residual = 0.0;           // max |phi(b_i) - m_i|
  double residual_imag = 0.0;
  ClassLabel label;
};

/// Least-squares fit of the B-space basis to the integer targets.
PlaneFit fit_to_targets(const SpectralCurve& c, cplx lambda1, cplx lambda2, const IntVec& m1, const IntVec& m2,
                        const QuadratureConfig& cfg, const AtlasOptions& atlas = {});

struct NewtonResult {
  SpectralCurve curve;
  SheetFrame frame;  // the pinned sheet convention the periods refer to
  PlaneFit fit;
  std::vector<NewtonStep> trace;
};

class NewtonFailure : public Error {
 public:
  NewtonFailure(ErrorKind kind, const std::string& what, std::vector<NewtonStep> trace)
      : Error(kind, what), trace_(std::move(trace)) {}
  const std::vector<NewtonStep>& trace() const noexcept { return trace_; }

 private:
  std::vector<NewtonStep> trace_;
};

/// Damped Newton iteration in the 2g real root parameters driving
/// span(phi(B)) onto span(m1, m2). Iterates toward 1e-3 tol while steps
/// still reduce the residual; success means residual < tol. Throws NewtonFailure (IllConditioned
/// or Divergence) with the iteration trace.
NewtonResult newton_refine(const SpectralCurve& c0, cplx lambda1, cplx lambda2, const IntVec& m1, const IntVec& m2,
                           const NewtonOptions& opts = {});

struct TorusCertificate {
  SpectralCurve curve = SpectralCurve::from_roots({});
  cplx lambda1{}, lambda2{};
  IntVec m1, m2;
  SheetFrame frame;  // sheet convention: phi entries flip sign with it
  BBasis basis;
  double residual = 0.0;
  double residual_doubled = 0.0;
  double threshold = 1e-8;
  QuadratureConfig quadrature;
  std::uint64_t seed = 0;
  ClassLabel label;
};

/// Throws Revoked when the residual exceeds the threshold at cfg or at
/// doubled base_nodes, or grows by more than 2x (plus 1e-10) on doubling.
/// Without a frame the curve's default sheet frame is used.
TorusCertificate certify(const SpectralCurve& c, cplx lambda1, cplx lambda2, const IntVec& m1, const IntVec& m2,
                         const QuadratureConfig& cfg = {}, double threshold = 1e-8, std::uint64_t seed = 0,
                         std::optional<SheetFrame> frame = std::nullopt);

struct SearchOptions {
  int genus = 1;
  cplx lambda1{0.0, 1.0}, lambda2{0.0, -1.0};
  int Q = 8;
  std::uint64_t seed = 1;
  std::vector<cplx> start;  // roots of the first attempt; sampled when empty
  int max_attempts = 12;
  double max_plane_distance = 0.05;
  NewtonOptions newton;
};

struct SearchAttempt {
  int index = 0;
  std::vector<cplx> etas;
  double plane_distance = -1.0;
  int iterations = 0;
  std::string outcome;
};

struct SearchResult {
  std::optional<TorusCertificate> certificate;
  std::vector<SearchAttempt> attempts;
};

/// sample -> classify -> nearest rational plane -> Newton -> certify, over
/// successive seeded samples until a certificate is produced.
SearchResult search_torus(const SearchOptions& opts);

/// Random roots, area-uniform in the annulus 0.2 <= |eta| <= 0.8, with
/// pairwise distance at least min_separation; deterministic in (seed, stream).
std::vector<cplx> sample_roots(int g, std::uint64_t seed, std::uint64_t stream, double min_separation = 0.05);

struct DensityRow {
  int index = 0;
  std::vector<cplx> etas;
  int resamples = 0;
  bool in_R = false;
  bool in_S = false;
  cplx residue_sum{};
  double discriminant_scaled = 0.0;
  std::vector<double> distances;  // per Q
  std::string error;
};

struct DensitySummary {
  std::vector<int> Q;
  std::vector<double> median, q10, q90;
  double r_fraction = 0.0;
  int failures = 0;
};

struct DensityOptions {
  int genus = 1;
  cplx lambda1{0.0, 1.0}, lambda2{0.0, -1.0};
  int samples = 100;
  std::vector<int> Q_list{4, 8, 16, 32};
  std::uint64_t seed = 1;
  unsigned threads = 0;
  int max_resamples = 20;
  QuadratureConfig cfg;
  bool with_planes = true;  // false: classification only
};

std::vector<DensityRow> density_scan(const DensityOptions& opts);
DensitySummary summarize(const std::vector<DensityRow>& rows, const std::vector<int>& Q_list);

}  // namespace sgspec
