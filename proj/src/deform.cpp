#include "sgspec/deform.hpp"

#include "sgspec/errors.hpp"
#include "sgspec/parallel.hpp"

#include <cmath>
#include <sstream>

namespace sgspec {

namespace {

const cplx kI(0, 1);

}  // namespace

SpectralCurve attach_handle(const SpectralCurve& c, cplx alpha, double t) {
  if (std::abs(std::abs(alpha) - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "handle point alpha = " << alpha << " is not on the unit circle";
    throw Error(ErrorKind::Domain, os.str());
  }
  if (t == 0.0) throw Error(ErrorKind::DoublePoint, "t = 0 gives a curve with a double point at alpha");
  if (!std::isfinite(t)) throw Error(ErrorKind::Domain, "t must be finite");
  const cplx eta = alpha * std::exp(-std::abs(t));
  for (const cplx& e : c.etas())
    if (std::abs(e - eta) <= 1e-8) {
      std::ostringstream os;
      os << "new root " << eta << " collides with existing root " << e;
      throw Error(ErrorKind::Degeneracy, os.str());
    }
  std::vector<cplx> etas = c.etas();
  etas.push_back(eta);
  return SpectralCurve::from_roots(std::move(etas));
}

HandleFamily make_handle_family(const SpectralCurve& base, const BBasis& base_basis, cplx alpha,
                                std::vector<double> t_values, bool principal_sqrt) {
  HandleFamily fam{base, base_basis, alpha, std::sqrt(std::conj(alpha)), principal_sqrt, std::move(t_values), {}, {}};
  if (!principal_sqrt) fam.sqrt_alpha_bar = -fam.sqrt_alpha_bar;
  for (double t : fam.t_values) fam.curves.push_back(attach_handle(base, alpha, t));
  return fam;
}

CPoly handle_limit_polynomial(const HandleFamily& fam, const CPoly& b) {
  return (kI * fam.sqrt_alpha_bar) * (CPoly{-fam.alpha, 1.0} * b);
}

CPoly literal_frame(const CPoly& b) { return -kI * b; }

std::vector<BBasis> deform_b_family(HandleFamily& fam, const QuadratureConfig& cfg, unsigned threads) {
  const std::size_t n = fam.curves.size();
  const cplx factor = -kI * fam.alpha * fam.sqrt_alpha_bar;
  const std::array<cplx, 2> targets{factor * fam.base_basis.b1(0.0), factor * fam.base_basis.b2(0.0)};
  std::vector<std::optional<BBasis>> out(n);
  std::vector<std::string> errors(n);

  parallel_for(n, threads, [&](std::size_t k) {
    try {
      const SpectralCurve& c = fam.curves[k];
      const AtlasMoments mom = atlas_moments(c, adapted_homology(c), cfg);
      const BBasis raw = compute_b_basis(c, mom);
      const cplx p = raw.b1(0.0), q = raw.b2(0.0);
      const double det = p.real() * q.imag() - q.real() * p.imag();
      if (!(std::abs(det) > 1e-12 * std::abs(p) * std::abs(q))) {
        errors[k] = "evaluation at 0 is singular on the B-space";
        return;
      }
      std::array<CPoly, 2> sol;
      for (int i = 0; i < 2; ++i) {
        const cplx t = targets[i];
        const double u = (t.real() * q.imag() - q.real() * t.imag()) / det;
        const double v = (p.real() * t.imag() - t.real() * p.imag()) / det;
        sol[i] = u * raw.b1 + v * raw.b2;
      }
      BBasis b;
      b.b1 = sol[0];
      b.b2 = sol[1];
      b.gram = coefficient_gram(b.b1, b.b2);
      for (const CPoly* x : {&b.b1, &b.b2})
        for (const cplx& ap : a_periods(mom, *x)) b.a_period_residual = std::max(b.a_period_residual, std::abs(ap));
      out[k] = std::move(b);
    } catch (const Error& e) {
      errors[k] = e.what();
    }
  });

  std::ostringstream fail;
  double smallest_ok = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k)
    if (out[k]) smallest_ok = std::min(smallest_ok, std::abs(fam.t_values[k]));
  bool failed = false;
  for (std::size_t k = 0; k < n; ++k)
    if (!out[k]) {
      if (!failed) fail << "B-space family degenerates:";
      failed = true;
      fail << " t=" << fam.t_values[k] << " (" << errors[k] << ")";
    }
  if (failed) {
    if (std::isfinite(smallest_ok)) fail << "; smallest admissible t = " << smallest_ok;
    throw Error(ErrorKind::Rank, fail.str());
  }
  fam.bases.clear();
  for (auto& b : out) fam.bases.push_back(std::move(*b));
  return fam.bases;
}

FDegreeReport track_f_degree(const HandleFamily& fam) {
  const CPoly& b1 = fam.base_basis.b1;
  const CPoly& b2 = fam.base_basis.b2;
  if (normalized_resultant(b1, b2) < 1e-8)
    throw Error(ErrorKind::Precondition, "base basis has a common root (curve in S)");
  const CPoly w = wronskian(b1, b2);
  if (std::abs(w(fam.alpha)) <= 1e-8 * w.norm2()) {
    std::ostringstream os;
    os << "df is singular at alpha = " << fam.alpha << " (|W(alpha)| = " << std::abs(w(fam.alpha)) << ")";
    throw Error(ErrorKind::Precondition, os.str());
  }
  if (fam.bases.size() != fam.curves.size())
    throw Error(ErrorKind::Precondition, "family bases not computed");

  FDegreeReport rep;
  rep.base_degree = f_degree(b1, b2);
  rep.base_df_roots = w.degree() > 0 ? root_values(w) : std::vector<cplx>{};
  for (std::size_t k = 0; k < fam.bases.size(); ++k) {
    FDegreeRow row;
    row.t = fam.t_values[k];
    row.degree_f = f_degree(fam.bases[k].b1, fam.bases[k].b2);
    const CPoly wt = wronskian(fam.bases[k].b1, fam.bases[k].b2);
    row.df_roots = wt.degree() > 0 ? root_values(wt) : std::vector<cplx>{};
    std::vector<bool> used(row.df_roots.size(), false);
    for (const cplx& r : rep.base_df_roots) {
      std::size_t best = row.df_roots.size();
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < row.df_roots.size(); ++j)
        if (!used[j] && std::abs(row.df_roots[j] - r) < bd) {
          bd = std::abs(row.df_roots[j] - r);
          best = j;
        }
      if (best < used.size()) used[best] = true;
    }
    for (std::size_t j = 0; j < row.df_roots.size(); ++j)
      if (!used[j]) {
        row.new_roots.push_back(row.df_roots[j]);
        row.max_circle_deviation = std::max(row.max_circle_deviation, std::abs(std::abs(row.df_roots[j]) - 1.0));
      }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

cplx extrapolate_to_zero(const std::vector<double>& x, const std::vector<cplx>& y) {
  std::vector<cplx> p = y;
  const std::size_t n = x.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i)
      p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
  return n ? p[0] : cplx{};
}

LimitReport handle_limit_check(const HandleFamily& fam, double tolerance) {
  const CPoly& b1 = fam.base_basis.b1;
  const CPoly& b2 = fam.base_basis.b2;
  if (std::abs(b1(fam.alpha)) > 1e-10 * b1.norm2()) {
    std::ostringstream os;
    os << "base basis is not aligned at alpha: b1(alpha) = " << b1(fam.alpha);
    throw Error(ErrorKind::Precondition, os.str());
  }
  if (fam.bases.size() != fam.curves.size() || fam.curves.empty())
    throw Error(ErrorKind::Precondition, "family bases not computed");

  LimitReport rep;
  rep.tolerance = tolerance;
  rep.t_values = fam.t_values;
  const CPoly& a = fam.base.a();
  rep.base_sum = residue_sum(a, b1, b2);
  rep.residue_at_alpha = a(fam.alpha) / (b1.derivative()(fam.alpha) * b2(fam.alpha));
  rep.target = rep.base_sum - 2.0 * rep.residue_at_alpha;
  for (std::size_t k = 0; k < fam.curves.size(); ++k)
    rep.residue_sums.push_back(residue_sum(fam.curves[k].a(), fam.bases[k].b1, fam.bases[k].b2));
  rep.extrapolated = extrapolate_to_zero(rep.t_values, rep.residue_sums);
  rep.error = std::abs(rep.extrapolated - rep.target);
  for (std::size_t k = 0; k + 2 < rep.residue_sums.size(); ++k) {
    const double d0 = std::abs(rep.residue_sums[k] - rep.residue_sums[k + 1]);
    const double d1 = std::abs(rep.residue_sums[k + 1] - rep.residue_sums[k + 2]);
    const double ratio = rep.t_values[k] / rep.t_values[k + 1];
    rep.observed_orders.push_back(std::log(d0 / d1) / std::log(ratio));
  }
  rep.passed = rep.error <= tolerance;
  return rep;
}

}  // namespace sgspec
