#include "verify.hpp"

#include "sgspec/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

namespace sgspec::cli {

namespace {

namespace fs = std::filesystem;

const cplx I(0, 1);

Check make(std::string name, double value, double tol, std::string detail = {}) {
  Check c{std::move(name), value, tol, false, std::move(detail)};
  c.passed = std::isfinite(value) && value <= tol;
  return c;
}

Check failed(std::string name, const std::string& why) {
  Check c{std::move(name), std::numeric_limits<double>::infinity(), 0.0, false, why};
  return c;
}

std::vector<fs::path> json_files(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

// Valid fixture curves that are expected to be classifiable.
std::vector<SpectralCurve> fixture_curves(const fs::path& dir) {
  std::vector<SpectralCurve> out;
  for (const auto& p : json_files(dir / "curves")) {
    try {
      const json j = json::parse(read_text_file(p.string()));
      if (j.contains("expect") && j["expect"].value("valid", true) == false) continue;
      const CurveFile f = parse_curve(j.dump(), p.string());
      out.push_back(SpectralCurve::from_roots(f.etas));
    } catch (const std::exception&) {
    }
  }
  return out;
}

void periods_suite(std::vector<Check>& out, const fs::path& dir) {
  {
    const auto c = SpectralCurve::from_roots({});
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const cplx cc(u(rng), u(rng));
      const cplx l1 = std::polar(1.0, std::numbers::pi * u(rng));
      const auto gs = gamma_paths(c, l1, -l1);
      const cplx v = integrate_theta(c, CPoly{cc, std::conj(cc)}, gs[0], {});
      const cplx y = std::polar(1.0, 0.5 * std::arg(l1));
      const cplx ref = -2.0 * (-2.0 * cc / y + 2.0 * std::conj(cc) * y);
      worst = std::max(worst, std::abs(v - ref));
    }
    out.push_back(make("periods.genus0_closed_form", worst, 1e-10));
  }
  double a_imag = 0.0, bg_real = 0.0;
  int rank_fail = 0;
  for (const auto& c : fixture_curves(dir)) {
    try {
      const auto atlas = full_atlas(c, I, std::polar(1.0, 2.0));
      const auto mom = atlas_moments(c, atlas, {});
      const auto P = real_parametrization(c.genus());
      for (const auto& b : P)
        for (const cplx& ap : a_periods(mom, b)) a_imag = std::max(a_imag, std::abs(ap.imag()));
      const BBasis basis = compute_b_basis(c, mom);
      for (const CPoly* b : {&basis.b1, &basis.b2}) bg_real = std::max(bg_real, phi_vector(mom, *b).residual_imag);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Rank) ++rank_fail;
      else out.push_back(failed("periods.fixture_curve", e.what()));
    }
  }
  out.push_back(make("periods.a_period_reality", a_imag, 1e-8));
  out.push_back(make("periods.b_gamma_imaginary", bg_real, 1e-8));
  out.push_back(make("bspace.rank_deficient_curves", rank_fail, 0.0));
}

void invariants_suite(std::vector<Check>& out, const fs::path& dir) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double scaling = 0.0, level = 0.0, bezout = 0.0;
  for (const auto& c : fixture_curves(dir)) {
    try {
      const BBasis basis = compute_b_basis(c, adapted_homology(c), {});
      const ClassLabel lab = classify(c, basis);
      if (lab.in_S) continue;
      const cplx r0 = lab.residue_sum;
      for (int k = 0; k < 10; ++k) {
        const Mat2 m{u(rng), u(rng), u(rng), u(rng)};
        const double det = m[0] * m[3] - m[1] * m[2];
        if (std::abs(det) < 0.1) continue;
        const BBasis bb = mobius_act(basis, m);
        const cplx r = residue_sum(c.a(), bb.b1, bb.b2);
        scaling = std::max(scaling, std::abs(r - r0 / det) / std::abs(r0 / det));
        const cplx p(u(rng), u(rng));
        const cplx ls = level_sum(c.a(), basis.b1, basis.b2, {p, false});
        level = std::max(level, std::abs(ls - r0) / std::max(1.0, std::abs(r0)));
      }
      bezout = std::max(bezout, lab.bezout_residual);
    } catch (const Error& e) {
      out.push_back(failed("invariants.fixture_curve", e.what()));
    }
  }
  out.push_back(make("invariants.mobius_scaling", scaling, 1e-8));
  out.push_back(make("invariants.level_sums", level, 1e-7));
  out.push_back(make("invariants.bezout_residual", bezout, 1e-10));
}

void limit_case(std::vector<Check>& out, const std::string& name, const std::vector<cplx>& etas, cplx alpha) {
  try {
    const auto base = SpectralCurve::from_roots(etas);
    const BBasis basis = so2_align(compute_b_basis(base, adapted_homology(base), {}), alpha);
    HandleFamily fam = make_handle_family(base, basis, alpha, {0.08, 0.04, 0.02, 0.01, 0.005});
    deform_b_family(fam, {});
    const LimitReport rep = handle_limit_check(fam);
    out.push_back(make("limits." + name, rep.error, rep.tolerance));
    const FDegreeReport deg = track_f_degree(fam);
    int worst = 0;
    double circle = 0.0;
    for (const auto& row : deg.rows) {
      worst = std::max(worst, std::abs(row.degree_f - deg.base_degree - 1));
      if (row.t <= 0.01) circle = std::max(circle, row.max_circle_deviation);
    }
    out.push_back(make("limits." + name + ".degree_step", worst, 0.0));
    out.push_back(make("limits." + name + ".new_roots_on_circle", circle, 1e-3));
  } catch (const Error& e) {
    out.push_back(failed("limits." + name, e.what()));
  }
}

void limits_suite(std::vector<Check>& out) {
  limit_case(out, "genus0", {}, 1.0);
  // second rung of the ladder: the genus-1 curve attached at alpha = 1, t = 0.3
  limit_case(out, "genus1", {std::exp(-0.3)}, std::polar(1.0, 2.0));
  try {
    const auto base = SpectralCurve::from_roots({});
    HandleFamily fam = make_handle_family(base, so2_align(compute_b_basis(base, adapted_homology(base), {}), 1.0), 1.0,
                                          {0.04, 0.02, 0.01, 0.005});
    deform_b_family(fam, {});
    const LimitReport rep = handle_limit_check(fam);
    out.push_back(make("limits.genus0.sign_flip", std::abs(rep.base_sum + 0.5 * I) + std::abs(rep.extrapolated - 0.5 * I),
                       1e-4));
  } catch (const Error& e) {
    out.push_back(failed("limits.genus0.sign_flip", e.what()));
  }
}

void certificates_suite(std::vector<Check>& out, const fs::path& dir) {
  const auto files = json_files(dir / "certificates");
  if (files.empty()) out.push_back(failed("certificates", "no certificate fixtures under " + (dir / "certificates").string()));
  for (const auto& p : files) {
    const std::string name = "certificates." + p.filename().string();
    try {
      const CertificateCheck chk = verify_certificate(json::parse(read_text_file(p.string())));
      if (!chk.ok) out.push_back(failed(name, chk.message));
      else out.push_back(make(name, std::max({chk.residual, chk.residual_doubled, chk.stored_basis_residual}), 1e-8));
    } catch (const std::exception& e) {
      out.push_back(failed(name, e.what()));
    }
  }
}

void fixtures_suite(std::vector<Check>& out, const fs::path& dir) {
  for (const auto& p : json_files(dir / "curves")) {
    const std::string name = "fixtures." + p.filename().string();
    try {
      const json j = json::parse(read_text_file(p.string()));
      if (!j.contains("expect")) continue;
      const json& ex = j["expect"];
      bool valid = true;
      std::string got;
      bool ok = true;
      try {
        const CurveFile f = parse_curve(j.dump(), p.string());
        const auto c = SpectralCurve::from_roots(f.etas);
        valid = c.validate().valid;
        if (valid && ex.contains("in_R")) {
          const ClassLabel lab = classify(c, compute_b_basis(c, adapted_homology(c), {}));
          ok = ok && lab.in_R == ex["in_R"].get<bool>();
          got += " in_R=" + std::to_string(lab.in_R);
        }
      } catch (const Error& e) {
        valid = false;
        got += std::string(" ") + e.what();
      }
      ok = ok && valid == ex.value("valid", true);
      out.push_back(make(name, ok ? 0.0 : 1.0, 0.0, "valid=" + std::to_string(valid) + got));
    } catch (const std::exception& e) {
      out.push_back(failed(name, e.what()));
    }
  }
}

}  // namespace

std::vector<Check> run_suite(const std::string& suite, const std::string& fixture_dir) {
  const fs::path dir(fixture_dir);
  std::vector<Check> out;
  const bool all = suite == "all";
  if (!all && suite != "periods" && suite != "invariants" && suite != "limits" && suite != "certificates" &&
      suite != "fixtures")
    throw Error(ErrorKind::Domain, "unknown suite '" + suite + "'");
  if (all || suite == "periods") periods_suite(out, dir);
  if (all || suite == "invariants") invariants_suite(out, dir);
  if (all || suite == "limits") limits_suite(out);
  if (all || suite == "certificates") certificates_suite(out, dir);
  if (all || suite == "fixtures") fixtures_suite(out, dir);
  return out;
}

}  // namespace sgspec::cli
