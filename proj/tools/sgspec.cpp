// sgspec command-line front end.
//
// Exit codes: 0 ok (classify: in R), 1 other failure, 2 invalid input,
// 3 classify: in S, 4 classify: neither, 5 search: not found.
// Every command prints one "status=... key=value" line on stderr.

#include "verify.hpp"

#include "sgspec/errors.hpp"
#include "sgspec/io.hpp"
#include "sgspec/kernels.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef SGSPEC_DEFAULT_FIXTURES
#define SGSPEC_DEFAULT_FIXTURES "fixtures"
#endif

using namespace sgspec;

namespace {

constexpr int kOk = 0, kOther = 1, kInvalid = 2, kInS = 3, kNeither = 4, kNotFound = 5;

struct Common {
  QuadratureConfig cfg;
  std::string out;
  std::string csv;
  unsigned threads = 0;
};

struct Status {
  std::string command;
  std::vector<std::pair<std::string, std::string>> fields;
  void add(const std::string& k, const std::string& v) { fields.emplace_back(k, v); }
  void print(int code) const {
    std::string line = "status=" + std::string(code == 0 ? "ok" : "fail") + " command=" + command + " exit=" +
                       std::to_string(code);
    for (const auto& [k, v] : fields) {
      std::string vv = v;
      for (char& ch : vv)
        if (ch == ' ' || ch == '\n') ch = '_';
      line += " " + k + "=" + vv;
    }
    std::fprintf(stderr, "%s\n", line.c_str());
  }
};

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Domain:
    case ErrorKind::Parse:
    case ErrorKind::DoublePoint:
    case ErrorKind::Degeneracy:
      return kInvalid;
    case ErrorKind::NotFound:
      return kNotFound;
    default:
      return kOther;
  }
}

void add_quadrature(CLI::App* app, Common& c) {
  app->add_option("--base-nodes", c.cfg.base_nodes, "Gauss-Legendre nodes per contour at level 0")->capture_default_str();
  app->add_option("--max-refinements", c.cfg.max_refinements, "Panel-halving levels before giving up")->capture_default_str();
  app->add_option("--rel-tol", c.cfg.rel_tol, "Relative agreement between successive levels")->capture_default_str();
}

json config_json(const std::string& command, const Common& c) {
  json j;
  j["command"] = command;
  j["quadrature"] = quadrature_json(c.cfg);
  j["kernels"] = kernels::isa_name(kernels::active_isa());
  return j;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Parse, path + ": cannot write");
  f << text;
}

const auto g_start = std::chrono::steady_clock::now();

void emit(const json& doc, const Common& c) {
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - g_start).count();
  const std::string text = doc.dump(2) + "\n";
  if (c.out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  write_file(c.out, text);
  // Wall-clock data stays out of the result file so results are byte-stable.
  json t;
  t["seconds"] = seconds;
  t["finished_unix"] = std::chrono::duration_cast<std::chrono::seconds>(
                           std::chrono::system_clock::now().time_since_epoch())
                           .count();
  write_file(c.out + ".timing.json", t.dump(2) + "\n");
}

std::vector<double> parse_numbers(const std::string& s, const std::string& what) {
  std::vector<double> v;
  std::string tok;
  std::stringstream ss(s);
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    while (pos < tok.size() && tok[pos] == ' ') ++pos;
    if (tok.empty() || pos != tok.size()) throw Error(ErrorKind::Parse, what + ": cannot parse '" + tok + "'");
    v.push_back(x);
  }
  return v;
}

// "re,im" or "re,im;re,im;..."
std::vector<cplx> parse_points(const std::string& s, const std::string& what) {
  std::vector<cplx> out;
  std::string part;
  std::stringstream ss(s);
  while (std::getline(ss, part, ';')) {
    const auto v = parse_numbers(part, what);
    if (v.size() == 1) out.emplace_back(v[0], 0.0);
    else if (v.size() == 2) out.emplace_back(v[0], v[1]);
    else throw Error(ErrorKind::Parse, what + ": expected re,im pairs");
  }
  return out;
}

std::array<cplx, 2> parse_sym(const std::string& s) {
  const auto p = parse_points(s, "--sym");
  if (p.size() != 2) throw Error(ErrorKind::Parse, "--sym: expected two points 're,im;re,im'");
  return {p[0], p[1]};
}

json points_json(const std::vector<cplx>& v) {
  json a = json::array();
  for (const cplx& z : v) a.push_back(complex_json(z));
  return a;
}

// ---------------------------------------------------------------------------

int cmd_curve_info(const std::string& file, const Common& c, Status& st) {
  const CurveFile f = read_curve_file(file);
  json doc;
  doc["config"] = config_json("curve-info", c);
  doc["config"]["file"] = file;
  doc["genus"] = static_cast<int>(f.etas.size());
  doc["etas"] = points_json(f.etas);
  st.add("genus", std::to_string(f.etas.size()));
  SpectralCurve curve = SpectralCurve::from_roots({});
  try {
    curve = SpectralCurve::from_roots(f.etas);
  } catch (const Error& e) {
    doc["valid"] = false;
    doc["failures"] = json::array({e.what()});
    doc["summary"] = "g=" + std::to_string(f.etas.size()) + ", invalid";
    emit(doc, c);
    st.add("valid", "0");
    return kInvalid;
  }
  const CurveValidation v = curve.validate();
  doc["a"] = poly_json(curve.a());
  doc["a_string"] = poly_string(curve.a());
  doc["valid"] = v.valid;
  doc["reality_residual"] = v.reality_residual;
  doc["positivity_min"] = v.positivity_min;
  doc["positivity_imag"] = v.positivity_imag;
  doc["lead_modulus_error"] = v.lead_modulus_error;
  doc["min_root_separation"] = v.min_root_separation;
  doc["failures"] = v.failures;
  doc["branch_points"] = points_json(curve.finite_branch_points());
  doc["margin"] = curve.margin();
  doc["summary"] = "g=" + std::to_string(curve.genus()) + ", a=" + poly_string(curve.a()) + ", " +
                   (v.valid ? "valid" : "invalid");
  emit(doc, c);
  st.add("valid", v.valid ? "1" : "0");
  return v.valid ? kOk : kInvalid;
}

int cmd_classify(const std::string& file, const ClassifyOptions& opts, const Common& c, Status& st) {
  const CurveFile f = read_curve_file(file);
  const SpectralCurve curve = SpectralCurve::from_roots(f.etas);
  if (!curve.validate().valid) throw Error(ErrorKind::Domain, file + ": curve fails validation");
  const BBasis basis = compute_b_basis(curve, adapted_homology(curve), c.cfg);
  const ClassLabel lab = classify(curve, basis, opts);
  json doc;
  doc["config"] = config_json("classify", c);
  doc["config"]["file"] = file;
  doc["config"]["tol_S"] = opts.tol_S;
  doc["config"]["tol_R"] = opts.tol_R;
  doc["curve"] = curve_json(curve);
  doc["b1"] = poly_json(basis.b1);
  doc["b2"] = poly_json(basis.b2);
  doc["label"] = label_json(lab);
  emit(doc, c);
  st.add("in_R", lab.in_R ? "1" : "0");
  st.add("in_S", lab.in_S ? "1" : "0");
  if (lab.in_R) return kOk;
  return lab.in_S ? kInS : kNeither;
}

int cmd_deform(const std::string& file, const std::string& alpha_s, const std::string& tseq, bool align,
               const Common& c, Status& st) {
  const CurveFile f = read_curve_file(file);
  const auto alphas = parse_points(alpha_s, "--alpha");
  if (alphas.size() != 1) throw Error(ErrorKind::Parse, "--alpha: expected one point re,im");
  const cplx alpha = alphas[0];
  const std::vector<double> ts = parse_numbers(tseq, "--t-seq");
  if (ts.empty()) throw Error(ErrorKind::Parse, "--t-seq: empty");
  const SpectralCurve base = SpectralCurve::from_roots(f.etas);
  // validate alpha and t before the expensive part
  for (const double t : ts) (void)attach_handle(base, alpha, t);
  BBasis basis = compute_b_basis(base, adapted_homology(base), c.cfg);
  if (align) basis = so2_align(basis, alpha);
  HandleFamily fam = make_handle_family(base, basis, alpha, ts);
  deform_b_family(fam, c.cfg, c.threads);

  std::optional<LimitReport> lim;
  std::optional<FDegreeReport> deg;
  json notes = json::array();
  try {
    lim = handle_limit_check(fam);
  } catch (const Error& e) {
    notes.push_back(std::string("limit: ") + e.what());
  }
  try {
    deg = track_f_degree(fam);
  } catch (const Error& e) {
    notes.push_back(std::string("degree: ") + e.what());
  }
  json doc;
  doc["config"] = config_json("deform", c);
  doc["config"]["file"] = file;
  doc["config"]["alpha"] = complex_json(alpha);
  doc["config"]["t_seq"] = ts;
  doc["config"]["align"] = align;
  doc["family"] = family_json(fam, lim ? &*lim : nullptr, deg ? &*deg : nullptr);
  doc["notes"] = notes;
  if (!c.csv.empty() && lim) write_file(c.csv, family_csv(*lim));
  emit(doc, c);
  st.add("members", std::to_string(fam.curves.size()));
  if (lim) {
    st.add("limit_error", fmt17(lim->error));
    st.add("limit_passed", lim->passed ? "1" : "0");
  }
  return kOk;
}

int cmd_search(SearchOptions so, const std::string& sym, const std::string& start, const Common& c, Status& st) {
  const auto s = parse_sym(sym);
  so.lambda1 = s[0];
  so.lambda2 = s[1];
  if (!start.empty()) so.start = parse_points(start, "--start");
  if (so.genus < 0) throw Error(ErrorKind::Domain, "--g must be non-negative");
  if (so.Q < 1) throw Error(ErrorKind::Domain, "--Q must be at least 1");
  so.newton.cfg = c.cfg;
  const SearchResult res = search_torus(so);

  json cfg = config_json("search", c);
  cfg["g"] = so.genus;
  cfg["sym"] = json::array({complex_json(so.lambda1), complex_json(so.lambda2)});
  cfg["Q"] = so.Q;
  cfg["seed"] = so.seed;
  cfg["start"] = points_json(so.start);
  cfg["max_attempts"] = so.max_attempts;
  cfg["max_plane_distance"] = so.max_plane_distance;
  cfg["tol"] = so.newton.tol;
  cfg["max_iter"] = so.newton.max_iter;
  json attempts = json::array();
  for (const auto& a : res.attempts) {
    json j;
    j["index"] = a.index;
    j["etas"] = points_json(a.etas);
    j["plane_distance"] = a.plane_distance;
    j["iterations"] = a.iterations;
    j["outcome"] = a.outcome;
    attempts.push_back(j);
  }
  json doc;
  if (res.certificate) {
    doc = certificate_json(*res.certificate);
    doc["found"] = true;
  } else {
    doc["found"] = false;
  }
  doc["attempts"] = attempts;
  doc["config"] = cfg;
  emit(doc, c);
  st.add("attempts", std::to_string(res.attempts.size()));
  if (!res.certificate) {
    st.add("found", "0");
    return kNotFound;
  }
  st.add("found", "1");
  st.add("residual", fmt17(res.certificate->residual));
  return kOk;
}

int cmd_verify(const std::string& suite, const std::string& fixtures, const Common& c, Status& st) {
  const auto checks = cli::run_suite(suite, fixtures);
  json doc;
  doc["config"] = config_json("verify", c);
  doc["config"]["suite"] = suite;
  doc["config"]["fixtures"] = fixtures;
  json arr = json::array();
  int failed = 0;
  std::string first_failure;
  for (const auto& ch : checks) {
    json j;
    j["name"] = ch.name;
    j["passed"] = ch.passed;
    j["value"] = std::isfinite(ch.value) ? json(ch.value) : json(nullptr);
    j["tolerance"] = ch.tolerance;
    j["margin"] = std::isfinite(ch.value) ? json(ch.tolerance - ch.value) : json(nullptr);
    if (!ch.detail.empty()) j["detail"] = ch.detail;
    arr.push_back(j);
    if (!ch.passed) {
      ++failed;
      if (first_failure.empty()) first_failure = ch.name;
      std::fprintf(stderr, "FAILED %s: value %s tolerance %s %s\n", ch.name.c_str(), fmt17(ch.value).c_str(),
                   fmt17(ch.tolerance).c_str(), ch.detail.c_str());
    }
  }
  doc["checks"] = arr;
  doc["failed"] = failed;
  emit(doc, c);
  st.add("checks", std::to_string(checks.size()));
  st.add("failed", std::to_string(failed));
  if (!first_failure.empty()) st.add("first_failure", first_failure);
  return failed == 0 ? kOk : kOther;
}

int cmd_density(DensityOptions d, const std::string& sym, const std::string& qlist, const Common& c, Status& st) {
  const auto s = parse_sym(sym);
  d.lambda1 = s[0];
  d.lambda2 = s[1];
  d.Q_list.clear();
  for (const double q : parse_numbers(qlist, "--Q")) {
    if (q < 1 || q != std::floor(q)) throw Error(ErrorKind::Parse, "--Q: entries must be positive integers");
    d.Q_list.push_back(static_cast<int>(q));
  }
  d.cfg = c.cfg;
  d.threads = c.threads;
  const auto rows = density_scan(d);
  const DensitySummary sum = summarize(rows, d.Q_list);
  json doc;
  json cfg = config_json("density-scan", c);
  cfg["g"] = d.genus;
  cfg["sym"] = json::array({complex_json(d.lambda1), complex_json(d.lambda2)});
  cfg["samples"] = d.samples;
  cfg["Q"] = d.Q_list;
  cfg["seed"] = d.seed;
  cfg["max_resamples"] = d.max_resamples;
  cfg["planes"] = d.with_planes;
  doc["config"] = cfg;
  json sj;
  sj["Q"] = sum.Q;
  sj["median"] = sum.median;
  sj["q10"] = sum.q10;
  sj["q90"] = sum.q90;
  sj["r_fraction"] = sum.r_fraction;
  sj["failures"] = sum.failures;
  bool decreasing = true;
  for (std::size_t k = 1; k < sum.median.size(); ++k) decreasing = decreasing && sum.median[k] < sum.median[k - 1];
  sj["median_strictly_decreasing"] = decreasing;
  doc["summary"] = sj;
  if (!c.csv.empty()) write_file(c.csv, density_csv(rows, d.genus, d.Q_list));
  emit(doc, c);
  st.add("samples", std::to_string(rows.size()));
  st.add("r_fraction", fmt17(sum.r_fraction));
  st.add("failures", std::to_string(sum.failures));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral curves of finite-type sinh-Gordon solutions: classification, handle deformations and CMC "
               "torus search"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--threads", common.threads, "Worker threads for scans and families (0 = all cores)");

  std::string file;
  Common& c = common;

  auto* info = app.add_subcommand("curve-info", "Print genus, a(lambda), validation residuals and branch points");
  info->add_option("curve", file, "Curve JSON file {\"genus\", \"etas\": [[re, im], ...]}")->required();
  info->add_option("--out", c.out, "Write the JSON report here (and timings to <out>.timing.json)");
  add_quadrature(info, c);

  ClassifyOptions copts;
  auto* cls = app.add_subcommand("classify", "Classify a curve; exit 0 in R, 3 in S, 4 neither");
  cls->add_option("curve", file, "Curve JSON file")->required();
  cls->add_option("--tol-S", copts.tol_S, "Threshold on the normalized resultant")->capture_default_str();
  cls->add_option("--tol-R", copts.tol_R, "Threshold on |residue sum|")->capture_default_str();
  cls->add_option("--out", c.out, "Write the JSON report here");
  add_quadrature(cls, c);

  std::string alpha = "1,0", tseq = "0.08,0.04,0.02,0.01";
  bool no_align = false;
  auto* def = app.add_subcommand("deform", "Attach a handle at alpha and follow the family along t");
  def->add_option("curve", file, "Base curve JSON file")->required();
  def->add_option("--alpha", alpha, "Point on the unit circle, re,im")->capture_default_str();
  def->add_option("--t-seq", tseq, "Comma-separated t values")->capture_default_str();
  def->add_flag("--no-align", no_align, "Keep the base basis instead of rotating it so b1(alpha) = 0");
  def->add_option("--out", c.out, "Write the family JSON here");
  def->add_option("--csv", c.csv, "CSV of residue sums; columns: t, re_residue_sum, im_residue_sum");
  add_quadrature(def, c);

  SearchOptions so;
  std::string sym = "0,1;0,-1", start;
  auto* srch = app.add_subcommand("search", "Search for a certified CMC torus; exit 5 when none is found");
  srch->add_option("--g", so.genus, "Genus")->capture_default_str();
  srch->add_option("--sym", sym, "Sym points 're,im;re,im' on the unit circle")->capture_default_str();
  srch->add_option("--Q", so.Q, "Entry bound for the rational plane")->capture_default_str();
  srch->add_option("--seed", so.seed, "Seed for root sampling")->capture_default_str();
  srch->add_option("--start", start, "Roots for the first attempt, 're,im;re,im;...'");
  srch->add_option("--max-attempts", so.max_attempts, "Samples tried before giving up")->capture_default_str();
  srch->add_option("--max-distance", so.max_plane_distance, "Largest plane distance handed to Newton")
      ->capture_default_str();
  srch->add_option("--tol", so.newton.tol, "Certification threshold on max |phi(b_i) - m_i|")->capture_default_str();
  srch->add_option("--max-iter", so.newton.max_iter, "Newton iterations")->capture_default_str();
  srch->add_option("--out", c.out, "Write the certificate JSON here");
  add_quadrature(srch, c);

  std::string suite = "all", fixtures = SGSPEC_DEFAULT_FIXTURES;
  auto* ver = app.add_subcommand("verify", "Run a verification suite: all, periods, invariants, limits, certificates, fixtures");
  ver->add_option("--suite", suite, "Suite name")->capture_default_str();
  ver->add_option("--fixtures", fixtures, "Fixture directory (curves/, certificates/)")->capture_default_str();
  ver->add_option("--out", c.out, "Write the JSON report here");

  DensityOptions dopt;
  std::string qlist = "4,8,16,32";
  bool no_planes = false;
  auto* den = app.add_subcommand(
      "density-scan",
      "Monte-Carlo scan of rational-plane distances. CSV columns: index, resamples, eta_re_j, eta_im_j, in_R, in_S, "
      "residue_re, residue_im, discriminant_scaled, d_Q<q> per Q, error");
  den->add_option("--g", dopt.genus, "Genus")->capture_default_str();
  den->add_option("--sym", sym, "Sym points 're,im;re,im'")->capture_default_str();
  den->add_option("--samples", dopt.samples, "Number of random curves")->capture_default_str();
  den->add_option("--Q", qlist, "Comma-separated entry bounds")->capture_default_str();
  den->add_option("--seed", dopt.seed, "Seed")->capture_default_str();
  den->add_flag("--no-planes", no_planes, "Classification only");
  den->add_option("--out", c.out, "Write the JSON summary here");
  den->add_option("--csv", c.csv, "Write per-sample rows here");
  add_quadrature(den, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return kOk;
    std::fprintf(stderr, "status=fail command=parse exit=%d\n", kInvalid);
    return kInvalid;
  }

  Status st;
  int code = kOther;
  try {
    c.cfg.validate();
    if (*info) {
      st.command = "curve-info";
      code = cmd_curve_info(file, c, st);
    } else if (*cls) {
      st.command = "classify";
      code = cmd_classify(file, copts, c, st);
    } else if (*def) {
      st.command = "deform";
      code = cmd_deform(file, alpha, tseq, !no_align, c, st);
    } else if (*srch) {
      st.command = "search";
      code = cmd_search(so, sym, start, c, st);
    } else if (*ver) {
      st.command = "verify";
      code = cmd_verify(suite, fixtures, c, st);
    } else if (*den) {
      st.command = "density-scan";
      dopt.with_planes = !no_planes;
      code = cmd_density(dopt, sym, qlist, c, st);
    }
  } catch (const Error& e) {
    code = exit_for(e);
    st.add("error", to_string(e.kind()));
    std::fprintf(stderr, "error: %s\n", e.what());
  } catch (const std::exception& e) {
    code = kOther;
    st.add("error", "internal");
    std::fprintf(stderr, "error: %s\n", e.what());
  }
  st.print(code);
  return code;
}
