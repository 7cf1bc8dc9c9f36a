#include "sgspec/io.hpp"

#include "sgspec/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sgspec {

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Parse, where + ": " + what);
}

// Line and column (1-based) of a byte offset.
std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where, "expected a number");
  return j.get<double>();
}

IntVec intvec_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array of integers");
  IntVec v;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number_integer()) schema_error(where + "[" + std::to_string(k) + "]", "expected an integer");
    v.push_back(j[k].get<long long>());
  }
  return v;
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema_error(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) schema_error(where, std::string("missing field \"") + key + "\"");
  return *it;
}

}  // namespace

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, path + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) schema_error(where, "expected [re, im]");
  return {number_at(j[0], where + "[0]"), number_at(j[1], where + "[1]")};
}

json poly_json(const CPoly& p) {
  json a = json::array();
  for (const cplx& c : p.coeffs()) a.push_back(complex_json(c));
  return a;
}

CPoly poly_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array of coefficients");
  std::vector<cplx> c;
  for (std::size_t k = 0; k < j.size(); ++k) c.push_back(complex_from_json(j[k], where + "[" + std::to_string(k) + "]"));
  return CPoly(std::move(c));
}

CurveFile parse_curve(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    std::ostringstream os;
    os << source << ":" << line << ":" << col << ": " << e.what();
    throw Error(ErrorKind::Parse, os.str());
  }
  CurveFile f;
  const json& etas = field(j, "etas", source);
  if (!etas.is_array()) schema_error(source + ".etas", "expected an array");
  for (std::size_t k = 0; k < etas.size(); ++k)
    f.etas.push_back(complex_from_json(etas[k], source + ".etas[" + std::to_string(k) + "]"));
  if (j.contains("genus")) {
    const json& g = j["genus"];
    if (!g.is_number_integer()) schema_error(source + ".genus", "expected an integer");
    if (g.get<long long>() != static_cast<long long>(f.etas.size()))
      schema_error(source + ".genus", "genus " + std::to_string(g.get<long long>()) + " does not match " +
                                          std::to_string(f.etas.size()) + " roots");
  }
  if (j.contains("sym")) {
    const json& s = j["sym"];
    if (!s.is_array() || s.size() != 2) schema_error(source + ".sym", "expected two points");
    f.sym = std::array<cplx, 2>{complex_from_json(s[0], source + ".sym[0]"), complex_from_json(s[1], source + ".sym[1]")};
  }
  return f;
}

CurveFile read_curve_file(const std::string& path) { return parse_curve(read_text_file(path), path); }

json curve_json(const SpectralCurve& c, const std::optional<std::array<cplx, 2>>& sym) {
  json j;
  j["genus"] = c.genus();
  json e = json::array();
  for (const cplx& x : c.etas()) e.push_back(complex_json(x));
  j["etas"] = e;
  if (sym) j["sym"] = json::array({complex_json((*sym)[0]), complex_json((*sym)[1])});
  return j;
}

json quadrature_json(const QuadratureConfig& cfg) {
  return json{{"base_nodes", cfg.base_nodes}, {"max_refinements", cfg.max_refinements}, {"rel_tol", cfg.rel_tol}};
}

QuadratureConfig quadrature_from_json(const json& j) {
  QuadratureConfig cfg;
  const json& bn = field(j, "base_nodes", "quadrature");
  const json& mr = field(j, "max_refinements", "quadrature");
  if (!bn.is_number_integer() || !mr.is_number_integer())
    schema_error("quadrature", "base_nodes and max_refinements must be integers");
  cfg.base_nodes = bn.get<int>();
  cfg.max_refinements = mr.get<int>();
  cfg.rel_tol = number_at(field(j, "rel_tol", "quadrature"), "quadrature.rel_tol");
  cfg.validate();
  return cfg;
}

json label_json(const ClassLabel& l) {
  json j;
  j["in_R"] = l.in_R;
  j["in_S"] = l.in_S;
  j["residue_sum"] = complex_json(l.residue_sum);
  j["delta"] = complex_json(l.discriminant);
  j["delta_scaled"] = l.discriminant_scaled;
  j["degree_f"] = l.degree_f;
  j["degree_c1"] = l.degree_c1;
  j["degree_c2"] = l.degree_c2;
  j["bezout_residual"] = l.bezout_residual;
  j["c_reality_residual"] = l.c_reality_residual;
  j["tol_S"] = l.options.tol_S;
  j["tol_R"] = l.options.tol_R;
  return j;
}

std::string poly_string(const CPoly& p, int digits) {
  if (p.is_zero()) return "0";
  auto num = [&](double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return std::string(buf);
  };
  std::string out;
  for (int k = p.degree(); k >= 0; --k) {
    const cplx c = p[k];
    if (c == cplx{}) continue;
    std::string mono = k == 0 ? "" : (k == 1 ? "lambda" : "lambda^" + std::to_string(k));
    const bool real = std::abs(c.imag()) <= 1e-15 * std::abs(c.real());
    std::string coef;
    bool negative = false;
    if (real) {
      negative = c.real() < 0.0;
      const double m = std::abs(c.real());
      if (m != 1.0 || mono.empty()) coef = num(m);
    } else {
      coef = "(" + num(c.real()) + (c.imag() < 0 ? " - " : " + ") + num(std::abs(c.imag())) + "i)";
    }
    std::string term = coef;
    if (!coef.empty() && !mono.empty()) term += " ";
    term += mono;
    if (out.empty()) out = (negative ? "-" : "") + term;
    else out += (negative ? " - " : " + ") + term;
  }
  return out;
}

json certificate_json(const TorusCertificate& cert) {
  json j;
  j["genus"] = cert.curve.genus();
  j["etas"] = curve_json(cert.curve)["etas"];
  j["sym"] = json::array({complex_json(cert.lambda1), complex_json(cert.lambda2)});
  j["m1"] = cert.m1;
  j["m2"] = cert.m2;
  j["b1"] = poly_json(cert.basis.b1);
  j["b2"] = poly_json(cert.basis.b2);
  j["residual"] = cert.residual;
  j["residual_doubled"] = cert.residual_doubled;
  j["threshold"] = cert.threshold;
  j["quadrature"] = quadrature_json(cert.quadrature);
  j["seed"] = cert.seed;
  j["sheet_frame"] = json{{"cut_angle", cert.frame.cut_angle}, {"ref_angle", cert.frame.ref_angle}};
  json cl = label_json(cert.label);
  json classifier;
  classifier["in_R"] = cl["in_R"];
  classifier["delta"] = cl["delta"];
  classifier["residue_sum"] = cl["residue_sum"];
  for (auto it = cl.begin(); it != cl.end(); ++it)
    if (!classifier.contains(it.key())) classifier[it.key()] = it.value();
  j["classifier"] = classifier;
  return j;
}

TorusCertificate certificate_from_json(const json& j) {
  TorusCertificate cert;
  CurveFile cf;
  const json& etas = field(j, "etas", "certificate");
  if (!etas.is_array()) schema_error("certificate.etas", "expected an array");
  for (std::size_t k = 0; k < etas.size(); ++k)
    cf.etas.push_back(complex_from_json(etas[k], "certificate.etas[" + std::to_string(k) + "]"));
  const json& g = field(j, "genus", "certificate");
  if (!g.is_number_integer() || g.get<long long>() != static_cast<long long>(cf.etas.size()))
    schema_error("certificate.genus", "does not match the number of roots");
  cert.curve = SpectralCurve::from_roots(cf.etas);
  const json& sym = field(j, "sym", "certificate");
  if (!sym.is_array() || sym.size() != 2) schema_error("certificate.sym", "expected two points");
  cert.lambda1 = complex_from_json(sym[0], "certificate.sym[0]");
  cert.lambda2 = complex_from_json(sym[1], "certificate.sym[1]");
  cert.m1 = intvec_from_json(field(j, "m1", "certificate"), "certificate.m1");
  cert.m2 = intvec_from_json(field(j, "m2", "certificate"), "certificate.m2");
  cert.basis.b1 = poly_from_json(field(j, "b1", "certificate"), "certificate.b1");
  cert.basis.b2 = poly_from_json(field(j, "b2", "certificate"), "certificate.b2");
  cert.basis.gram = coefficient_gram(cert.basis.b1, cert.basis.b2);
  cert.residual = number_at(field(j, "residual", "certificate"), "certificate.residual");
  if (j.contains("residual_doubled")) cert.residual_doubled = number_at(j["residual_doubled"], "certificate.residual_doubled");
  if (j.contains("threshold")) cert.threshold = number_at(j["threshold"], "certificate.threshold");
  cert.quadrature = quadrature_from_json(field(j, "quadrature", "certificate"));
  const json& seed = field(j, "seed", "certificate");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) schema_error("certificate.seed", "expected an integer");
  cert.seed = seed.get<std::uint64_t>();
  if (j.contains("sheet_frame")) {
    const json& f = j["sheet_frame"];
    cert.frame.cut_angle = number_at(field(f, "cut_angle", "certificate.sheet_frame"), "certificate.sheet_frame.cut_angle");
    cert.frame.ref_angle = number_at(field(f, "ref_angle", "certificate.sheet_frame"), "certificate.sheet_frame.ref_angle");
  } else {
    cert.frame = default_sheet_frame(cert.curve);
  }
  const json& cl = field(j, "classifier", "certificate");
  cert.label.in_R = field(cl, "in_R", "certificate.classifier").get<bool>();
  cert.label.discriminant = complex_from_json(field(cl, "delta", "certificate.classifier"), "certificate.classifier.delta");
  cert.label.residue_sum =
      complex_from_json(field(cl, "residue_sum", "certificate.classifier"), "certificate.classifier.residue_sum");
  cert.label.in_S = cl.value("in_S", false);
  cert.label.discriminant_scaled = cl.value("delta_scaled", 0.0);
  cert.label.degree_f = cl.value("degree_f", 0);
  cert.label.degree_c1 = cl.value("degree_c1", -1);
  cert.label.degree_c2 = cl.value("degree_c2", -1);
  cert.label.bezout_residual = cl.value("bezout_residual", 0.0);
  cert.label.c_reality_residual = cl.value("c_reality_residual", 0.0);
  cert.label.options.tol_S = cl.value("tol_S", cert.label.options.tol_S);
  cert.label.options.tol_R = cl.value("tol_R", cert.label.options.tol_R);
  return cert;
}

CertificateCheck verify_certificate(const json& j) {
  CertificateCheck out;
  const TorusCertificate stored = certificate_from_json(j);
  out.stored_residual = stored.residual;
  const int n = stored.curve.genus() + 2;
  if (static_cast<int>(stored.m1.size()) != n || static_cast<int>(stored.m2.size()) != n) {
    out.message = "target vectors must have genus + 2 entries";
    return out;
  }
  try {
    const TorusCertificate again = certify(stored.curve, stored.lambda1, stored.lambda2, stored.m1, stored.m2,
                                           stored.quadrature, stored.threshold, stored.seed, stored.frame);
    out.residual = again.residual;
    out.residual_doubled = again.residual_doubled;

    AtlasOptions ao;
    ao.frame = stored.frame;
    const HomologyAtlas atlas = full_atlas(stored.curve, stored.lambda1, stored.lambda2, ao);
    const AtlasMoments mom = atlas_moments(stored.curve, atlas, stored.quadrature);
    const PeriodVector p1 = phi_vector(mom, stored.basis.b1), p2 = phi_vector(mom, stored.basis.b2);
    for (int k = 0; k < n; ++k) {
      out.stored_basis_residual = std::max(out.stored_basis_residual,
                                           std::abs(p1.entries[static_cast<std::size_t>(k)] - static_cast<double>(stored.m1[static_cast<std::size_t>(k)])));
      out.stored_basis_residual = std::max(out.stored_basis_residual,
                                           std::abs(p2.entries[static_cast<std::size_t>(k)] - static_cast<double>(stored.m2[static_cast<std::size_t>(k)])));
    }
    if (again.label.in_R != stored.label.in_R) {
      out.message = "classifier label changed";
      return out;
    }
    if (!(out.stored_basis_residual < stored.threshold)) {
      out.message = "stored basis misses the targets by " + fmt17(out.stored_basis_residual);
      return out;
    }
    out.ok = true;
    out.message = "ok";
  } catch (const Error& e) {
    out.message = std::string(to_string(e.kind())) + ": " + e.what();
  }
  return out;
}

json family_json(const HandleFamily& fam, const LimitReport* limit, const FDegreeReport* degree) {
  json j;
  j["base"] = curve_json(fam.base);
  j["alpha"] = complex_json(fam.alpha);
  j["sqrt_alpha_bar"] = complex_json(fam.sqrt_alpha_bar);
  j["base_basis"] = json{{"b1", poly_json(fam.base_basis.b1)}, {"b2", poly_json(fam.base_basis.b2)}};
  json members = json::array();
  for (std::size_t k = 0; k < fam.curves.size(); ++k) {
    json m;
    m["t"] = fam.t_values[k];
    m["etas"] = curve_json(fam.curves[k])["etas"];
    if (k < fam.bases.size()) {
      m["b1"] = poly_json(fam.bases[k].b1);
      m["b2"] = poly_json(fam.bases[k].b2);
    }
    members.push_back(m);
  }
  j["members"] = members;
  if (limit) {
    json l;
    json sums = json::array();
    for (const cplx& s : limit->residue_sums) sums.push_back(complex_json(s));
    l["t"] = limit->t_values;
    l["residue_sums"] = sums;
    l["base_sum"] = complex_json(limit->base_sum);
    l["residue_at_alpha"] = complex_json(limit->residue_at_alpha);
    l["target"] = complex_json(limit->target);
    l["extrapolated"] = complex_json(limit->extrapolated);
    l["error"] = limit->error;
    l["observed_orders"] = limit->observed_orders;
    l["tolerance"] = limit->tolerance;
    l["passed"] = limit->passed;
    j["limit"] = l;
  }
  if (degree) {
    json d;
    d["base_degree"] = degree->base_degree;
    json rows = json::array();
    for (const auto& r : degree->rows) {
      json row;
      row["t"] = r.t;
      row["degree_f"] = r.degree_f;
      json nr = json::array();
      for (const cplx& z : r.new_roots) nr.push_back(complex_json(z));
      row["new_df_roots"] = nr;
      row["max_circle_deviation"] = r.max_circle_deviation;
      rows.push_back(row);
    }
    d["rows"] = rows;
    j["degree"] = d;
  }
  return j;
}

std::string family_csv(const LimitReport& limit) {
  std::string out = "t,re_residue_sum,im_residue_sum\n";
  for (std::size_t k = 0; k < limit.t_values.size(); ++k)
    out += fmt17(limit.t_values[k]) + "," + fmt17(limit.residue_sums[k].real()) + "," +
           fmt17(limit.residue_sums[k].imag()) + "\n";
  return out;
}

std::string density_csv(const std::vector<DensityRow>& rows, int genus, const std::vector<int>& Q_list) {
  std::string out = "index,resamples";
  for (int j = 1; j <= genus; ++j) out += ",eta_re_" + std::to_string(j) + ",eta_im_" + std::to_string(j);
  out += ",in_R,in_S,residue_re,residue_im,discriminant_scaled";
  for (const int q : Q_list) out += ",d_Q" + std::to_string(q);
  out += ",error\n";
  for (const auto& r : rows) {
    out += std::to_string(r.index) + "," + std::to_string(r.resamples);
    for (int j = 0; j < genus; ++j) {
      const cplx e = j < static_cast<int>(r.etas.size()) ? r.etas[static_cast<std::size_t>(j)] : cplx{};
      out += "," + fmt17(e.real()) + "," + fmt17(e.imag());
    }
    out += std::string(",") + (r.in_R ? "1" : "0") + "," + (r.in_S ? "1" : "0") + "," + fmt17(r.residue_sum.real()) + "," +
           fmt17(r.residue_sum.imag()) + "," + fmt17(r.discriminant_scaled);
    for (std::size_t q = 0; q < Q_list.size(); ++q) out += "," + (q < r.distances.size() ? fmt17(r.distances[q]) : std::string());
    std::string err = r.error;
    for (char& ch : err)
      if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    out += "," + err + "\n";
  }
  return out;
}

}  // namespace sgspec
