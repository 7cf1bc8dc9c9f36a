#pragma once

// JSON and CSV forms of curves, labels, handle families and certificates.
// Complex numbers are [re, im] pairs; polynomials are coefficient arrays in
// ascending powers.

#include "sgspec/deform.hpp"
#include "sgspec/search.hpp"

#include <json.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace sgspec {

using json = nlohmann::ordered_json;

struct CurveFile {
  std::vector<cplx> etas;
  std::optional<std::array<cplx, 2>> sym;
};

/// Parse {"genus": g, "etas": [[re, im], ...], "sym": [[re, im], [re, im]]}.
/// Throws Parse with "source:line:column" for syntax errors and a JSON
/// path for schema errors. Does not validate the roots.
CurveFile parse_curve(const std::string& text, const std::string& source = "<input>");
CurveFile read_curve_file(const std::string& path);
std::string read_text_file(const std::string& path);

json complex_json(cplx z);
cplx complex_from_json(const json& j, const std::string& where);
json poly_json(const CPoly& p);
CPoly poly_from_json(const json& j, const std::string& where);

json curve_json(const SpectralCurve& c, const std::optional<std::array<cplx, 2>>& sym = std::nullopt);
json quadrature_json(const QuadratureConfig& cfg);
QuadratureConfig quadrature_from_json(const json& j);
json label_json(const ClassLabel& l);

/// Human form in descending powers, e.g. "-lambda^2 + 2.5 lambda - 1".
std::string poly_string(const CPoly& p, int digits = 6);

json certificate_json(const TorusCertificate& cert);
TorusCertificate certificate_from_json(const json& j);

struct CertificateCheck {
  double stored_residual = 0.0;
  double residual = 0.0;          // re-fitted basis, stored quadrature
  double residual_doubled = 0.0;  // re-fitted basis, doubled base_nodes
  double stored_basis_residual = 0.0;  // max |phi(stored b_i) - m_i|
  bool ok = false;
  std::string message;
};

/// Rebuild everything from the JSON and re-run the certification.
CertificateCheck verify_certificate(const json& j);

json family_json(const HandleFamily& fam, const LimitReport* limit, const FDegreeReport* degree);
/// Columns: t, re_residue_sum, im_residue_sum.
std::string family_csv(const LimitReport& limit);

/// Columns: index, resamples, eta_re_1, eta_im_1, ..., in_R, in_S,
/// residue_re, residue_im, discriminant_scaled, d_Q<q> per Q, error.
std::string density_csv(const std::vector<DensityRow>& rows, int genus, const std::vector<int>& Q_list);

/// printf("%.17g") of x.
std::string fmt17(double x);

}  // namespace sgspec
