#include <doctest.h>

#include "sgspec/errors.hpp"
#include "sgspec/io.hpp"

#include <cmath>
#include <random>

using namespace sgspec;

namespace {

const cplx I(0, 1);

}  // namespace

TEST_CASE("curve files: schema and error locations") {
  const CurveFile f = parse_curve(R"({"genus": 1, "etas": [[0.5, 0.0]], "sym": [[0, 1], [0, -1]]})");
  REQUIRE(f.etas.size() == 1);
  CHECK(f.etas[0] == cplx(0.5, 0.0));
  REQUIRE(f.sym);
  CHECK((*f.sym)[1] == cplx(0.0, -1.0));
  CHECK(parse_curve(R"({"etas": []})").etas.empty());

  try {
    parse_curve("{\"genus\": 1,\n  \"etas\": [[0.5, 0.0],\n}", "c.json");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).rfind("c.json:3:1", 0) == 0);
  }
  try {
    parse_curve(R"({"genus": 1, "etas": [[0.5, "x"]]})", "c.json");
    FAIL("expected a schema error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("c.json.etas[0][1]") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_curve(R"({"genus": 2, "etas": [[0.5, 0]]})"), Error);
  CHECK_THROWS_AS(parse_curve(R"({"genus": 0})"), Error);
}

TEST_CASE("numbers round-trip exactly through JSON") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(u(rng) * 3));
    const json j = complex_json({x, -x / 3.0});
    const cplx back = complex_from_json(json::parse(j.dump()), "x");
    CHECK(back.real() == x);
    CHECK(back.imag() == -x / 3.0);
    CHECK(std::stod(fmt17(x)) == x);
  }
}

TEST_CASE("poly_string") {
  CHECK(poly_string(CPoly{1.0}) == "1");
  CHECK(poly_string(CPoly{-1.0, 2.5, -1.0}) == "-lambda^2 + 2.5 lambda - 1");
  CHECK(poly_string(CPoly{0.0, I}) == "(0 + 1i) lambda");
  CHECK(poly_string(CPoly{}) == "0");
}

TEST_CASE("certificates re-validate from their JSON alone") {
  auto c0 = SpectralCurve::from_roots({0.5});
  const PlaneFrame f = grassmann_plane(c0, I, -I, full_atlas(c0, I, -I), {});
  const RationalPlane rp = nearest_rational_plane(f, 8);
  const NewtonResult nr = newton_refine(c0, I, -I, rp.m1, rp.m2);
  const TorusCertificate cert = certify(nr.curve, I, -I, rp.m1, rp.m2, {}, 1e-8, 42, nr.frame);

  const std::string text = certificate_json(cert).dump(2);
  const json j = json::parse(text);
  for (const char* key : {"genus", "etas", "sym", "m1", "m2", "b1", "b2", "residual", "quadrature", "seed", "classifier"})
    CHECK(j.contains(key));
  for (const char* key : {"in_R", "delta", "residue_sum"}) CHECK(j["classifier"].contains(key));

  const TorusCertificate back = certificate_from_json(j);
  CHECK(back.curve.etas() == cert.curve.etas());
  CHECK(back.seed == 42);
  CHECK(coeff_distance(back.basis.b1, cert.basis.b1) == 0.0);
  CHECK(certificate_json(back).dump(2) == text);

  const CertificateCheck ok = verify_certificate(j);
  CHECK(ok.ok);
  CHECK(ok.residual < 1e-8);
  CHECK(ok.stored_basis_residual < 1e-8);

  json tampered = j;
  tampered["m2"][1] = tampered["m2"][1].get<long long>() + 1;
  const CertificateCheck bad = verify_certificate(tampered);
  CHECK_FALSE(bad.ok);
  CHECK(bad.message.find("revoked") != std::string::npos);

  json moved = j;
  moved["etas"][0][0] = moved["etas"][0][0].get<double>() + 1e-3;
  CHECK_FALSE(verify_certificate(moved).ok);
}

TEST_CASE("density CSV layout") {
  DensityRow r;
  r.index = 3;
  r.etas = {cplx(0.1, 0.2)};
  r.in_R = true;
  r.distances = {0.5, 0.25};
  r.error = "a,b";
  const std::string csv = density_csv({r}, 1, {4, 8});
  CHECK(csv.rfind("index,resamples,eta_re_1,eta_im_1,in_R,in_S,residue_re,residue_im,discriminant_scaled,d_Q4,d_Q8,error\n", 0) == 0);
  CHECK(csv.find("3,0,0.10000000000000001,0.20000000000000001,1,0,") != std::string::npos);
  CHECK(csv.find(",0.5,0.25,a b\n") != std::string::npos);
}
