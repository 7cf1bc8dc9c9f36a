#include <doctest.h>

#include "sgspec/bspace.hpp"
#include "sgspec/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace sgspec;

namespace {

const cplx I(0, 1);
constexpr double kPi = std::numbers::pi;

// Roots kept off the rays of the Sym points used below, so that the radial
// gamma strings clear them.
std::vector<cplx> random_etas(std::mt19937_64& rng, int g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> etas;
  while (static_cast<int>(etas.size()) < g) {
    const cplx z = std::polar(std::sqrt(0.04 + u(rng) * 0.6), 2 * kPi * u(rng));
    bool ok = true;
    for (cplx w : etas) ok = ok && std::abs(w - z) > 0.15;
    for (double th : {0.3, 2.2, 0.7, -2.0}) ok = ok && std::abs(std::arg(z * std::polar(1.0, -th))) > 0.1;
    if (ok) etas.push_back(z);
  }
  return etas;
}

}  // namespace

TEST_CASE("real parametrization") {
  auto p0 = real_parametrization(0);
  REQUIRE(p0.size() == 2);
  CHECK(p0[0] == (CPoly{1.0, 1.0}));
  CHECK(p0[1] == (CPoly{I, -I}));
  auto p1 = real_parametrization(1);
  REQUIRE(p1.size() == 3);
  CHECK(p1[0] == (CPoly{1.0, 0.0, 1.0}));
  CHECK(p1[1] == (CPoly{I, 0.0, -I}));
  CHECK(p1[2] == (CPoly{0.0, 1.0}));
  CHECK(real_parametrization(2).size() == 4);
  for (int g = 0; g <= 5; ++g) {
    auto p = real_parametrization(g);
    CHECK(p.size() == static_cast<std::size_t>(g + 2));
    for (const auto& q : p) CHECK(is_star_symmetric(q, g + 1));
    // Round trip through real coordinates.
    std::mt19937_64 rng(g);
    std::normal_distribution<double> nd;
    std::vector<double> x(g + 2);
    CPoly b;
    for (int k = 0; k < g + 2; ++k) {
      x[k] = nd(rng);
      b += x[k] * p[k];
    }
    auto y = real_coordinates(b, g);
    for (int k = 0; k < g + 2; ++k) CHECK(std::abs(x[k] - y[k]) < 1e-14);
  }
}

TEST_CASE("genus 0 basis spans the full space") {
  auto c = SpectralCurve::from_roots({});
  auto bb = compute_b_basis(c, adapted_homology(c), {});
  CHECK(span_distance(bb.b1, bb.b2, CPoly{1.0, 1.0}, CPoly{I, -I}) < 1e-10);
  CHECK(bb.gram[0][0] * bb.gram[1][1] - bb.gram[0][1] * bb.gram[1][0] > 1e-12);
}

TEST_CASE("eta = 0.5 basis has vanishing A-periods and is stable under refinement") {
  auto c = SpectralCurve::from_roots({0.5});
  auto at = adapted_homology(c);
  BSpaceReport rep;
  auto bb = compute_b_basis(c, at, {}, &rep);
  CHECK(bb.a_period_residual < 1e-8);
  for (const CPoly* b : {&bb.b1, &bb.b2}) {
    CHECK(is_star_symmetric(*b, 2));
    for (cplx p : a_periods(c, *b, at, {})) CHECK(std::abs(p) < 1e-8);
  }
  CHECK(rep.singular_values.size() == 1);
  CHECK(rep.a_period_imag < 1e-8);
  QuadratureConfig dbl;
  dbl.base_nodes = 512;
  auto bb2 = compute_b_basis(c, at, dbl);
  CHECK(span_distance(bb.b1, bb.b2, bb2.b1, bb2.b2) < 1e-8);
}

TEST_CASE("dimension law and purely imaginary periods on random curves") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 12; ++trial) {
    const int g = 1 + trial % 4;
    auto c = SpectralCurve::from_roots(random_etas(rng, g));
    auto at = full_atlas(c, std::polar(1.0, 0.3), std::polar(1.0, 2.2));
    auto m = atlas_moments(c, at, {});
    BSpaceReport rep;
    auto bb = compute_b_basis(c, m, &rep);
    REQUIRE(rep.singular_values.size() == static_cast<std::size_t>(g));
    CHECK(rep.singular_values.back() > 1e-8 * rep.singular_values.front());
    CHECK(rep.a_period_imag < 1e-8);
    CHECK(bb.a_period_residual < 1e-8);
    for (const CPoly* b : {&bb.b1, &bb.b2}) {
      auto pv = phi_vector(m, *b);
      for (cplx r : pv.raw) CHECK(std::abs(r.real()) < 1e-8);
      CHECK(pv.residual_imag < 1e-8);
    }
  }
}

TEST_CASE("phi is unchanged when gamma is rerouted around infinity") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    const int g = 1 + trial % 3;
    auto c = SpectralCurve::from_roots(random_etas(rng, g));
    const cplx l1 = std::polar(1.0, 0.7), l2 = std::polar(1.0, -2.0);
    auto at0 = full_atlas(c, l1, l2);
    auto atinf = full_atlas(c, l1, l2, {}, GammaRoute::AroundInfinity);
    auto m0 = atlas_moments(c, at0, {});
    auto minf = atlas_moments(c, atinf, {});
    auto bb = compute_b_basis(c, m0);
    for (const CPoly* b : {&bb.b1, &bb.b2}) {
      auto p0 = phi_vector(m0, *b), pinf = phi_vector(minf, *b);
      for (std::size_t k = 0; k < p0.entries.size(); ++k) CHECK(std::abs(p0.entries[k] - pinf.entries[k]) < 1e-8);
    }
  }
}
