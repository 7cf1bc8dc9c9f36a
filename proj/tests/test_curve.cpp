#include <doctest.h>

#include "sgspec/curve.hpp"
#include "sgspec/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace sgspec;

namespace {

const cplx I(0, 1);
constexpr double kPi = std::numbers::pi;

std::vector<cplx> circle(cplx center, double r, double th0, int n) {
  std::vector<cplx> out;
  for (int k = 0; k <= n; ++k) out.push_back(center + std::polar(r, th0 + 2 * kPi * k / n));
  return out;
}

std::vector<cplx> random_etas(std::mt19937_64& rng, int g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> etas;
  while (static_cast<int>(etas.size()) < g) {
    const cplx z = std::polar(std::sqrt(0.04 + u(rng) * (0.64 - 0.04)), 2 * kPi * u(rng));
    bool ok = true;
    for (cplx w : etas) ok = ok && std::abs(w - z) > 0.15 && std::abs(std::arg(w / z)) > 0.3;
    if (ok) etas.push_back(z);
  }
  return etas;
}

}  // namespace

TEST_CASE("from_roots examples") {
  auto c0 = SpectralCurve::from_roots({});
  CHECK(c0.genus() == 0);
  CHECK(c0.a() == CPoly{1.0});

  auto c1 = SpectralCurve::from_roots({0.5});
  CHECK(coeff_distance(c1.a(), CPoly{-1.0, 2.5, -1.0}) < 1e-15);
  CHECK(c1.validate().valid);

  CHECK_THROWS_AS(SpectralCurve::from_roots({0.5, 0.5}), Error);
  try {
    SpectralCurve::from_roots({0.5, 0.5});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Degeneracy);
  }
  for (cplx bad : {cplx(1.0), cplx(0.0), cplx(0.0, -1.0), cplx(1.2)}) {
    try {
      SpectralCurve::from_roots({bad});
      FAIL("expected a domain error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Domain);
    }
  }
}

TEST_CASE("branch points") {
  auto bp0 = branch_points(SpectralCurve::from_roots({}));
  REQUIRE(bp0.size() == 2);
  CHECK(bp0[0].z == cplx(0.0));
  CHECK(bp0[1].at_infinity);

  auto bp1 = branch_points(SpectralCurve::from_roots({0.5}));
  REQUIRE(bp1.size() == 4);
  CHECK(std::abs(bp1[1].z - 0.5) < 1e-15);
  CHECK(std::abs(bp1[2].z - 2.0) < 1e-15);

  auto bp2 = branch_points(SpectralCurve::from_roots({0.3 * I}));
  // 1 / conj(0.3i) = 1 / (-0.3i) = +i / 0.3
  CHECK(std::abs(bp2[2].z - cplx(0, 1.0 / 0.3)) < 1e-14);
  CHECK(std::abs(bp2[2].z.imag() - 3.3333333333) < 1e-9);
}

TEST_CASE("curve invariants on random root sets") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int g = 1 + trial % 4;
    auto etas = random_etas(rng, g);
    auto c = SpectralCurve::from_roots(etas);
    auto v = c.validate();
    CHECK(v.valid);
    CHECK(v.reality_residual <= 1e-14);
    CHECK(v.positivity_min > 0.0);
    CHECK(std::abs(std::abs(c.a().leading()) - 1.0) < 1e-14);
    CHECK(c.a().degree() == 2 * g);
    auto found = root_values(c.a());
    REQUIRE(found.size() == static_cast<std::size_t>(2 * g));
    for (int j = 0; j < g; ++j)
      for (cplx target : {etas[j], 1.0 / std::conj(etas[j])}) {
        double best = 1e300;
        for (cplx w : found) best = std::min(best, std::abs(w - target));
        CHECK(best < 1e-10);
      }
  }
}

TEST_CASE("y_plus is a square root of lambda a and is fixed by rho") {
  auto c = SpectralCurve::from_roots({0.4 + 0.2 * I, -0.5 * I});
  for (int k = 0; k < 64; ++k) {
    const cplx l = std::polar(1.0, -kPi + 2 * kPi * (k + 0.5) / 64);
    const cplx y = c.y_plus(l);
    CHECK(std::abs(y * y - c.lambda_a()(l)) < 1e-12);
    const cplx rho_y = std::conj(y) * std::pow(l, 3);  // conj(y) / conj(l)^(g+1) with |l| = 1
    CHECK(std::abs(rho_y - y) < 1e-12);
  }
}

TEST_CASE("y_continue monodromy") {
  auto c0 = SpectralCurve::from_roots({});
  auto small = y_continue(c0, circle(2.0, 1.0, kPi, 400), 1.0);
  CHECK(std::abs(small.back() - 1.0) < 1e-12);

  auto around0 = y_continue(c0, circle(0.0, 1.0, 0.0, 400), 1.0);
  CHECK(std::abs(around0.back() + 1.0) < 1e-12);

  auto c1 = SpectralCurve::from_roots({0.5});
  auto path = circle(0.5, 0.1, 0.0, 400);
  const cplx y0 = std::sqrt(c1.lambda_a()(path[0]));
  auto loop = y_continue(c1, path, y0);
  CHECK(std::abs(loop.back() + y0) < 1e-12);
  for (std::size_t i = 0; i < path.size(); ++i)
    CHECK(std::abs(loop[i] * loop[i] - c1.lambda_a()(path[i])) < 1e-12);

  CHECK_THROWS_AS(y_continue(c0, circle(0.0, 1.0, 0.0, 400), 2.0), Error);
  try {
    y_continue(c1, circle(0.5, 1e-4, 0.0, 400), std::sqrt(c1.lambda_a()(0.5 + 1e-4)));
    FAIL("expected proximity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Proximity);
  }
  try {
    y_continue(c0, circle(0.0, 1.0, 0.0, 3), 1.0);
    FAIL("expected refinement error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Refinement);
  }
}

TEST_CASE("atlas for genus 0 is empty") {
  auto at = adapted_homology(SpectralCurve::from_roots({}));
  CHECK(at.a_cycles.empty());
  CHECK(at.b_cycles.empty());
}

TEST_CASE("atlas windings for eta = 0.5") {
  auto c = SpectralCurve::from_roots({0.5});
  auto at = adapted_homology(c);
  REQUIRE(at.a_cycles.size() == 1);
  CHECK(winding_number(at.a_cycles[0], 0.5) == 1);
  CHECK(winding_number(at.a_cycles[0], 2.0) == 1);
  CHECK(winding_number(at.a_cycles[0], 0.0) == 0);
  CHECK(winding_number(at.b_cycles[0], 0.0) == 1);
  CHECK(winding_number(at.b_cycles[0], 0.5) == 1);
  CHECK(winding_number(at.b_cycles[0], 2.0) == 0);
  CHECK(at.intersections[0][0] == 1);
}

TEST_CASE("two disjoint A cycles have identity winding matrix") {
  auto c = SpectralCurve::from_roots({0.5, -0.5});
  auto at = adapted_homology(c);
  REQUIRE(at.a_cycles.size() == 2);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      CHECK(winding_number(at.a_cycles[j], c.etas()[k]) == (j == k ? 1 : 0));
      CHECK(winding_number(at.a_cycles[j], c.mirror(k)) == (j == k ? 1 : 0));
      CHECK(at.intersections[j][k] == (j == k ? 1 : 0));
    }
}

TEST_CASE("contours lift to closed loops and start on the sheet convention") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = SpectralCurve::from_roots(random_etas(rng, 1 + trial % 4));
    auto at = adapted_homology(c);
    for (const auto* list : {&at.a_cycles, &at.b_cycles})
      for (const auto& k : *list) {
        CHECK(std::abs(k.y_start * k.y_start - c.lambda_a()(k.start())) < 1e-10);
        auto ys = y_continue(c, k.sample(2000), k.y_start);
        CHECK(std::abs(ys.back() - k.y_start) < 1e-8);
        CHECK(k.min_distance_to(c.finite_branch_points()) >= c.margin());
      }
  }
}

TEST_CASE("sheet value is continuous in the roots for a pinned frame") {
  auto c = SpectralCurve::from_roots({0.5 * I, -0.3});
  const SheetFrame f = default_sheet_frame(c);
  auto c2 = SpectralCurve::from_roots({0.5 * I + 1e-7, -0.3 - 1e-7 * I});
  for (cplx z : {cplx(0.2, 0.7), cplx(-1.0, -0.4), cplx(2.0, 1.0)})
    CHECK(std::abs(sheet_value(c, f, z) - sheet_value(c2, f, z)) < 1e-5);
}

TEST_CASE("gamma paths") {
  auto c0 = SpectralCurve::from_roots({});
  auto gs = gamma_paths(c0, I, -I);
  REQUIRE(gs.size() == 2);
  auto ys = y_continue(c0, gs[0].sample(2000), gs[0].y_start);
  CHECK(std::abs(gs[0].start() - I) < 1e-15);
  CHECK(std::abs(gs[0].end() - I) < 1e-15);
  CHECK(std::abs(ys.back() + gs[0].y_start) < 1e-10);

  CHECK_THROWS_AS(gamma_paths(c0, I, I), Error);
  CHECK_THROWS_AS(gamma_paths(c0, 0.5 * I, -I), Error);

  auto c1 = SpectralCurve::from_roots({0.5});
  const cplx l1 = std::polar(1.0, kPi / 3);
  auto g1 = gamma_paths(c1, l1, -1.0);
  CHECK(g1[0].min_distance_to({0.5, 2.0}) >= c1.margin());
  auto y1 = y_continue(c1, g1[0].sample(2000), g1[0].y_start);
  CHECK(std::abs(y1.back() + g1[0].y_start) < 1e-10);

  auto ginf = gamma_paths(c1, l1, -1.0, GammaRoute::AroundInfinity);
  auto yinf = y_continue(c1, ginf[0].sample(4000), ginf[0].y_start);
  CHECK(std::abs(yinf.back() + ginf[0].y_start) < 1e-10);
}
