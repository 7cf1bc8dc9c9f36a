#include <doctest.h>

#include "sgspec/errors.hpp"
#include "sgspec/invariants.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace sgspec;

namespace {

const cplx I(0, 1);

BBasis genus0_basis() {
  BBasis b;
  b.b1 = CPoly{1.0, 1.0};
  b.b2 = CPoly{I, -I};
  return b;
}

CPoly random_star(std::mt19937_64& rng, int g) {
  std::normal_distribution<double> nd;
  std::vector<cplx> c(g + 2);
  for (auto& x : c) x = {nd(rng), nd(rng)};
  CPoly b(c);
  return 0.5 * (b + star(b, g + 1));
}

// Residue sum over the roots of b2 computed independently of the library's
// residue routine: a / (b1 b2') at each simple root.
cplx residues_over_b2(const CPoly& a, const CPoly& b1, const CPoly& b2) {
  cplx s = 0.0;
  for (cplx r : root_values(b2)) s += a(r) / (b1(r) * b2.derivative()(r));
  return s;
}

}  // namespace

TEST_CASE("f_degree examples") {
  CHECK(f_degree(CPoly{1.0, 1.0}, CPoly{I, -I}) == 1);
  CHECK(f_degree(CPoly{0.0, 1.0, 1.0}, CPoly{0.0, I, -I}) == 1);
  CHECK_THROWS_AS(f_degree(CPoly{1.0, 1.0}, CPoly{2.0, 2.0}), Error);
  std::mt19937_64 rng(1);
  for (int g = 1; g <= 4; ++g) {
    CPoly b1 = random_star(rng, g), b2 = random_star(rng, g);
    REQUIRE(std::abs(resultant(b1, b2)) > 1e-6);
    CHECK(f_degree(b1, b2) == g + 1);
  }
}

TEST_CASE("discriminant examples") {
  CHECK(std::abs(discriminant_delta(CPoly{1.0, 1.0}, CPoly{I, -I}) - (-2.0)) < 1e-14);
  CHECK(std::abs(discriminant_delta(CPoly{1.0, 1.0}, CPoly{I, I})) < 1e-14);
  CHECK_THROWS_AS(discriminant_delta(CPoly{1.0, 1.0}, CPoly{1.0, 1.0, 1.0}), Error);

  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    std::vector<cplx> r1(n), r2(n);
    for (auto& z : r1) z = {nd(rng), nd(rng)};
    for (auto& z : r2) z = {nd(rng), nd(rng)};
    cplx oracle = 1.0;
    for (cplx x : r1)
      for (cplx y : r2) oracle *= x - y;
    const cplx d = discriminant_delta(CPoly::from_roots(r1, 1.3), CPoly::from_roots(r2, -0.7 * I));
    CHECK(std::abs(d - oracle) < 1e-9 * std::abs(oracle));
  }
}

TEST_CASE("genus 0 residue and level sums") {
  const CPoly a{1.0};
  const auto b = genus0_basis();
  CHECK(std::abs(residue_sum(a, b.b1, b.b2) - (-0.5 * I)) < 1e-14);
  CHECK(std::abs(residue_sum(a, b.b2, b.b1) - (0.5 * I)) < 1e-14);
  CHECK(std::abs(level_sum(a, b.b1, b.b2, {0.0, false}) - (-0.5 * I)) < 1e-14);
  CHECK(std::abs(level_sum(a, b.b1, b.b2, SpherePoint::infinity()) - (-0.5 * I)) < 1e-14);
  CHECK(std::abs(level_sum(a, b.b1, b.b2, {17.3, false}) - (-0.5 * I)) < 1e-9);
  auto m = mobius_act(b, {2.0, 0.0, 0.0, 1.0});
  CHECK(std::abs(residue_sum(a, m.b1, m.b2) - (-0.25 * I)) < 1e-14);
}

TEST_CASE("residue sum rejects a shared root") {
  try {
    residue_sum(CPoly{1.0}, CPoly{1.0, 1.0}, CPoly{I, I});
    FAIL("expected an S-membership error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Degeneracy);
  }
}

TEST_CASE("c polynomials") {
  const auto b = genus0_basis();
  auto [c1, c2] = c_polynomials(CPoly{1.0}, b.b1, b.b2);
  CHECK(std::abs(c1[0] - (-0.5 * I)) < 1e-14);
  CHECK(std::abs(c2[0] - (-0.5)) < 1e-14);
  auto [z1, z2] = c_polynomials(CPoly{}, b.b1, b.b2);
  CHECK(z1.max_abs_coeff() < 1e-15);
  CHECK(z2.max_abs_coeff() < 1e-15);
  CHECK_THROWS_AS(c_polynomials(CPoly{1.0}, CPoly{1.0, 1.0}, CPoly{I, I}), Error);
}

TEST_CASE("residue sum matches the Bezout leading coefficient and closes with the b2 residues") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int g = 1 + trial % 4;
    CPoly a = random_star(rng, 2 * g - 1);  // degree 2g, star-symmetric
    CPoly b1 = random_star(rng, g), b2 = random_star(rng, g);
    const cplx r = residue_sum(a, b1, b2);
    auto [c1, c2] = c_polynomials(a, b1, b2);
    CHECK(coeff_distance(c1 * b2 - c2 * b1, a) < 1e-10);
    CHECK(std::abs(r - c1[g] / b1.leading()) < 1e-8 * (1.0 + std::abs(r)));
    CHECK(std::abs(r + residues_over_b2(a, b1, b2)) < 1e-8 * (1.0 + std::abs(r)));
    CHECK(std::abs(-r - residue_sum(a, b2, b1)) < 1e-8 * (1.0 + std::abs(r)));
  }
}

TEST_CASE("level sums are constant in p, including complex p") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 10; ++trial) {
    const int g = 1 + trial % 3;
    CPoly a = random_star(rng, 2 * g - 1);
    CPoly b1 = random_star(rng, g), b2 = random_star(rng, g);
    const cplx r = residue_sum(a, b1, b2);
    for (int k = 0; k < 20; ++k) {
      const cplx p(3 * nd(rng), k % 2 ? 3 * nd(rng) : 0.0);
      CHECK(std::abs(level_sum(a, b1, b2, {p, false}) - r) < 1e-7 * std::abs(r));
    }
    // The level where f(infinity) = p drops the degree of b1 - p b2.
    const cplx pinf = b1.leading() / b2.leading();
    CHECK(std::abs(level_sum(a, b1, b2, {pinf, false}) - r) < 1e-7 * std::abs(r));
  }
}

TEST_CASE("multiple roots use the cluster contour") {
  // b1 with a double root at 0.5 and b2 coprime to it.
  const CPoly b1 = CPoly::from_roots(std::vector<cplx>{0.5, 0.5, -2.0});
  const CPoly b2 = CPoly::from_roots(std::vector<cplx>{1.0, I, -I});
  const CPoly a{1.0, 0.3, -0.2, 0.1, 0.7};
  const cplx r = residue_sum(a, b1, b2);
  CHECK(std::abs(r + residues_over_b2(a, b1, b2)) < 1e-10);
}

TEST_CASE("mobius action scaling laws") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> nd;
  const auto b = genus0_basis();
  const auto id = mobius_act(b, {1.0, 0.0, 0.0, 1.0});
  CHECK(id.b1 == b.b1);
  CHECK(id.b2 == b.b2);
  CHECK_THROWS_AS(mobius_act(b, {1.0, 2.0, 2.0, 4.0}), Error);
  for (int trial = 0; trial < 50; ++trial) {
    const int g = 1 + trial % 3;
    CPoly a = random_star(rng, 2 * g - 1);
    BBasis bb;
    bb.b1 = random_star(rng, g);
    bb.b2 = random_star(rng, g);
    const Mat2 m{nd(rng), nd(rng), nd(rng), nd(rng)};
    const double det = m[0] * m[3] - m[1] * m[2];
    const auto moved = mobius_act(bb, m);
    const cplx r0 = residue_sum(a, bb.b1, bb.b2), r1 = residue_sum(a, moved.b1, moved.b2);
    CHECK(std::abs(r1 * det - r0) < 1e-8 * std::abs(r0));
    CHECK(coeff_distance(wronskian(moved.b1, moved.b2), det * wronskian(bb.b1, bb.b2)) < 1e-12);
  }
}

TEST_CASE("so2 alignment zeroes b1 at alpha") {
  const auto b = genus0_basis();
  for (double th : {0.0, 0.4, 2.0, -1.3}) {
    const cplx alpha = std::polar(1.0, th);
    const auto r = so2_align(b, alpha);
    CHECK(std::abs(r.b1(alpha)) < 1e-14);
    CHECK(std::abs(residue_sum(CPoly{1.0}, r.b1, r.b2) - (-0.5 * I)) < 1e-14);
  }
}

TEST_CASE("classification labels") {
  auto c0 = SpectralCurve::from_roots({});
  auto l = classify(c0, genus0_basis());
  CHECK_FALSE(l.in_S);
  CHECK(l.in_R);
  CHECK(std::abs(l.residue_sum - (-0.5 * I)) < 1e-14);
  CHECK(l.degree_f == 1);
  CHECK(l.degree_c1 == 0);

  BBasis shared;
  shared.b1 = CPoly{1.0, 1.0};
  shared.b2 = CPoly{I, I};
  auto s = classify(c0, shared);
  CHECK(s.in_S);
  CHECK_FALSE(s.in_R);
}
