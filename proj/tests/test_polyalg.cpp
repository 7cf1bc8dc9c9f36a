#include <doctest.h>

#include "sgspec/errors.hpp"
#include "sgspec/polyalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace sgspec;

namespace {

cplx I(0, 1);

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

// Sorted by real part, then imaginary part, for multiset comparison.
std::vector<cplx> sorted(std::vector<cplx> v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

// Independent resultant oracle: lc(p)^m lc(q)^n prod (alpha_i - beta_j).
cplx root_product_resultant(const std::vector<cplx>& ra, cplx la, const std::vector<cplx>& rb, cplx lb) {
  cplx r = std::pow(la, static_cast<double>(rb.size())) * std::pow(lb, static_cast<double>(ra.size()));
  for (cplx a : ra)
    for (cplx b : rb) r *= a - b;
  return r;
}

}  // namespace

TEST_CASE("zero polynomial has degree -1 and trailing zeros are trimmed") {
  CHECK(CPoly().degree() == -1);
  CHECK(CPoly({1.0, 2.0, 0.0, 0.0}).degree() == 1);
  CHECK(CPoly({0.0}).is_zero());
}

TEST_CASE("horner evaluation") {
  CPoly p{1.0, -2.0, 3.0};
  CHECK(close(p(2.0), 1.0 - 4.0 + 12.0, 1e-15));
  CHECK(close(p(I), 1.0 - 2.0 * I - 3.0, 1e-15));
}

TEST_CASE("star involution examples") {
  CHECK(star(CPoly{1.0}, 0) == CPoly{1.0});
  CPoly a{-1.0, 2.5, -1.0};
  CHECK(star(a, 2) == a);
  CHECK(is_star_symmetric(a, 2));
  CHECK(star(CPoly{1.0, 2.0}, 1) == CPoly{2.0, 1.0});
  CHECK(star(CPoly{I, 0.0}, 2) == CPoly{0.0, 0.0, -I});
  CHECK_THROWS_AS(star(CPoly{1.0, 1.0, 1.0}, 1), Error);
}

TEST_CASE("star is an involution for every padding") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 50; ++trial) {
    const int deg = trial % 6;
    std::vector<cplx> c(deg + 1);
    for (auto& x : c) x = {nd(rng), nd(rng)};
    CPoly p(c);
    for (int n = deg; n < deg + 3; ++n) CHECK(coeff_distance(star(star(p, n), n), p) < 1e-15);
  }
}

TEST_CASE("roots of simple polynomials") {
  auto r = sorted(root_values(CPoly{-1.0, 0.0, 1.0}));
  REQUIRE(r.size() == 2);
  CHECK(close(r[0], -1.0, 1e-12));
  CHECK(close(r[1], 1.0, 1e-12));

  auto q = sorted(root_values(CPoly{1.0, -2.0 * std::cosh(0.1), 1.0}));
  REQUIRE(q.size() == 2);
  CHECK(close(q[0], std::exp(-0.1), 1e-12));
  CHECK(close(q[1], std::exp(0.1), 1e-12));
  CHECK(std::abs(q[1].real() - 1.105171) < 1e-6);
  CHECK(std::abs(q[0].real() - 0.904837) < 1e-6);

  CHECK(roots(CPoly{5.0}).empty());
  CHECK_THROWS_AS(roots(CPoly{}), Error);
}

TEST_CASE("multiplicities are reported") {
  const std::vector<cplx> rs{0.3, 0.3, -1.0 + I};
  auto rr = roots(CPoly::from_roots(rs));
  REQUIRE(rr.size() == 2);
  int total = 0, double_count = 0;
  for (const auto& r : rr) {
    total += r.multiplicity;
    if (r.multiplicity == 2) {
      ++double_count;
      CHECK(close(r.value, 0.3, 1e-7));
    }
  }
  CHECK(total == 3);
  CHECK(double_count == 1);
}

TEST_CASE("root reconstruction round trip for separated roots up to degree 10") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(0.0, 2 * M_PI), rad(0.3, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 10;
    std::vector<cplx> rs;
    while (static_cast<int>(rs.size()) < n) {
      cplx z = std::polar(rad(rng), ang(rng));
      bool ok = true;
      for (cplx w : rs) ok = ok && std::abs(z - w) > 0.1;
      if (ok) rs.push_back(z);
    }
    const cplx lead = std::polar(rad(rng), ang(rng));
    CPoly p = CPoly::from_roots(rs, lead);
    auto found = root_values(p);
    REQUIRE(found.size() == rs.size());
    CHECK(coeff_distance(CPoly::from_roots(found, p.leading()), p) < 1e-10);
    for (cplx z : rs) {
      double best = 1e300;
      for (cplx w : found) best = std::min(best, std::abs(z - w));
      CHECK(best < 1e-8);
    }
  }
}

TEST_CASE("resultant examples") {
  CHECK(close(resultant(CPoly{0.0, 1.0}, CPoly{-1.0, 1.0}), -1.0, 1e-14));
  CHECK(std::abs(resultant(CPoly{-1.0, 1.0}, CPoly{-1.0, 1.0})) < 1e-14);
  CHECK(std::abs(std::abs(resultant(CPoly{1.0, 1.0}, CPoly{I, -I})) - 2.0) < 1e-14);
  CHECK_THROWS_AS(resultant(CPoly{}, CPoly{}), Error);
}

TEST_CASE("resultant vanishes exactly on common roots and matches the root-product oracle") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  auto rnd = [&] { return cplx(nd(rng), nd(rng)); };
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 8, m = 1 + (trial / 8) % 8;
    std::vector<cplx> ra(n), rb(m);
    for (auto& z : ra) z = rnd();
    for (auto& z : rb) z = rnd();
    const bool share = trial % 2 == 0;
    if (share) rb[0] = ra[0];
    const cplx la = rnd(), lb = rnd();
    const cplx res = resultant(CPoly::from_roots(ra, la), CPoly::from_roots(rb, lb));
    const cplx oracle = root_product_resultant(ra, la, rb, lb);
    // Size of the largest term in the root-product expansion.
    double scale = std::pow(std::abs(la), m) * std::pow(std::abs(lb), n);
    for (cplx a : ra)
      for (cplx b : rb) scale *= std::abs(a) + std::abs(b);
    if (share) {
      CHECK(std::abs(res) < 1e-10 * scale);
    } else {
      CHECK(std::abs(res - oracle) <= 1e-8 * std::abs(oracle));
    }
  }
}

TEST_CASE("wronskian examples and SL(2) invariance") {
  CPoly b1{1.0, 1.0}, b2{I, -I};
  CPoly w = wronskian(b1, b2);
  REQUIRE(w.degree() == 0);
  CHECK(close(w[0], 2.0 * I, 1e-15));
  CHECK(wronskian(b1, b1).is_zero());

  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cplx> c1(4), c2(4);
    for (auto& x : c1) x = {nd(rng), nd(rng)};
    for (auto& x : c2) x = {nd(rng), nd(rng)};
    CPoly p(c1), q(c2);
    const double A = nd(rng), B = nd(rng), C = nd(rng), D = nd(rng);
    CPoly lhs = wronskian(A * p + B * q, C * p + D * q);
    CPoly rhs = (A * D - B * C) * wronskian(p, q);
    CHECK(coeff_distance(lhs, rhs) < 1e-13);
    CHECK(coeff_distance(wronskian(q, p), -1.0 * wronskian(p, q)) < 1e-15);
  }
}
