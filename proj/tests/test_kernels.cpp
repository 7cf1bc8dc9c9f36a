#include <doctest.h>

#include "sgspec/errors.hpp"
#include "sgspec/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace sgspec;
namespace K = sgspec::kernels;

namespace {

struct Data {
  std::vector<double> xr, xi, hr, hi;
  std::vector<K::cplx> coeffs;
};

Data make_data(std::size_t n, int ncoef, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  Data d;
  for (std::size_t i = 0; i < n; ++i) {
    d.xr.push_back(u(rng));
    d.xi.push_back(u(rng));
    d.hr.push_back(u(rng));
    d.hi.push_back(u(rng));
  }
  for (int k = 0; k < ncoef; ++k) d.coeffs.emplace_back(u(rng), u(rng));
  return d;
}

// Plain complex arithmetic, long double accumulation.
std::vector<std::complex<long double>> moments_oracle(const Data& d, int nm) {
  std::vector<std::complex<long double>> out(nm);
  for (std::size_t i = 0; i < d.xr.size(); ++i) {
    std::complex<long double> x(d.xr[i], d.xi[i]), h(d.hr[i], d.hi[i]), p = h;
    for (int m = 0; m < nm; ++m) {
      out[m] += p;
      p *= x;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("scalar moments match a long-double oracle") {
  for (std::size_t n : {0u, 1u, 3u, 17u, 1000u}) {
    auto d = make_data(n, 1, 42 + n);
    std::vector<K::cplx> out(6);
    K::scalar::weighted_moments(d.hr, d.hi, d.xr, d.xi, out);
    auto ref = moments_oracle(d, 6);
    for (int m = 0; m < 6; ++m) {
      const double s = 1.0 + std::abs(std::complex<double>(ref[m]));
      CHECK(std::abs(out[m] - std::complex<double>(ref[m])) < 1e-13 * s);
    }
  }
}

TEST_CASE("scalar polynomial evaluation matches std::complex horner") {
  auto d = make_data(257, 7, 9);
  std::vector<double> outr(257), outi(257);
  K::scalar::eval_poly(d.coeffs, d.xr, d.xi, outr, outi);
  for (std::size_t i = 0; i < 257; ++i) {
    K::cplx x(d.xr[i], d.xi[i]), acc = 0.0;
    for (int k = 6; k >= 0; --k) acc = acc * x + d.coeffs[k];
    CHECK(std::abs(K::cplx(outr[i], outi[i]) - acc) < 1e-13 * (1.0 + std::abs(acc)));
  }
}

#if defined(SGSPEC_HAVE_AVX2_KERNELS)
TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!K::isa_supported(K::Isa::Avx2)) {
    MESSAGE("CPU without AVX2/FMA; equivalence test skipped");
    return;
  }
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 64u, 1023u, 4096u}) {
    for (int ncoef : {1, 2, 3, 6, 11}) {
      auto d = make_data(n, ncoef, 1000 + n * 13 + ncoef);
      std::vector<double> sr(n), si(n), vr(n), vi(n);
      K::scalar::eval_poly(d.coeffs, d.xr, d.xi, sr, si);
      K::avx2::eval_poly(d.coeffs, d.xr, d.xi, vr, vi);
      for (std::size_t i = 0; i < n; ++i) {
        const double s = 1.0 + std::hypot(sr[i], si[i]);
        CHECK(std::abs(sr[i] - vr[i]) < 1e-14 * s);
        CHECK(std::abs(si[i] - vi[i]) < 1e-14 * s);
      }
      std::vector<K::cplx> ms(ncoef), mv(ncoef);
      K::scalar::weighted_moments(d.hr, d.hi, d.xr, d.xi, ms);
      K::avx2::weighted_moments(d.hr, d.hi, d.xr, d.xi, mv);
      for (int m = 0; m < ncoef; ++m) CHECK(std::abs(ms[m] - mv[m]) < 1e-14 * (1.0 + std::abs(ms[m])));
    }
  }
}
#endif

TEST_CASE("isa selection") {
  CHECK(K::isa_supported(K::Isa::Scalar));
  const K::Isa before = K::active_isa();
  K::set_active_isa(K::Isa::Scalar);
  CHECK(K::active_isa() == K::Isa::Scalar);
  auto d = make_data(100, 4, 77);
  std::vector<K::cplx> a(4), b(4);
  K::weighted_moments(d.hr, d.hi, d.xr, d.xi, a);
  K::scalar::weighted_moments(d.hr, d.hi, d.xr, d.xi, b);
  for (int m = 0; m < 4; ++m) CHECK(a[m] == b[m]);
  if (!K::isa_supported(K::Isa::Avx2)) CHECK_THROWS_AS(K::set_active_isa(K::Isa::Avx2), Error);
  K::set_active_isa(before);
}
