// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher
// after a CPU feature check.
#include "sgspec/kernels.hpp"

#include <immintrin.h>

#include <cassert>
#include <vector>

namespace sgspec::kernels::avx2 {

namespace {

inline void two_sum(__m256d a, __m256d b, __m256d& s, __m256d& e) {
  s = _mm256_add_pd(a, b);
  const __m256d bp = _mm256_sub_pd(s, a);
  e = _mm256_add_pd(_mm256_sub_pd(a, _mm256_sub_pd(s, bp)), _mm256_sub_pd(b, bp));
}

inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bp = s - a;
  e = (a - (s - bp)) + (b - bp);
}

}  // namespace

void eval_poly(std::span<const cplx> coeffs,
               std::span<const double> xr, std::span<const double> xi,
               std::span<double> outr, std::span<double> outi) {
  assert(xr.size() == xi.size() && outr.size() >= xr.size() && outi.size() >= xr.size());
  const std::size_t n = xr.size();
  if (coeffs.empty()) {
    for (std::size_t k = 0; k < n; ++k) outr[k] = outi[k] = 0.0;
    return;
  }
  const std::size_t deg = coeffs.size() - 1;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d x_r = _mm256_loadu_pd(xr.data() + k);
    const __m256d x_i = _mm256_loadu_pd(xi.data() + k);
    __m256d ar = _mm256_set1_pd(coeffs[deg].real());
    __m256d ai = _mm256_set1_pd(coeffs[deg].imag());
    for (std::size_t j = deg; j-- > 0;) {
      const __m256d cr = _mm256_set1_pd(coeffs[j].real());
      const __m256d ci = _mm256_set1_pd(coeffs[j].imag());
      const __m256d tr = _mm256_fmsub_pd(ar, x_r, _mm256_fmsub_pd(ai, x_i, cr));
      const __m256d ti = _mm256_fmadd_pd(ar, x_i, _mm256_fmadd_pd(ai, x_r, ci));
      ar = tr;
      ai = ti;
    }
    _mm256_storeu_pd(outr.data() + k, ar);
    _mm256_storeu_pd(outi.data() + k, ai);
  }
  if (k < n) {
    scalar::eval_poly(coeffs, xr.subspan(k), xi.subspan(k), outr.subspan(k), outi.subspan(k));
  }
}

void weighted_moments(std::span<const double> hr, std::span<const double> hi,
                      std::span<const double> xr, std::span<const double> xi,
                      std::span<cplx> out) {
  const std::size_t n = hr.size();
  const std::size_t nm = out.size();
  std::vector<__m256d> sr(nm, _mm256_setzero_pd()), si(nm, _mm256_setzero_pd());
  std::vector<__m256d> cr(nm, _mm256_setzero_pd()), ci(nm, _mm256_setzero_pd());
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d x_r = _mm256_loadu_pd(xr.data() + k);
    const __m256d x_i = _mm256_loadu_pd(xi.data() + k);
    __m256d pr = _mm256_loadu_pd(hr.data() + k);
    __m256d pi = _mm256_loadu_pd(hi.data() + k);
    for (std::size_t m = 0; m < nm; ++m) {
      __m256d s, e;
      two_sum(sr[m], pr, s, e);
      sr[m] = s;
      cr[m] = _mm256_add_pd(cr[m], e);
      two_sum(si[m], pi, s, e);
      si[m] = s;
      ci[m] = _mm256_add_pd(ci[m], e);
      const __m256d tr = _mm256_fmsub_pd(pr, x_r, _mm256_mul_pd(pi, x_i));
      const __m256d ti = _mm256_fmadd_pd(pr, x_i, _mm256_mul_pd(pi, x_r));
      pr = tr;
      pi = ti;
    }
  }

  // Lane reduction, then the scalar tail, all through TwoSum.
  for (std::size_t m = 0; m < nm; ++m) {
    alignas(32) double lr[4], li[4], lcr[4], lci[4];
    _mm256_store_pd(lr, sr[m]);
    _mm256_store_pd(li, si[m]);
    _mm256_store_pd(lcr, cr[m]);
    _mm256_store_pd(lci, ci[m]);
    double accr = 0.0, acci = 0.0, compr = 0.0, compi = 0.0;
    for (int l = 0; l < 4; ++l) {
      double s, e;
      two_sum(accr, lr[l], s, e);
      accr = s;
      compr += e + lcr[l];
      two_sum(acci, li[l], s, e);
      acci = s;
      compi += e + lci[l];
    }
    for (std::size_t t = k; t < n; ++t) {
      // x^m h for the tail node
      double pr = hr[t], pi = hi[t];
      for (std::size_t q = 0; q < m; ++q) {
        const double tr = pr * xr[t] - pi * xi[t];
        const double ti = pr * xi[t] + pi * xr[t];
        pr = tr;
        pi = ti;
      }
      double s, e;
      two_sum(accr, pr, s, e);
      accr = s;
      compr += e;
      two_sum(acci, pi, s, e);
      acci = s;
      compi += e;
    }
    out[m] = cplx(accr + compr, acci + compi);
  }
}

}  // namespace sgspec::kernels::avx2
