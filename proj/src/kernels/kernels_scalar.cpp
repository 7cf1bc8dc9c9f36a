#include "sgspec/kernels.hpp"

#include <cassert>
#include <vector>

namespace sgspec::kernels::scalar {

namespace {

// Error-free transformation: s + e == a + b exactly.
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
  for (std::size_t k = 0; k < n; ++k) {
    double ar = coeffs[deg].real(), ai = coeffs[deg].imag();
    for (std::size_t j = deg; j-- > 0;) {
      const double tr = ar * xr[k] - ai * xi[k] + coeffs[j].real();
      const double ti = ar * xi[k] + ai * xr[k] + coeffs[j].imag();
      ar = tr;
      ai = ti;
    }
    outr[k] = ar;
    outi[k] = ai;
  }
}

void weighted_moments(std::span<const double> hr, std::span<const double> hi,
                      std::span<const double> xr, std::span<const double> xi,
                      std::span<cplx> out) {
  const std::size_t n = hr.size();
  const std::size_t nm = out.size();
  std::vector<double> sr(nm, 0.0), si(nm, 0.0), cr(nm, 0.0), ci(nm, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double pr = hr[k], pi = hi[k];
    for (std::size_t m = 0; m < nm; ++m) {
      double s, e;
      two_sum(sr[m], pr, s, e);
      sr[m] = s;
      cr[m] += e;
      two_sum(si[m], pi, s, e);
      si[m] = s;
      ci[m] += e;
      const double tr = pr * xr[k] - pi * xi[k];
      const double ti = pr * xi[k] + pi * xr[k];
      pr = tr;
      pi = ti;
    }
  }
  for (std::size_t m = 0; m < nm; ++m) out[m] = cplx(sr[m] + cr[m], si[m] + ci[m]);
}

}  // namespace sgspec::kernels::scalar
