#include "sgspec/errors.hpp"
#include "sgspec/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace sgspec::kernels {

namespace {

Isa detect() {
  if (const char* env = std::getenv("SGSPEC_ISA"); env && std::strcmp(env, "scalar") == 0) {
    return Isa::Scalar;
  }
  if (isa_supported(Isa::Avx2)) return Isa::Avx2;
  return Isa::Scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(SGSPEC_HAVE_AVX2_KERNELS)
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw Error(ErrorKind::Domain, std::string("instruction set not supported: ") + isa_name(isa));
  }
  active().store(isa, std::memory_order_relaxed);
}

void eval_poly(std::span<const cplx> coeffs,
               std::span<const double> xr, std::span<const double> xi,
               std::span<double> outr, std::span<double> outi) {
#if defined(SGSPEC_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::Avx2) return avx2::eval_poly(coeffs, xr, xi, outr, outi);
#endif
  scalar::eval_poly(coeffs, xr, xi, outr, outi);
}

void weighted_moments(std::span<const double> hr, std::span<const double> hi,
                      std::span<const double> xr, std::span<const double> xi,
                      std::span<cplx> out) {
#if defined(SGSPEC_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::Avx2) return avx2::weighted_moments(hr, hi, xr, xi, out);
#endif
  scalar::weighted_moments(hr, hi, xr, xi, out);
}

}  // namespace sgspec::kernels
