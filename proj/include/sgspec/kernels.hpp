#pragma once

// Data-parallel inner loops of the contour quadrature.
//
// Complex data is passed as structure-of-arrays (separate real and imaginary
// spans) so that the vector variants can load full registers. Every entry
// point has a scalar reference implementation; vector variants are selected
// once at runtime from the CPU feature set and are equivalence-tested against
// the scalar path.

#include <complex>
#include <cstddef>
#include <span>

namespace sgspec::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa);
bool isa_supported(Isa isa);

// The instruction set currently used by the dispatched entry points. The
// default is the widest supported one; SGSPEC_ISA=scalar in the environment
// pins the reference path.
Isa active_isa();
void set_active_isa(Isa isa);  // throws sgspec::Error if unsupported

// out[k] = sum_j coeffs[j] * x[k]^j  (Horner)
void eval_poly(std::span<const cplx> coeffs,
               std::span<const double> xr, std::span<const double> xi,
               std::span<double> outr, std::span<double> outi);

// out[m] = sum_k h[k] * x[k]^m  for m = 0 .. out.size()-1, with compensated
// (TwoSum) accumulation so the result does not depend on the lane layout
// beyond the last bit or two.
void weighted_moments(std::span<const double> hr, std::span<const double> hi,
                      std::span<const double> xr, std::span<const double> xi,
                      std::span<cplx> out);

namespace scalar {
void eval_poly(std::span<const cplx> coeffs,
               std::span<const double> xr, std::span<const double> xi,
               std::span<double> outr, std::span<double> outi);
void weighted_moments(std::span<const double> hr, std::span<const double> hi,
                      std::span<const double> xr, std::span<const double> xi,
                      std::span<cplx> out);
}  // namespace scalar

#if defined(SGSPEC_HAVE_AVX2_KERNELS)
namespace avx2 {
void eval_poly(std::span<const cplx> coeffs,
               std::span<const double> xr, std::span<const double> xi,
               std::span<double> outr, std::span<double> outi);
void weighted_moments(std::span<const double> hr, std::span<const double> hi,
                      std::span<const double> xr, std::span<const double> xi,
                      std::span<cplx> out);
}  // namespace avx2
#endif

}  // namespace sgspec::kernels
