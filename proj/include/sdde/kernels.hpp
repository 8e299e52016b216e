#pragma once

#include <cstddef>
#include <string>

namespace sdde::kernels {

// Data-parallel inner loops. Each kernel has a scalar reference and, where
// the host CPU supports it, an AVX2 (or NEON) variant selected at runtime.
// All variants are bitwise-equivalent: they perform the same floating-point
// operations in the same association order (builds disable FP contraction in
// these translation units).

/// Group sums for coarsening: dst[j] = sum of src[j*r .. j*r + r - 1], summed
/// as a balanced adjacent-pairs tree. For power-of-two r this makes
/// coarsening by r identical to repeated coarsening by its factors.
using CoarsenSumFn = void (*)(const double* src, std::size_t groups, std::size_t r, double* dst);

/// max_i |a[i] - b[i]| over len entries (0 for len == 0).
using SupAbsDiffFn = double (*)(const double* a, const double* b, std::size_t len);

/// Sup deviation of the one-step Euler interpolant from reference values:
/// max_i |x0 + drift*(i+1)*h + diff*dw[i] - ref[i]| over len fine substeps,
/// where dw[i] = W(t0 + (i+1)h) - W(t0).
using InterpSupDiffFn = double (*)(double x0, double drift, double diff, double h,
                                   const double* dw, const double* ref, std::size_t len);

struct Dispatch {
    CoarsenSumFn coarsen_sum;
    SupAbsDiffFn sup_abs_diff;
    InterpSupDiffFn interp_sup_diff;
    const char* name;
};

/// Active table: best available ISA unless overridden by SDDE_KERNELS
/// (values: "scalar", "avx2", "neon").
const Dispatch& active();

const Dispatch& scalar_table();
bool avx2_available();
const Dispatch* avx2_table(); // nullptr when unsupported at build or runtime
bool neon_available();
const Dispatch* neon_table();

// Convenience wrappers through the active table.
inline void coarsen_sum(const double* src, std::size_t groups, std::size_t r, double* dst) {
    active().coarsen_sum(src, groups, r, dst);
}
inline double sup_abs_diff(const double* a, const double* b, std::size_t len) {
    return active().sup_abs_diff(a, b, len);
}
inline double interp_sup_diff(double x0, double drift, double diff, double h, const double* dw,
                              const double* ref, std::size_t len) {
    return active().interp_sup_diff(x0, drift, diff, h, dw, ref, len);
}

} // namespace sdde::kernels
