#include "sdde/kernels.hpp"

#if defined(__aarch64__)
#define SDDE_HAVE_NEON_BUILD 1
#include <arm_neon.h>

#include <cmath>
#include <vector>

namespace sdde::kernels {
namespace {

bool is_pow2(std::size_t r) { return r != 0 && (r & (r - 1)) == 0; }

void pair_stage_neon(const double* src, std::size_t len, double* dst) {
    const std::size_t pairs = len / 2;
    std::size_t i = 0;
    for (; i + 2 <= pairs; i += 2) {
        const float64x2_t a = vld1q_f64(src + 2 * i);
        const float64x2_t b = vld1q_f64(src + 2 * i + 2);
        vst1q_f64(dst + i, vpaddq_f64(a, b)); // adjacent-pair sums in order
    }
    for (; i < pairs; ++i) dst[i] = src[2 * i] + src[2 * i + 1];
    if (len & 1) dst[pairs] = src[len - 1];
}

void coarsen_sum_neon(const double* src, std::size_t groups, std::size_t r, double* dst) {
    if (!is_pow2(r) || r == 1) {
        scalar_table().coarsen_sum(src, groups, r, dst);
        return;
    }
    std::vector<double> buf(groups * r / 2);
    pair_stage_neon(src, groups * r, buf.data());
    std::size_t len = groups * r / 2;
    while (len > groups) {
        pair_stage_neon(buf.data(), len, buf.data());
        len /= 2;
    }
    for (std::size_t j = 0; j < groups; ++j) dst[j] = buf[j];
}

double sup_abs_diff_neon(const double* a, const double* b, std::size_t len) {
    float64x2_t best = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        const float64x2_t d = vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        best = vmaxq_f64(best, d);
    }
    double out = vmaxvq_f64(best);
    for (; i < len; ++i) out = std::max(out, std::fabs(a[i] - b[i]));
    return out;
}

double interp_sup_diff_neon(double x0, double drift, double diff, double h, const double* dw,
                            const double* ref, std::size_t len) {
    const float64x2_t vx0 = vdupq_n_f64(x0);
    const float64x2_t vdrift = vdupq_n_f64(drift);
    const float64x2_t vdiff = vdupq_n_f64(diff);
    const float64x2_t vh = vdupq_n_f64(h);
    float64x2_t idx = {1.0, 2.0};
    const float64x2_t two = vdupq_n_f64(2.0);
    float64x2_t best = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        const float64x2_t ti = vmulq_f64(idx, vh);
        const float64x2_t x =
            vaddq_f64(vaddq_f64(vx0, vmulq_f64(vdrift, ti)), vmulq_f64(vdiff, vld1q_f64(dw + i)));
        best = vmaxq_f64(best, vabdq_f64(x, vld1q_f64(ref + i)));
        idx = vaddq_f64(idx, two);
    }
    double out = vmaxvq_f64(best);
    for (; i < len; ++i) {
        const double ti = static_cast<double>(i + 1) * h;
        const double x = (x0 + drift * ti) + diff * dw[i];
        out = std::max(out, std::fabs(x - ref[i]));
    }
    return out;
}

} // namespace

bool neon_available() { return true; }

const Dispatch* neon_table() {
    static const Dispatch table{coarsen_sum_neon, sup_abs_diff_neon, interp_sup_diff_neon, "neon"};
    return &table;
}

} // namespace sdde::kernels

#else

namespace sdde::kernels {
bool neon_available() { return false; }
const Dispatch* neon_table() { return nullptr; }
} // namespace sdde::kernels

#endif
