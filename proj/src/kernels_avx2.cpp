#include "sdde/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define SDDE_HAVE_AVX2_BUILD 1
#include <immintrin.h>

#include <cmath>
#include <vector>

namespace sdde::kernels {
namespace {

bool is_pow2(std::size_t r) { return r != 0 && (r & (r - 1)) == 0; }

// Adjacent-pair reduction stage; identical association order to the scalar
// stage, so results are bitwise equal.
void pair_stage_avx2(const double* src, std::size_t len, double* dst) {
    const std::size_t pairs = len / 2;
    std::size_t i = 0;
    for (; i + 4 <= pairs; i += 4) {
        const __m256d a = _mm256_loadu_pd(src + 2 * i);
        const __m256d b = _mm256_loadu_pd(src + 2 * i + 4);
        // [a0+a1, b0+b1, a2+a3, b2+b3] -> reorder to adjacent-pair order
        const __m256d h = _mm256_hadd_pd(a, b);
        _mm256_storeu_pd(dst + i, _mm256_permute4x64_pd(h, _MM_SHUFFLE(3, 1, 2, 0)));
    }
    for (; i < pairs; ++i) dst[i] = src[2 * i] + src[2 * i + 1];
    if (len & 1) dst[pairs] = src[len - 1];
}

void coarsen_sum_avx2(const double* src, std::size_t groups, std::size_t r, double* dst) {
    if (!is_pow2(r) || r == 1) {
        scalar_table().coarsen_sum(src, groups, r, dst);
        return;
    }
    std::vector<double> buf(groups * r / 2);
    pair_stage_avx2(src, groups * r, buf.data());
    std::size_t len = groups * r / 2;
    while (len > groups) {
        pair_stage_avx2(buf.data(), len, buf.data());
        len /= 2;
    }
    for (std::size_t j = 0; j < groups; ++j) dst[j] = buf[j];
}

double hmax(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m = _mm_max_pd(lo, hi);
    return std::max(_mm_cvtsd_f64(m), _mm_cvtsd_f64(_mm_unpackhi_pd(m, m)));
}

double sup_abs_diff_avx2(const double* a, const double* b, std::size_t len) {
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d best = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        best = _mm256_max_pd(best, _mm256_andnot_pd(signmask, d));
    }
    double out = hmax(best);
    for (; i < len; ++i) out = std::max(out, std::fabs(a[i] - b[i]));
    return out;
}

double interp_sup_diff_avx2(double x0, double drift, double diff, double h, const double* dw,
                            const double* ref, std::size_t len) {
    const __m256d signmask = _mm256_set1_pd(-0.0);
    const __m256d vx0 = _mm256_set1_pd(x0);
    const __m256d vdrift = _mm256_set1_pd(drift);
    const __m256d vdiff = _mm256_set1_pd(diff);
    const __m256d vh = _mm256_set1_pd(h);
    __m256d idx = _mm256_set_pd(4.0, 3.0, 2.0, 1.0);
    const __m256d four = _mm256_set1_pd(4.0);
    __m256d best = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        const __m256d ti = _mm256_mul_pd(idx, vh);
        const __m256d x = _mm256_add_pd(_mm256_add_pd(vx0, _mm256_mul_pd(vdrift, ti)),
                                        _mm256_mul_pd(vdiff, _mm256_loadu_pd(dw + i)));
        const __m256d d = _mm256_sub_pd(x, _mm256_loadu_pd(ref + i));
        best = _mm256_max_pd(best, _mm256_andnot_pd(signmask, d));
        idx = _mm256_add_pd(idx, four);
    }
    double out = hmax(best);
    for (; i < len; ++i) {
        const double ti = static_cast<double>(i + 1) * h;
        const double x = (x0 + drift * ti) + diff * dw[i];
        out = std::max(out, std::fabs(x - ref[i]));
    }
    return out;
}

} // namespace

bool avx2_available() { return __builtin_cpu_supports("avx2") != 0; }

const Dispatch* avx2_table() {
    if (!avx2_available()) return nullptr;
    static const Dispatch table{coarsen_sum_avx2, sup_abs_diff_avx2, interp_sup_diff_avx2, "avx2"};
    return &table;
}

} // namespace sdde::kernels

#else

namespace sdde::kernels {
bool avx2_available() { return false; }
const Dispatch* avx2_table() { return nullptr; }
} // namespace sdde::kernels

#endif
