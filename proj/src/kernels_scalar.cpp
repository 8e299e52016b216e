#include "sdde/kernels.hpp"

#include <cmath>
#include <vector>

namespace sdde::kernels {
namespace {

bool is_pow2(std::size_t r) { return r != 0 && (r & (r - 1)) == 0; }

// One adjacent-pair reduction stage over a full array; odd tail carries.
void pair_stage(const double* src, std::size_t len, double* dst) {
    const std::size_t pairs = len / 2;
    for (std::size_t i = 0; i < pairs; ++i) dst[i] = src[2 * i] + src[2 * i + 1];
    if (len & 1) dst[pairs] = src[len - 1];
}

void coarsen_sum_scalar(const double* src, std::size_t groups, std::size_t r, double* dst) {
    if (r == 1) {
        for (std::size_t j = 0; j < groups; ++j) dst[j] = src[j];
        return;
    }
    if (is_pow2(r)) {
        // group boundaries stay pair-aligned, so stages run over the whole array
        std::vector<double> buf(groups * r / 2);
        pair_stage(src, groups * r, buf.data());
        std::size_t len = groups * r / 2;
        while (len > groups) {
            pair_stage(buf.data(), len, buf.data());
            len /= 2;
        }
        for (std::size_t j = 0; j < groups; ++j) dst[j] = buf[j];
        return;
    }
    std::vector<double> buf(r);
    for (std::size_t j = 0; j < groups; ++j) {
        pair_stage(src + j * r, r, buf.data());
        std::size_t len = (r + 1) / 2;
        while (len > 1) {
            pair_stage(buf.data(), len, buf.data());
            len = (len + 1) / 2;
        }
        dst[j] = buf[0];
    }
}

double sup_abs_diff_scalar(const double* a, const double* b, std::size_t len) {
    double best = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        const double d = std::fabs(a[i] - b[i]);
        if (d > best) best = d;
    }
    return best;
}

double interp_sup_diff_scalar(double x0, double drift, double diff, double h, const double* dw,
                              const double* ref, std::size_t len) {
    double best = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        const double ti = static_cast<double>(i + 1) * h;
        const double x = (x0 + drift * ti) + diff * dw[i];
        const double d = std::fabs(x - ref[i]);
        if (d > best) best = d;
    }
    return best;
}

} // namespace

const Dispatch& scalar_table() {
    static const Dispatch table{coarsen_sum_scalar, sup_abs_diff_scalar, interp_sup_diff_scalar,
                                "scalar"};
    return table;
}

} // namespace sdde::kernels
