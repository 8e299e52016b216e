#include <doctest.h>

#include <cmath>
#include <vector>

#include "sdde/kernels.hpp"
#include "sdde/philox.hpp"

using namespace sdde;

namespace {

std::vector<double> make_data(std::size_t len, std::uint64_t seed) {
    std::vector<double> v(len);
    for (std::size_t i = 0; i < len; ++i) v[i] = philox_normal(seed, i, 0, 0);
    return v;
}

} // namespace

TEST_CASE("coarsen_sum: equal increments sum to r*c") {
    std::vector<double> src(16, 0.25), dst(8);
    kernels::scalar_table().coarsen_sum(src.data(), 8, 2, dst.data());
    for (double v : dst) CHECK(v == 0.5);
}

TEST_CASE("coarsen_sum: dyadic factor composition is bitwise exact") {
    const auto src = make_data(64, 7);
    std::vector<double> by4(16), by2(32), by2by2(16);
    const auto& k = kernels::scalar_table();
    k.coarsen_sum(src.data(), 16, 4, by4.data());
    k.coarsen_sum(src.data(), 32, 2, by2.data());
    k.coarsen_sum(by2.data(), 16, 2, by2by2.data());
    for (int i = 0; i < 16; ++i) CHECK(by4[i] == by2by2[i]);

    std::vector<double> by8(8), by4by2(8);
    k.coarsen_sum(src.data(), 8, 8, by8.data());
    k.coarsen_sum(by4.data(), 8, 2, by4by2.data());
    for (int i = 0; i < 8; ++i) CHECK(by8[i] == by4by2[i]);
}

TEST_CASE("coarsen_sum: non-power-of-two factor matches plain accumulation") {
    const auto src = make_data(18, 9);
    std::vector<double> dst(6);
    kernels::scalar_table().coarsen_sum(src.data(), 6, 3, dst.data());
    for (int j = 0; j < 6; ++j) {
        const double expect = src[3 * j] + src[3 * j + 1] + src[3 * j + 2];
        CHECK(dst[j] == doctest::Approx(expect).epsilon(1e-15));
    }
}

TEST_CASE("sup_abs_diff matches naive loop") {
    const auto a = make_data(1003, 11);
    const auto b = make_data(1003, 13);
    double expect = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) expect = std::max(expect, std::fabs(a[i] - b[i]));
    CHECK(kernels::scalar_table().sup_abs_diff(a.data(), b.data(), a.size()) == expect);
}

TEST_CASE("interp_sup_diff matches naive loop") {
    const auto dw = make_data(517, 17);
    const auto ref = make_data(517, 19);
    const double x0 = 1.3, drift = -0.7, diff = 0.4, h = 1.0 / 1024.0;
    double expect = 0.0;
    for (std::size_t i = 0; i < dw.size(); ++i) {
        const double ti = static_cast<double>(i + 1) * h;
        expect = std::max(expect, std::fabs((x0 + drift * ti) + diff * dw[i] - ref[i]));
    }
    CHECK(kernels::scalar_table().interp_sup_diff(x0, drift, diff, h, dw.data(), ref.data(),
                                                  dw.size()) == expect);
}

TEST_CASE("simd variants are bitwise equivalent to the scalar reference") {
    std::vector<const kernels::Dispatch*> variants;
    if (const auto* t = kernels::avx2_table()) variants.push_back(t);
    if (const auto* t = kernels::neon_table()) variants.push_back(t);
    if (variants.empty()) {
        MESSAGE("no SIMD variant available on this host; skipping");
        return;
    }
    const auto& ref = kernels::scalar_table();
    for (const auto* simd : variants) {
        CAPTURE(simd->name);
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            // coarsen over several factors including ragged lengths
            for (std::size_t r : {2u, 4u, 8u, 16u, 3u}) {
                const std::size_t groups = 37;
                const auto src = make_data(groups * r, seed);
                std::vector<double> a(groups), b(groups);
                ref.coarsen_sum(src.data(), groups, r, a.data());
                simd->coarsen_sum(src.data(), groups, r, b.data());
                for (std::size_t i = 0; i < groups; ++i) CHECK(a[i] == b[i]);
            }
            for (std::size_t len : {1u, 5u, 64u, 1001u}) {
                const auto a = make_data(len, seed + 100);
                const auto b = make_data(len, seed + 200);
                CHECK(ref.sup_abs_diff(a.data(), b.data(), len) ==
                      simd->sup_abs_diff(a.data(), b.data(), len));
                CHECK(ref.interp_sup_diff(0.9, -1.1, 0.3, 1.0 / 512.0, a.data(), b.data(), len) ==
                      simd->interp_sup_diff(0.9, -1.1, 0.3, 1.0 / 512.0, a.data(), b.data(), len));
            }
        }
    }
}

TEST_CASE("active dispatch table is one of the known variants") {
    const auto& t = kernels::active();
    const std::string name = t.name;
    CHECK((name == "scalar" || name == "avx2" || name == "neon"));
}
