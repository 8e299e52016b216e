#include <doctest.h>

#include <cmath>

#include "sdde/model.hpp"
#include "sdde/probe.hpp"

using namespace sdde;

namespace {

const long kN = 100000; // unit-test probe budget; acceptance uses 10^6

ModelPtr make_scalar_model(const char* label,
                           std::function<double(double, double, double)> beta,
                           std::function<double(double, double, double)> alpha) {
    return SddeModel::make(label,
                           CoefficientField::scalar(std::move(beta), std::move(alpha)),
                           {DelaySpec::fixed(0.5)}, InitialSegment::constant(0.5, 1.0), 1.0);
}

} // namespace

TEST_CASE("growth constant for pure_sde_gbm approaches 2*mu + sigma^2") {
    // sup of (2 mu x^2 + sigma^2 x^2) / (1 + x^2) on the 4R box is
    // 0.24 * (4R)^2 / (1 + (4R)^2)
    const auto est = probe_growth(*builtin("pure_sde_gbm"), 2.0, kN, 1);
    CHECK(est.holds);
    CHECK(std::abs(est.m_hat - 0.24) < 0.05 * 0.24);
}

TEST_CASE("growth constant of the zero model is 0") {
    const auto zero = make_scalar_model("probe_zero", [](double, double, double) { return 0.0; },
                                        [](double, double, double) { return 0.0; });
    const auto est = probe_growth(*zero, 2.0, 1000, 2);
    CHECK(est.holds);
    CHECK(est.m_hat == 0.0);
}

TEST_CASE("monotone_cubic growth holds with a finite constant") {
    const auto est = probe_growth(*builtin("monotone_cubic"), 2.0, kN, 3);
    CHECK(est.holds);
    CHECK(std::isfinite(est.m_hat));
    // 2x(-x^3 + y) <= 2|x||y|: dominated by a linear-in-|x| bound, so the
    // ratio stays below 2R even though the drift is cubic
    CHECK(est.m_hat < 2.0 * 2.0 + 0.2 * 0.2 * 4.0);
}

TEST_CASE("Lipschitz drift ratio of linear_pure_delay is exactly a = 0.5") {
    const auto est = probe_lipschitz(*builtin("linear_pure_delay"), 2.0, kN, 4);
    CHECK(est.holds);
    CHECK(est.c_drift == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("Lipschitz constants vanish for constant coefficients") {
    const auto constant = make_scalar_model("probe_const", [](double, double, double) { return 1.0; },
                                            [](double, double, double) { return 2.0; });
    const auto est = probe_lipschitz(*constant, 2.0, 1000, 5);
    CHECK(est.holds);
    CHECK(est.c_hat == 0.0);
}

TEST_CASE("monotone_cubic Lipschitz ratio at R = 10 exposes locality (about 3R^2)") {
    const auto est = probe_lipschitz(*builtin("monotone_cubic"), 10.0, kN, 6);
    CHECK(est.holds);
    CHECK(est.c_drift > 0.95 * 300.0);
    CHECK(est.c_drift < 1.01 * 300.0);
}

TEST_CASE("one-sided constants of monotone_cubic: x about 0, y about 1") {
    const auto est = probe_onesided(*builtin("monotone_cubic"), 2.0, kN, 7);
    CHECK(est.holds);
    CHECK(est.c_onesided_x <= 1e-6);  // drift decreasing in x
    CHECK(est.c_onesided_x > -1e-3);  // and the sup approaches 0 from below
    CHECK(est.c_lipschitz_y == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("one-sided constant of a linear drift ax is 2a") {
    const auto linear = make_scalar_model("probe_linear_x",
                                          [](double, double, double x) { return 0.7 * x; },
                                          [](double, double, double) { return 0.0; });
    const auto est = probe_onesided(*linear, 2.0, 10000, 8);
    // close pairs cancel catastrophically in 0.7*x - 0.7*x', so the exact
    // ratio 2a = 1.4 is recovered only to ~1e-10 relative
    CHECK(est.c_onesided_x == doctest::Approx(1.4).epsilon(1e-8));
}

TEST_CASE("one-sided constant of delay_gbm at R = 2 is 2*mu*R = 0.4") {
    const auto est = probe_onesided(*builtin("delay_gbm"), 2.0, kN, 9);
    CHECK(est.holds);
    CHECK(std::abs(est.c_onesided_x - 0.4) < 0.05 * 0.4);
}

TEST_CASE("monotonicity constant of pure_sde_gbm is exactly 2*mu + sigma^2") {
    const auto est = probe_monotonicity_C3(*builtin("pure_sde_gbm"), 2.0, 10000, 10);
    CHECK(est.holds);
    CHECK(est.l_hat == doctest::Approx(0.24).epsilon(1e-8));
}

TEST_CASE("monotonicity holds with finite constant for two_delay_mixed") {
    const auto est = probe_monotonicity_C3(*builtin("two_delay_mixed"), 2.0, kN, 11);
    CHECK(est.holds);
    CHECK(std::isfinite(est.l_hat));
}

TEST_CASE("x-free diffusion with decreasing drift gives a nonpositive L_R") {
    const auto monotone = make_scalar_model("probe_decreasing",
                                            [](double, double, double x) { return -2.0 * x; },
                                            [](double, double y, double) { return 0.3 * y; });
    const auto est = probe_monotonicity_C3(*monotone, 2.0, kN, 12);
    CHECK(est.holds);
    CHECK(est.l_hat <= 1e-12);
}

TEST_CASE("continuity in y holds for every builtin and fails for a jump") {
    for (const auto& label : registered_labels())
        CHECK(probe_continuity_C5(*builtin(label), 2.0, 20000, 13));

    const auto jump = make_scalar_model("probe_jump",
                                        [](double, double y, double) { return y > 0.0 ? 1.0 : 0.0; },
                                        [](double, double, double) { return 0.0; });
    CHECK_FALSE(probe_continuity_C5(*jump, 2.0, 20000, 14));

    const auto const_y = make_scalar_model("probe_const_y",
                                           [](double, double, double x) { return x; },
                                           [](double, double, double) { return 1.0; });
    CHECK(probe_continuity_C5(*const_y, 2.0, 20000, 15));
}

TEST_CASE("full report is deterministic and carries all conditions") {
    const auto model = builtin("pure_sde_gbm");
    const auto a = probe_conditions(*model, 2.0, 20000, 99);
    const auto b = probe_conditions(*model, 2.0, 20000, 99);
    REQUIRE(a.results.size() == b.results.size());
    for (size_t i = 0; i < a.results.size(); ++i) {
        CHECK(a.results[i].holds_on_sample == b.results[i].holds_on_sample);
        CHECK(a.results[i].estimated_constant == b.results[i].estimated_constant);
    }
    for (const char* name : {"C1", "C2", "C3", "C4", "C5", "A1", "A2", "A3"})
        CHECK_NOTHROW(a.find(name));
    CHECK(to_json(a) == to_json(b));
}

TEST_CASE("estimates grow monotonically with the sample size") {
    const auto model = builtin("delay_gbm");
    const auto small = probe_lipschitz(*model, 2.0, 5000, 21);
    const auto large = probe_lipschitz(*model, 2.0, 50000, 21);
    CHECK(large.c_hat >= small.c_hat);
}
