#include <doctest.h>

#include <cmath>

#include "sdde/brownian.hpp"
#include "sdde/euler.hpp"
#include "sdde/model.hpp"

using namespace sdde;

TEST_CASE("eval_delay: canonical cases") {
    CHECK(DelaySpec::fixed(1.0).eval(0.3) == doctest::Approx(-0.7));
    CHECK(DelaySpec::piecewise_constant(1.0).eval(1.8) == doctest::Approx(1.0));
    CHECK(DelaySpec::piecewise_constant(0.5).eval(0.49) == doctest::Approx(0.0));
}

TEST_CASE("delay bound and monotonicity on a dense grid for every builtin") {
    for (const auto& label : registered_labels()) {
        const auto model = builtin(label);
        const double T = model->horizon();
        for (const auto& spec : model->delays()) {
            double prev = -spec.history();
            for (int i = 0; i <= 10000; ++i) {
                const double t = T * static_cast<double>(i) / 10000.0;
                const double v = spec.eval(t);
                CHECK(v >= -spec.history() - 1e-12);
                CHECK(v <= spec.upper_bound(t) + 1e-12);
                CHECK(v >= prev - 1e-12); // nondecreasing
                prev = v;
            }
        }
    }
}

TEST_CASE("custom delay violating the bound throws at evaluation") {
    // delta(t) = t exceeds floor(t/tau)*tau off the lattice
    const auto bad = DelaySpec::custom([](double t) { return t; }, 0.5, 0.0);
    CHECK_THROWS_AS(bad.eval(0.3), DelayBoundViolation);
    CHECK(bad.eval(0.5) == doctest::Approx(0.5)); // on the lattice it is fine
}

TEST_CASE("validate_model: builtin passes, bad custom delay is reported not thrown") {
    const auto good = builtin("delay_gbm");
    CHECK(validate_model(*good, 1000, 42).all_passed());

    const auto bad = SddeModel::make(
        "bad_delay",
        CoefficientField::scalar([](double, double y, double) { return y; },
                                 [](double, double, double) { return 0.0; }),
        {DelaySpec::custom([](double t) { return t; }, 0.5, 0.0)},
        InitialSegment::constant(0.0, 1.0), 1.0);
    const auto rep = validate_model(*bad, 1000, 42);
    CHECK_FALSE(rep.all_passed());
    bool delay_failed = false;
    for (const auto& c : rep.checks)
        if (c.check == "DelayBound" && !c.passed) delay_failed = true;
    CHECK(delay_failed);
}

TEST_CASE("unknown label throws UnknownModel") {
    CHECK_THROWS_AS(builtin("no_such_model"), UnknownModel);
}

TEST_CASE("horizon not a multiple of tau is extended with zeroed coefficients") {
    auto coeffs = CoefficientField::scalar([](double, double y, double) { return 0.5 * y; },
                                           [](double, double y, double) { return 0.3 * y; }, true);
    const auto normalized = SddeModel::make("norm_t", coeffs, {DelaySpec::fixed(0.5)},
                                            InitialSegment::constant(0.5, 1.0), 1.3);
    CHECK(normalized->horizon() == doctest::Approx(1.5));
    CHECK(normalized->user_horizon() == doctest::Approx(1.3));
    CHECK(validate_model(*normalized, 1000, 1).all_passed());

    // restriction to [0, T] matches the same dynamics declared on a lattice
    // horizon, at identical seeds, exactly
    const auto aligned = SddeModel::make("norm_t_ref", coeffs, {DelaySpec::fixed(0.5)},
                                         InitialSegment::constant(0.5, 1.0), 1.5);
    const long n = 10; // 1.3 lies on the 1/10 grid
    const auto noise = BrownianGrid::sample_path(1, 1.5, n, 99);
    const auto pa = integrate(normalized, noise, n);
    const auto pb = integrate(aligned, noise, n);
    for (long j = 0; j <= 13; ++j) CHECK(pa.at1(j) == pb.at1(j));
    // past the user horizon the normalized path is frozen
    CHECK(pa.at1(15) == pa.at1(13));
}

TEST_CASE("initial segment continuity spot-check for builtins") {
    for (const auto& label : registered_labels()) {
        const auto model = builtin(label);
        const double C = model->history();
        if (C <= 0.0) continue;
        double worst = 0.0;
        const int grid = 1 << 12;
        std::vector<double> a(model->dim()), b(model->dim());
        for (int i = 0; i < grid; ++i) {
            const double t0 = -C + C * static_cast<double>(i) / grid;
            const double t1 = -C + C * static_cast<double>(i + 1) / grid;
            model->initial().eval(t0, a);
            model->initial().eval(t1, b);
            for (int c = 0; c < model->dim(); ++c) worst = std::max(worst, std::abs(a[c] - b[c]));
        }
        CHECK(worst < 1e-2); // modulus of continuity at probe scale
    }
}
