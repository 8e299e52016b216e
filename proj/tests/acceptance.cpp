// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each section is a self-contained end-to-end check at desk scale.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sdde/brownian.hpp"
#include "sdde/euler.hpp"
#include "sdde/oracle.hpp"
#include "sdde/philox.hpp"
#include "sdde/probe.hpp"
#include "sdde/rate.hpp"

using namespace sdde;

namespace {

int g_failures = 0;

class Criterion {
  public:
    explicit Criterion(const char* name) : name_(name), start_(clock_t::now()) {}

    void check(bool ok, const char* what) {
        if (!ok) {
            std::printf("    FAIL: %s\n", what);
            ok_ = false;
        }
    }
    void check_close(double got, double want, double tol, const char* what) {
        if (!(std::abs(got - want) <= tol)) {
            std::printf("    FAIL: %s (got %.6g, want %.6g +- %.3g)\n", what, got, want, tol);
            ok_ = false;
        }
    }

    ~Criterion() {
        const double secs =
            std::chrono::duration<double>(clock_t::now() - start_).count();
        std::printf("[%s] %s (%.1f s)\n", ok_ ? "PASS" : "FAIL", name_, secs);
        std::fflush(stdout);
        if (!ok_) ++g_failures;
    }

  private:
    using clock_t = std::chrono::steady_clock;
    const char* name_;
    clock_t::time_point start_;
    bool ok_ = true;
};

RateExperimentConfig standard_config(const char* label, long paths, std::uint64_t seed) {
    RateExperimentConfig cfg;
    cfg.model_label = label;
    cfg.n0 = 8;
    cfg.num_levels = 7; // 8 * 2^{0..6}
    cfg.paths = paths;
    cfg.ref_multiplier = 16;
    cfg.seed = seed;
    return cfg;
}

void criterion_1_deterministic_exactness() {
    Criterion c("1 deterministic exactness: drift_only matches X(t)=1+t to 1e-12");
    const auto model = builtin("drift_only");
    for (long n = 4; n <= 256; n *= 2) {
        const auto noise = BrownianGrid::sample_path(model->noise_dim(), model->horizon(), n, 77);
        const auto path = integrate(model, noise, n);
        double worst = 0.0;
        for (long j = 0; j <= path.num_steps(); ++j) {
            const double t = double(j) / double(n);
            const double exact = 1.0 + t;
            worst = std::max(worst, std::abs(path.at1(j) - exact) / exact);
        }
        char what[64];
        std::snprintf(what, sizeof what, "relative error at n=%ld", n);
        c.check(worst < 1e-12, what);
    }
}

void criterion_2_noise_consistency() {
    Criterion c("2 noise consistency: coarsen/refine identities and increment variance");
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto fine = BrownianGrid::sample_path(1, 1.0, 64, seed);
        const auto c2 = fine.coarsen(2);
        const auto back = c2.refine(2);
        const auto c4 = fine.coarsen(4);
        const auto c4_via2 = c2.coarsen(2);
        double worst = 0.0;
        for (long j = 0; j < 64; ++j)
            worst = std::max(worst, std::abs(back.increment(j)[0] - fine.increment(j)[0]));
        for (long j = 0; j < 16; ++j)
            worst = std::max(worst, std::abs(c4.increment(j)[0] - c4_via2.increment(j)[0]));
        if (worst >= 1e-12) {
            c.check(false, "coarsen/refine identity or associativity drifted past 1e-12");
            break;
        }
    }
    // pooled variance of n=4 increments: each is N(0, 1/4); the sample
    // variance of K draws has sd ~ 0.25 * sqrt(2/K)
    const long kPaths = 25000; // 4 increments each -> 1e5 draws
    double sum = 0.0, sum2 = 0.0;
    for (long p = 0; p < kPaths; ++p) {
        const auto g = BrownianGrid::sample_path(1, 1.0, 4, 1234, p);
        for (long j = 0; j < 4; ++j) {
            const double w = g.increment(j)[0];
            sum += w;
            sum2 += w * w;
        }
    }
    const double kDraws = 4.0 * double(kPaths);
    const double var = sum2 / kDraws - (sum / kDraws) * (sum / kDraws);
    const double sigma = 0.25 * std::sqrt(2.0 / kDraws);
    c.check_close(var, 0.25, 3.0 * sigma, "pooled increment variance at n=4");
}

void criterion_3_oracle_equivalence() {
    Criterion c("3 oracle equivalence: Euler at n=2^14 vs method of steps on [0,tau]");
    const auto model = builtin("linear_pure_delay");
    const double tau = model->tau();
    const long n = 1 << 14;
    int agree = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto noise = BrownianGrid::sample_path(model->noise_dim(), model->horizon(), n, seed);
        const auto euler = integrate(model, noise, n);
        const auto oracle = method_of_steps(model, noise);
        double sup = 0.0;
        for (long j = 0; j <= llround(tau * double(n)); ++j)
            sup = std::max(sup, std::abs(euler.at1(j) - oracle.at1(j)));
        if (sup < 1e-3) ++agree;
    }
    char what[64];
    std::snprintf(what, sizeof what, "sup < 1e-3 for %d/50 seeds", agree);
    c.check(agree == 50, what);

    // independent re-summation of the first delay interval at n=8: the
    // scheme there reads only the initial segment, so the recursion is a
    // plain cumulative sum we can replay by hand
    const long n8 = 8;
    const auto noise8 =
        BrownianGrid::sample_path(model->noise_dim(), model->horizon(), n8, 99);
    const auto path8 = integrate(model, noise8, n8);
    const double a = 0.5, b = 0.3;
    double x = 1.0; // xi(0)
    double worst = 0.0;
    for (long j = 0; j * 1 <= llround(tau * n8); ++j) {
        worst = std::max(worst, std::abs(path8.at1(j) - x));
        const double t = double(j) / double(n8);
        const double y = 1.0 + (t - tau); // xi(t - tau) = 1 + t - tau
        x += a * y / double(n8) + b * y * noise8.increment(j)[0];
    }
    c.check(worst < 1e-12, "hand re-summed recursion matches integrate at n=8");
}

void criterion_4_rate_a2() {
    Criterion c("4 a.s. rate under local Lipschitz: gamma_hat in [0.35, 0.65]");
    for (const char* label : {"linear_pure_delay", "delay_gbm"}) {
        const auto rep = run_convergence(standard_config(label, 200, 21));
        char what[96];
        std::snprintf(what, sizeof what, "%s: gamma_hat=%.3f defined, in band, no blow-ups",
                      label, rep.gamma_hat);
        c.check(rep.gamma_defined && rep.blowup_paths == 0 && rep.gamma_hat >= 0.35 &&
                    rep.gamma_hat <= 0.65,
                what);
    }
}

void criterion_5_rate_a3() {
    Criterion c("5 a.s. rate under one-sided Lipschitz: monotone_cubic decreasing, slope >= 0.15");
    const auto rep = run_convergence(standard_config("monotone_cubic", 200, 22));
    bool decreasing = true;
    for (size_t l = 1; l < rep.level_stats.size(); ++l)
        decreasing = decreasing && rep.level_stats[l].q50 < rep.level_stats[l - 1].q50;
    c.check(decreasing, "median sup error strictly decreasing across levels");
    char what[64];
    std::snprintf(what, sizeof what, "fitted slope %.3f >= 0.15", rep.gamma_hat);
    c.check(rep.gamma_defined && rep.gamma_hat >= 0.15, what);
    c.check(rep.blowup_paths == 0, "no blow-ups");
}

void criterion_6_convergence_in_probability() {
    Criterion c("6 convergence in probability: delay_gbm exceedance at eps=0.05");
    auto cfg = standard_config("delay_gbm", 400, 23);
    const auto rep = run_convergence(cfg);
    const auto tab = exceedance_table(rep, 0.05);
    c.check(tab.nonincreasing_within_tol, "p_hat nonincreasing within binomial tolerance");
    char what[64];
    std::snprintf(what, sizeof what, "finest-level p_hat %.4f < 0.05", tab.p_hat.back());
    c.check(tab.p_hat.back() < 0.05, what);
}

void criterion_7_as_bound_diagnostic() {
    Criterion c("7 a.s. bound diagnostic: stability for the true rate, growth flag for a slow one");
    // n0 = 32 so every level sits in the asymptotic regime; the coarsest
    // levels of this model decay faster than n^(-1/2), which deflates the
    // bottom-half zeta quantile
    auto cfg = standard_config("linear_pure_delay", 200, 24);
    cfg.n0 = 32;
    cfg.num_levels = 6;
    const auto rep = run_convergence(cfg);
    const auto diag = as_rate_diagnostic(rep, 0.4);
    char what[64];
    std::snprintf(what, sizeof what, "stability ratio %.3f in [0.5, 2]", diag.stability_ratio);
    c.check(diag.stability_ratio >= 0.5 && diag.stability_ratio <= 2.0, what);

    // synthetic profile decaying like n^(-1/4): probed at kappa = 0.4 the
    // scaled errors grow like n^0.15, which the diagnostic must flag
    RateReport synth;
    synth.config = rep.config;
    synth.levels = rep.levels;
    synth.paths = 50;
    for (long p = 0; p < synth.paths; ++p)
        for (long n : synth.levels) synth.errors.push_back(std::pow(double(n), -0.25));
    const auto flag = as_rate_diagnostic(synth, 0.4);
    c.check(flag.growth_flagged, "synthetic n^(-1/4) profile flags growth at kappa=0.4");
}

void criterion_8_condition_probes() {
    Criterion c("8 condition probes: closed-form constants within 5% at N=1e6");
    const long kProbes = 1000000;
    const auto growth = probe_growth(*builtin("pure_sde_gbm"), 2.0, kProbes, 7);
    c.check_close(growth.m_hat, 0.24, 0.05 * 0.24, "pure_sde_gbm growth constant 2*mu+sigma^2");
    const auto lip = probe_lipschitz(*builtin("linear_pure_delay"), 2.0, kProbes, 7);
    c.check_close(lip.c_drift, 0.5, 0.05 * 0.5, "linear_pure_delay drift Lipschitz ratio");
    const auto one = probe_onesided(*builtin("monotone_cubic"), 2.0, kProbes, 7);
    // the sup is 0, approached from below; 5% of the scale of the Lipschitz
    // constant in the delayed argument (= 1) as the absolute yardstick
    c.check(one.c_onesided_x <= 1e-6 && one.c_onesided_x > -0.05,
            "monotone_cubic one-sided constant ~ 0");
}

void criterion_9_cli_determinism() {
    Criterion c("9 CLI determinism: identical config and seed reproduce outputs bitwise");
    const auto run = [](const std::string& args) {
        const std::string cmd =
            std::string(SDDE_CLI_PATH) + " " + args + " > acc_cli_out.txt 2>&1";
        const int status = std::system(cmd.c_str());
        std::ifstream in("acc_cli_out.txt", std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        std::remove("acc_cli_out.txt");
        return std::pair<int, std::string>{status, buf.str()};
    };
    const auto sim1 = run("simulate --model two_delay_mixed --n 64 --seed 31");
    const auto sim2 = run("simulate --model two_delay_mixed --n 64 --seed 31");
    c.check(sim1.first == 0 && sim1.second == sim2.second, "simulate reruns bitwise");

    const auto prb1 = run("probe --model delay_gbm --N 20000 --seed 31");
    const auto prb2 = run("probe --model delay_gbm --N 20000 --seed 31");
    c.check(prb1.first == 0 && prb1.second == prb2.second, "probe reruns bitwise");

    {
        std::ofstream cfg("acc_converge.json", std::ios::binary);
        cfg << R"({"model": "delay_gbm", "n0": 8, "levels": 4, "paths": 30,)"
            << R"( "ref_multiplier": 8, "seed": 31})";
    }
    const auto cv1 = run("converge --config acc_converge.json --format json");
    const std::string rep1 = [] {
        std::ifstream in("rate_report.json", std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }();
    const auto cv2 = run("converge --config acc_converge.json --format json");
    const std::string rep2 = [] {
        std::ifstream in("rate_report.json", std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }();
    c.check(cv1.first == 0 && cv1.second == cv2.second && !rep1.empty() && rep1 == rep2,
            "converge reruns bitwise (console and report file)");
    std::remove("acc_converge.json");
    std::remove("rate_report.json");
    std::remove("quantiles.csv");
}

} // namespace

int main() {
    criterion_1_deterministic_exactness();
    criterion_2_noise_consistency();
    criterion_3_oracle_equivalence();
    criterion_4_rate_a2();
    criterion_5_rate_a3();
    criterion_6_convergence_in_probability();
    criterion_7_as_bound_diagnostic();
    criterion_8_condition_probes();
    criterion_9_cli_determinism();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
