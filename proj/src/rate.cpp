#include "sdde/rate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include <nlohmann/json.hpp>

#include "sdde/brownian.hpp"
#include "sdde/euler.hpp"

namespace sdde {

double default_kappa(ConditionClass c) {
    return c == ConditionClass::OneSided ? 0.2 : 0.4;
}

std::vector<long> RateExperimentConfig::levels() const {
    std::vector<long> out(num_levels);
    long n = n0;
    for (int l = 0; l < num_levels; ++l, n *= 2) out[l] = n;
    return out;
}

long RateExperimentConfig::n_ref() const {
    return ref_multiplier * n0 * (1L << (num_levels - 1));
}

void RateExperimentConfig::validate(const SddeModel& model) const {
    if (num_levels < 3) throw ConfigError("rate fit needs at least 3 levels");
    if (n0 < 1 || paths < 1 || ref_multiplier < 2)
        throw ConfigError("n0, paths must be positive and ref_multiplier >= 2");
    const double ntau = static_cast<double>(n0) * model.tau();
    if (std::abs(ntau - std::round(ntau)) > 1e-9 || std::round(ntau) < 1.0)
        throw ConfigError("n0 * tau must be a positive integer so every level hits the delay lattice");
    for (double e : epsilons)
        if (e < 0.0) throw ConfigError("epsilon must be nonnegative");
}

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SDDE_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, v.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * v[lo] + w * v[hi];
}

// per-path work: reference + all levels on one shared noise path
void run_path(const ModelPtr& model, const RateExperimentConfig& cfg,
              const std::vector<long>& levels, long p, bool use_oracle, double* err_row,
              bool* blown) {
    const BrownianGrid noise =
        BrownianGrid::sample_path(model->noise_dim(), model->horizon(), cfg.n_ref(), cfg.seed, p);
    ReferencePath ref =
        use_oracle ? method_of_steps(model, noise) : fine_reference(model, noise, cfg.n_ref());
    *blown = false;
    try {
        for (size_t l = 0; l < levels.size(); ++l) {
            EulerPath path = integrate(model, noise, levels[l]);
            err_row[l] = sup_error_vs_values(path, ref.values, ref.n);
        }
    } catch (const NumericalBlowup&) {
        *blown = true;
    }
}

} // namespace

RateReport run_convergence(const RateExperimentConfig& cfg) {
    const ModelPtr model = builtin(cfg.model_label);
    cfg.validate(*model);

    RateReport rep;
    rep.config = cfg;
    rep.levels = cfg.levels();
    rep.paths = cfg.paths;
    const bool use_oracle = oracle_available(*model) && !cfg.force_fine_reference;
    rep.provenance =
        use_oracle ? ReferenceProvenance::ExactSteps : ReferenceProvenance::FineEuler;

    const int L = static_cast<int>(rep.levels.size());
    rep.errors.assign(cfg.paths * L, 0.0);
    std::vector<char> blown(cfg.paths, 0);

    const int threads = std::min<long>(resolve_threads(cfg.threads), cfg.paths);
    std::atomic<long> next{0};
    auto worker = [&] {
        for (;;) {
            const long p = next.fetch_add(1);
            if (p >= cfg.paths) return;
            bool b = false;
            run_path(model, cfg, rep.levels, p, use_oracle, rep.errors.data() + p * L, &b);
            blown[p] = b ? 1 : 0;
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (long p = 0; p < cfg.paths; ++p) rep.blowup_paths += blown[p];

    // per-level quantiles over surviving paths
    std::vector<double> medians(L, 0.0);
    for (int l = 0; l < L; ++l) {
        std::vector<double> col;
        col.reserve(cfg.paths);
        for (long p = 0; p < cfg.paths; ++p)
            if (!blown[p]) col.push_back(rep.error_at(p, l));
        LevelStats s;
        s.n = rep.levels[l];
        s.q25 = quantile(col, 0.25);
        s.q50 = quantile(col, 0.50);
        s.q75 = quantile(col, 0.75);
        s.q99 = quantile(col, 0.99);
        medians[l] = s.q50;
        rep.level_stats.push_back(s);
    }

    // least-squares slope of median log-error against log n, excluding any
    // level too close to the reference resolution
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    long cnt = 0;
    for (int l = 0; l < L; ++l) {
        if (cfg.n_ref() / rep.levels[l] < 4) continue;
        if (!(medians[l] > 0.0)) continue;
        const double x = std::log(static_cast<double>(rep.levels[l]));
        const double y = std::log(medians[l]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (cnt >= 2) {
        const double denom = static_cast<double>(cnt) * sxx - sx * sx;
        rep.gamma_hat = -(static_cast<double>(cnt) * sxy - sx * sy) / denom;
        rep.gamma_defined = true;
    }
    return rep;
}

ExceedanceTable exceedance_table(const RateReport& report, double epsilon) {
    if (epsilon < 0.0) throw ConfigError("epsilon must be nonnegative");
    ExceedanceTable tab;
    tab.epsilon = epsilon;
    const int L = static_cast<int>(report.levels.size());
    const double P = static_cast<double>(report.paths);
    for (int l = 0; l < L; ++l) {
        long count = 0;
        for (long p = 0; p < report.paths; ++p)
            if (report.error_at(p, l) > epsilon) ++count;
        const double ph = static_cast<double>(count) / P;
        tab.p_hat.push_back(ph);
        tab.tolerance.push_back(2.0 * std::sqrt(ph * (1.0 - ph) / P));
    }
    tab.nonincreasing_within_tol = true;
    for (int l = 1; l < L; ++l) {
        const double tol = std::max(tab.tolerance[l - 1], tab.tolerance[l]);
        if (tab.p_hat[l] > tab.p_hat[l - 1] + tol) tab.nonincreasing_within_tol = false;
    }
    return tab;
}

AsRateDiagnostic as_rate_diagnostic(const RateReport& report, double kappa) {
    AsRateDiagnostic diag;
    diag.kappa = kappa;
    const int L = static_cast<int>(report.levels.size());
    const int bottom_end = L / 2;           // levels [0, bottom_end)
    const int top_begin = L - L / 2;        // levels [top_begin, L); odd middle excluded

    std::vector<double> zeta, zeta_bottom, zeta_top;
    long argmax_top = 0;
    for (long p = 0; p < report.paths; ++p) {
        double zmax = 0.0, zb = 0.0, zt = 0.0;
        int arg = 0;
        for (int l = 0; l < L; ++l) {
            const double z =
                std::pow(static_cast<double>(report.levels[l]), kappa) * report.error_at(p, l);
            if (z > zmax) {
                zmax = z;
                arg = l;
            }
            if (l < bottom_end) zb = std::max(zb, z);
            if (l >= top_begin) zt = std::max(zt, z);
        }
        zeta.push_back(zmax);
        zeta_bottom.push_back(zb);
        zeta_top.push_back(zt);
        if (arg == L - 1) ++argmax_top;
    }
    diag.zeta_q50 = quantile(zeta, 0.50);
    diag.zeta_q99 = quantile(zeta, 0.99);
    const double qb = quantile(zeta_bottom, 0.99);
    const double qt = quantile(zeta_top, 0.99);
    diag.stability_ratio = qb > 0.0 ? qt / qb : (qt > 0.0 ? INFINITY : 1.0);

    // growth flag: the scaled errors keep rising toward the finest level
    std::vector<double> level_q99(L, 0.0);
    for (int l = 0; l < L; ++l) {
        std::vector<double> col;
        for (long p = 0; p < report.paths; ++p)
            col.push_back(std::pow(static_cast<double>(report.levels[l]), kappa) *
                          report.error_at(p, l));
        level_q99[l] = quantile(col, 0.99);
    }
    bool rising_top = true;
    for (int l = std::max(1, top_begin); l < L; ++l)
        if (level_q99[l] <= level_q99[l - 1]) rising_top = false;
    diag.growth_flagged =
        rising_top && argmax_top * 2 > report.paths && diag.stability_ratio > 1.1;
    return diag;
}

std::string to_json(const RateReport& rep) {
    nlohmann::ordered_json j;
    j["model"] = rep.config.model_label;
    j["seed"] = rep.config.seed;
    j["paths"] = rep.paths;
    j["n_ref"] = rep.config.n_ref();
    j["reference"] = rep.provenance == ReferenceProvenance::ExactSteps ? "exact_steps" : "fine_euler";
    j["levels"] = rep.levels;
    j["gamma_hat"] = rep.gamma_defined ? nlohmann::ordered_json(rep.gamma_hat)
                                       : nlohmann::ordered_json(nullptr);
    j["blowup_paths"] = rep.blowup_paths;
    j["level_quantiles"] = nlohmann::ordered_json::array();
    for (const auto& s : rep.level_stats) {
        nlohmann::ordered_json q;
        q["n"] = s.n;
        q["q25"] = s.q25;
        q["q50"] = s.q50;
        q["q75"] = s.q75;
        q["q99"] = s.q99;
        j["level_quantiles"].push_back(std::move(q));
    }
    j["exceedance"] = nlohmann::ordered_json::array();
    for (double eps : rep.config.epsilons) {
        const auto tab = exceedance_table(rep, eps);
        nlohmann::ordered_json e;
        e["epsilon"] = eps;
        e["p_hat"] = tab.p_hat;
        e["nonincreasing_within_tol"] = tab.nonincreasing_within_tol;
        j["exceedance"].push_back(std::move(e));
    }
    const double kappa = rep.config.kappa > 0.0
                             ? rep.config.kappa
                             : default_kappa(builtin(rep.config.model_label)->condition_class());
    const auto diag = as_rate_diagnostic(rep, kappa);
    j["as_bound"] = {{"kappa", diag.kappa},
                     {"zeta_q50", diag.zeta_q50},
                     {"zeta_q99", diag.zeta_q99},
                     {"stability_ratio", diag.stability_ratio},
                     {"growth_flagged", diag.growth_flagged}};
    j["errors"] = rep.errors;
    return j.dump(2);
}

std::string quantiles_csv(const RateReport& rep) {
    std::string out = "n,q25,q50,q75,q99";
    for (double eps : rep.config.epsilons) {
        char buf[64];
        std::snprintf(buf, sizeof buf, ",exceedance@%.17g", eps);
        out += buf;
    }
    out += "\n";
    std::vector<ExceedanceTable> tabs;
    for (double eps : rep.config.epsilons) tabs.push_back(exceedance_table(rep, eps));
    for (size_t l = 0; l < rep.level_stats.size(); ++l) {
        const auto& s = rep.level_stats[l];
        char buf[256];
        std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g,%.17g", s.n, s.q25, s.q50, s.q75,
                      s.q99);
        out += buf;
        for (const auto& tab : tabs) {
            std::snprintf(buf, sizeof buf, ",%.17g", tab.p_hat[l]);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

std::string loglog_svg(const RateReport& rep) {
    // median error vs n on log-log axes, one polyline plus a slope label
    const int W = 480, H = 360, ml = 60, mb = 40, mt = 20, mr = 20;
    std::vector<double> xs, ys;
    for (size_t l = 0; l < rep.level_stats.size(); ++l) {
        if (rep.level_stats[l].q50 > 0.0) {
            xs.push_back(std::log10(static_cast<double>(rep.levels[l])));
            ys.push_back(std::log10(rep.level_stats[l].q50));
        }
    }
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"360\" "
                      "viewBox=\"0 0 480 360\">\n<rect width=\"480\" height=\"360\" fill=\"white\"/>\n";
    if (xs.size() >= 2) {
        const double x0 = xs.front(), x1 = xs.back();
        double ylo = ys[0], yhi = ys[0];
        for (double y : ys) {
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
        if (yhi - ylo < 1e-12) yhi = ylo + 1.0;
        auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
        auto py = [&](double y) { return H - mb - (y - ylo) / (yhi - ylo) * (H - mb - mt); };
        svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
        char buf[64];
        for (size_t i = 0; i < xs.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(xs[i]), py(ys[i]));
            svg += buf;
        }
        svg += "\"/>\n";
        for (size_t i = 0; i < xs.size(); ++i) {
            std::snprintf(buf, sizeof buf,
                          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"#1f77b4\"/>\n", px(xs[i]),
                          py(ys[i]));
            svg += buf;
        }
        if (rep.gamma_defined) {
            std::snprintf(buf, sizeof buf,
                          "<text x=\"%d\" y=\"%d\" font-size=\"14\">slope = -%.3f</text>\n", ml + 10,
                          mt + 16, rep.gamma_hat);
            svg += buf;
        }
    }
    svg += "<text x=\"200\" y=\"352\" font-size=\"12\">log10 n</text>\n"
           "<text x=\"8\" y=\"180\" font-size=\"12\" transform=\"rotate(-90 14 180)\">log10 median "
           "error</text>\n</svg>\n";
    return svg;
}

} // namespace sdde
