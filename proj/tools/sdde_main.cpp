#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sdde/brownian.hpp"
#include "sdde/euler.hpp"
#include "sdde/io.hpp"
#include "sdde/model.hpp"
#include "sdde/probe.hpp"
#include "sdde/rate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

int cmd_simulate(const std::string& model_label, long n, std::uint64_t seed,
                 const std::string& out) {
    const sdde::ModelPtr model = sdde::builtin(model_label);
    const sdde::BrownianGrid noise =
        sdde::BrownianGrid::sample_path(model->noise_dim(), model->horizon(), n, seed);
    const sdde::EulerPath path = sdde::integrate(model, noise, n);
    const std::string csv = sdde::path_csv(path);
    if (out.empty()) {
        std::fputs(csv.c_str(), stdout);
    } else {
        sdde::write_file(out, csv);
        std::printf("wrote %s (%ld grid points)\n", out.c_str(), path.num_steps() + 1);
    }
    return kExitOk;
}

int cmd_probe(const std::string& model_label, double R, long N, std::uint64_t seed,
              const std::string& out) {
    if (N < 1) throw sdde::ConfigError("probe count N must be >= 1");
    if (R <= 0.0) throw sdde::ConfigError("box radius R must be positive");
    const sdde::ModelPtr model = sdde::builtin(model_label);
    const auto report = sdde::probe_conditions(*model, R, N, seed);
    const std::string json = sdde::to_json(report);
    if (out.empty()) {
        std::fputs(json.c_str(), stdout);
        std::fputc('\n', stdout);
    } else {
        sdde::write_file(out, json);
        std::printf("wrote %s\n", out.c_str());
    }
    return kExitOk;
}

sdde::RateExperimentConfig parse_converge_config(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw sdde::ConfigError("cannot open config " + file);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw sdde::ConfigError(std::string("config parse error: ") + e.what());
    }
    static const std::set<std::string> allowed = {"model",   "n0",      "levels",
                                                  "paths",   "ref_multiplier", "seed",
                                                  "epsilons", "kappa",  "threads"};
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) throw sdde::ConfigError("unknown config key \"" + key + "\"");
    sdde::RateExperimentConfig cfg;
    if (!j.contains("model")) throw sdde::ConfigError("config needs a \"model\" key");
    cfg.model_label = j.at("model").get<std::string>();
    cfg.n0 = j.value("n0", cfg.n0);
    cfg.num_levels = j.value("levels", cfg.num_levels);
    cfg.paths = j.value("paths", cfg.paths);
    cfg.ref_multiplier = j.value("ref_multiplier", cfg.ref_multiplier);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("epsilons")) cfg.epsilons = j.at("epsilons").get<std::vector<double>>();
    cfg.kappa = j.value("kappa", cfg.kappa);
    cfg.threads = j.value("threads", cfg.threads);
    return cfg;
}

int cmd_converge(sdde::RateExperimentConfig cfg, const std::string& out_dir, bool want_svg) {
    const sdde::ModelPtr model = sdde::builtin(cfg.model_label);
    cfg.validate(*model);
    const sdde::RateReport report = sdde::run_convergence(cfg);

    if (report.gamma_defined)
        std::printf("gamma_hat = %.4f\n", report.gamma_hat);
    else
        std::printf("gamma_hat undefined (errors vanish; scheme exact for this model)\n");
    for (double eps : cfg.epsilons) {
        const auto tab = sdde::exceedance_table(report, eps);
        std::printf("exceedance(eps=%g):", eps);
        for (double p : tab.p_hat) std::printf(" %.4f", p);
        std::printf("  nonincreasing=%s\n", tab.nonincreasing_within_tol ? "yes" : "no");
    }
    if (report.blowup_paths > 0)
        std::printf("warning: %ld path(s) blew up and were excluded from fits\n",
                    report.blowup_paths);

    const std::string base = out_dir.empty() ? std::string(".") : out_dir;
    sdde::write_file(base + "/rate_report.json", sdde::to_json(report));
    sdde::write_file(base + "/quantiles.csv", sdde::quantiles_csv(report));
    if (want_svg) sdde::write_file(base + "/loglog.svg", sdde::loglog_svg(report));
    std::printf("wrote %s/rate_report.json and %s/quantiles.csv\n", base.c_str(), base.c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SDDE Euler scheme simulator and convergence benchmark"};
    app.require_subcommand(1);

    std::string model = "delay_gbm", out, config_file, format = "csv";
    long n = 64, probes = 100000;
    double radius = 2.0;
    std::uint64_t seed = 1;
    int threads = 0;

    auto* sim = app.add_subcommand("simulate", "integrate one path and export it as CSV");
    sim->add_option("--model", model, "registered model label");
    sim->add_option("--n", n, "steps per unit time (n*tau must be integral)");
    sim->add_option("--seed", seed, "noise seed");
    sim->add_option("--out", out, "output CSV file (stdout when omitted)");

    auto* conv = app.add_subcommand("converge", "coupled-level convergence experiment");
    conv->add_option("--config", config_file, "JSON experiment manifest")->required();
    conv->add_option("--out", out, "output directory (default .)");
    conv->add_option("--seed", seed, "override the manifest seed");
    conv->add_option("--threads", threads, "path worker cap (also SDDE_THREADS)");
    conv->add_option("--format", format, "csv|json|svg (svg adds the log-log plot)");

    auto* prb = app.add_subcommand("probe", "sampled certification of the hypothesis sets");
    prb->add_option("--model", model, "registered model label");
    prb->add_option("--R", radius, "box radius");
    prb->add_option("--N", probes, "probe count");
    prb->add_option("--seed", seed, "probe seed");
    prb->add_option("--out", out, "output JSON file (stdout when omitted)");

    auto* lst = app.add_subcommand("list-models", "print registered model labels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (sim->parsed()) return cmd_simulate(model, n, seed, out);
        if (prb->parsed()) return cmd_probe(model, radius, probes, seed, out);
        if (lst->parsed()) {
            for (const auto& label : sdde::registered_labels()) std::printf("%s\n", label.c_str());
            return kExitOk;
        }
        if (conv->parsed()) {
            sdde::RateExperimentConfig cfg = parse_converge_config(config_file);
            if (conv->count("--seed")) cfg.seed = seed;
            if (conv->count("--threads")) cfg.threads = threads;
            if (format != "csv" && format != "json" && format != "svg")
                throw sdde::ConfigError("unknown format \"" + format + "\"");
            return cmd_converge(cfg, out, format == "svg");
        }
    } catch (const sdde::NumericalBlowup& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const sdde::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    }
    return kExitOk;
}
