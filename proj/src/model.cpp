#include "sdde/model.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "sdde/philox.hpp"

namespace sdde {

std::shared_ptr<const SddeModel> SddeModel::make(std::string label, CoefficientField coeffs,
                                                 std::vector<DelaySpec> delays,
                                                 InitialSegment initial, double horizon,
                                                 ConditionClass cond) {
    if (delays.empty()) throw Error("model needs at least one delay spec");
    if (static_cast<int>(delays.size()) != coeffs.k)
        throw Error("delay count does not match coefficient arity k");
    const double tau = delays.front().tau();
    double history = 0.0;
    for (const auto& d : delays) {
        if (d.tau() != tau) throw Error("all delays must share one tau");
        history = std::max(history, d.history());
    }
    if (horizon <= 0.0 || tau <= 0.0) throw Error("horizon and tau must be positive");

    auto model = std::shared_ptr<SddeModel>(new SddeModel());
    model->label_ = std::move(label);
    model->delays_ = std::move(delays);
    model->initial_ = std::move(initial);
    model->user_horizon_ = horizon;
    model->tau_ = tau;
    model->history_ = history;
    model->cond_ = cond;

    // extend a non-multiple horizon to the next delay-lattice point and
    // zero the coefficients past the user horizon
    const double ratio = horizon / tau;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) < 1e-9) {
        model->horizon_ = rounded * tau;
        model->coeffs_ = std::move(coeffs);
    } else {
        model->horizon_ = std::ceil(ratio) * tau;
        CoefficientField ext = coeffs;
        const double cut = horizon;
        ext.drift = [inner = coeffs.drift, cut](double t, std::span<const double> y,
                                                std::span<const double> x, std::span<double> out) {
            if (t < cut) {
                inner(t, y, x, out);
            } else {
                for (auto& v : out) v = 0.0;
            }
        };
        ext.diffusion = [inner = coeffs.diffusion, cut](double t, std::span<const double> y,
                                                        std::span<const double> x,
                                                        std::span<double> out) {
            if (t < cut) {
                inner(t, y, x, out);
            } else {
                for (auto& v : out) v = 0.0;
            }
        };
        model->coeffs_ = std::move(ext);
    }
    return model;
}

namespace {

std::map<std::string, ModelPtr>& custom_registry() {
    static std::map<std::string, ModelPtr> reg;
    return reg;
}

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

ModelPtr make_builtin(const std::string& label) {
    using CF = CoefficientField;
    if (label == "drift_only") {
        return SddeModel::make(
            label, CF::scalar([](double, double, double) { return 1.0; },
                              [](double, double, double) { return 0.0; }, true),
            {DelaySpec::fixed(1.0)}, InitialSegment::constant(1.0, 1.0), 2.0);
    }
    if (label == "pure_sde_gbm") {
        const double mu = 0.1, sigma = 0.2;
        return SddeModel::make(
            label, CF::scalar([mu](double, double, double x) { return mu * x; },
                              [sigma](double, double, double x) { return sigma * x; }),
            {DelaySpec::piecewise_constant(1.0)}, InitialSegment::constant(0.0, 1.0), 1.0);
    }
    if (label == "linear_pure_delay") {
        const double a = 0.5, b = 0.3;
        return SddeModel::make(
            label, CF::scalar([a](double, double y, double) { return a * y; },
                              [b](double, double y, double) { return b * y; }, true),
            {DelaySpec::fixed(0.5)}, InitialSegment::scalar(0.5, [](double t) { return 1.0 + t; }),
            2.0);
    }
    if (label == "delay_gbm") {
        const double mu = 0.1, sigma = 0.2;
        return SddeModel::make(
            label, CF::scalar([mu](double, double y, double x) { return mu * y * x; },
                              [sigma](double, double y, double x) { return sigma * y * x; }),
            {DelaySpec::fixed(0.5)}, InitialSegment::constant(0.5, 1.0), 2.0);
    }
    if (label == "monotone_cubic") {
        return SddeModel::make(
            label, CF::scalar([](double, double y, double x) { return -x * x * x + y; },
                              [](double, double y, double) { return 0.2 * y; }),
            {DelaySpec::fixed(0.5)}, InitialSegment::constant(0.5, 1.0), 1.0,
            ConditionClass::OneSided);
    }
    if (label == "two_delay_mixed") {
        CF c;
        c.d = 1;
        c.m = 1;
        c.k = 2;
        c.drift = [](double, std::span<const double> y, std::span<const double> x,
                     std::span<double> out) { out[0] = 0.3 * y[0] - 0.2 * y[1] - x[0]; };
        c.diffusion = [](double, std::span<const double> y, std::span<const double> x,
                         std::span<double> out) { out[0] = 0.1 * (y[0] + x[0]); };
        return SddeModel::make(label, std::move(c),
                               {DelaySpec::fixed(0.5), DelaySpec::piecewise_constant(0.5)},
                               InitialSegment::constant(0.5, 1.0), 2.0);
    }
    return nullptr;
}

const char* kBuiltinLabels[] = {"drift_only",  "pure_sde_gbm",   "linear_pure_delay",
                                "delay_gbm",   "monotone_cubic", "two_delay_mixed"};

} // namespace

ModelPtr builtin(const std::string& label) {
    {
        std::lock_guard<std::mutex> lock(registry_mutex());
        auto it = custom_registry().find(label);
        if (it != custom_registry().end()) return it->second;
    }
    if (ModelPtr m = make_builtin(label)) return m;
    throw UnknownModel("unknown model \"" + label + "\"");
}

std::vector<std::string> registered_labels() {
    std::vector<std::string> out(std::begin(kBuiltinLabels), std::end(kBuiltinLabels));
    std::lock_guard<std::mutex> lock(registry_mutex());
    for (const auto& [k, v] : custom_registry()) out.push_back(k);
    return out;
}

void register_model(const ModelPtr& model) {
    std::lock_guard<std::mutex> lock(registry_mutex());
    custom_registry()[model->label()] = model;
}

namespace {

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

} // namespace

ValidationReport validate_model(const SddeModel& model, long probes, std::uint64_t seed) {
    ValidationReport rep;
    const double T = model.horizon();
    const int d = model.dim(), m = model.noise_dim(), k = model.num_delays();

    // delay bound and monotonicity on sampled time pairs
    bool bound_ok = true, mono_ok = true;
    std::string bound_detail = "ok", mono_detail = "ok";
    for (long i = 0; i < probes && (bound_ok || mono_ok); ++i) {
        const double t1 = T * philox_uniform(seed, i, 0, 0);
        const double t2 = T * philox_uniform(seed, i, 1, 0);
        const double lo = std::min(t1, t2), hi = std::max(t1, t2);
        for (int q = 0; q < k; ++q) {
            const auto& spec = model.delays()[q];
            double dlo, dhi;
            try {
                dlo = spec.eval(lo);
                dhi = spec.eval(hi);
            } catch (const DelayBoundViolation& e) {
                bound_ok = false;
                bound_detail = e.what();
                continue;
            }
            const double tol = 1e-12 * (1.0 + std::abs(hi));
            if (dlo < -spec.history() - tol || dlo > spec.upper_bound(lo) + tol ||
                dhi > spec.upper_bound(hi) + tol) {
                bound_ok = false;
                bound_detail = "delay bound violated near t=" + std::to_string(hi);
            }
            if (dhi < dlo - tol) {
                mono_ok = false;
                mono_detail = "delay decreases between t=" + std::to_string(lo) + " and " +
                              std::to_string(hi);
            }
        }
    }
    rep.checks.push_back({"DelayBound", bound_ok, bound_detail});
    rep.checks.push_back({"DelayMonotone", mono_ok, mono_detail});

    // coefficient and initial-segment finiteness on a probe box
    bool coeff_ok = true;
    std::string coeff_detail = "ok";
    std::vector<double> y(d * k), x(d), bet(d), alf(d * m);
    for (long i = 0; i < probes && coeff_ok; ++i) {
        const double t = T * philox_uniform(seed, i, 2, 0);
        for (int c = 0; c < d * k; ++c) y[c] = 8.0 * philox_uniform(seed, i, 3 + c, 0) - 4.0;
        for (int c = 0; c < d; ++c) x[c] = 8.0 * philox_uniform(seed, i, 100 + c, 0) - 4.0;
        model.eval_drift(t, y, x, bet);
        model.eval_diffusion(t, y, x, alf);
        if (!all_finite(bet) || !all_finite(alf)) {
            coeff_ok = false;
            coeff_detail = "non-finite coefficient at t=" + std::to_string(t);
        }
    }
    rep.checks.push_back({"CoefficientFinite", coeff_ok, coeff_detail});

    bool init_ok = true;
    std::string init_detail = "ok";
    std::vector<double> xi(d);
    const double C = model.history();
    for (long i = 0; i <= probes && init_ok; ++i) {
        const double t = C > 0.0 ? -C + C * static_cast<double>(i) / static_cast<double>(probes)
                                 : 0.0;
        model.initial().eval(t, xi);
        if (!all_finite(xi)) {
            init_ok = false;
            init_detail = "non-finite initial segment at t=" + std::to_string(t);
        }
    }
    rep.checks.push_back({"InitialSegmentFinite", init_ok, init_detail});

    rep.checks.push_back({"HorizonLattice",
                          std::abs(model.horizon() / model.tau() -
                                   std::round(model.horizon() / model.tau())) < 1e-9,
                          "T=" + std::to_string(model.horizon()) +
                              " tau=" + std::to_string(model.tau())});
    return rep;
}

} // namespace sdde
