#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sdde/delay.hpp"
#include "sdde/errors.hpp"

namespace sdde {

/// Prescribed continuous history on [-C, 0]. Deterministic, or a
/// deterministic function of (t, seed) for the seeded-random variant.
class InitialSegment {
  public:
    using Fn = std::function<void(double t, std::span<double> out)>;

    InitialSegment(double history, int d, Fn value)
        : history_(history), d_(d), value_(std::move(value)) {}

    /// Scalar convenience constructor.
    static InitialSegment scalar(double history, std::function<double(double)> f) {
        return InitialSegment(history, 1, [f = std::move(f)](double t, std::span<double> out) {
            out[0] = f(t);
        });
    }

    static InitialSegment constant(double history, double c, int d = 1) {
        return InitialSegment(history, d, [c](double, std::span<double> out) {
            for (auto& v : out) v = c;
        });
    }

    double history() const { return history_; }
    int dim() const { return d_; }

    void eval(double t, std::span<double> out) const { value_(t, out); }

    double eval1(double t) const {
        double v;
        value_(t, std::span<double>(&v, 1));
        return v;
    }

  private:
    double history_;
    int d_;
    Fn value_;
};

/// Drift and diffusion of the model. The delayed block y is laid out as k
/// contiguous segments of length d; the diffusion output is d x m row-major.
struct CoefficientField {
    using Fn = std::function<void(double t, std::span<const double> y, std::span<const double> x,
                                  std::span<double> out)>;

    int d = 1;
    int m = 1;
    int k = 1;
    Fn drift;     // out: d
    Fn diffusion; // out: d*m

    /// True when drift and diffusion ignore the current-state argument x;
    /// enables the exact method-of-steps reference.
    bool state_free = false;

    static CoefficientField scalar(std::function<double(double t, double y, double x)> beta,
                                   std::function<double(double t, double y, double x)> alpha,
                                   bool state_free = false) {
        CoefficientField c;
        c.d = c.m = c.k = 1;
        c.state_free = state_free;
        c.drift = [beta = std::move(beta)](double t, std::span<const double> y,
                                           std::span<const double> x, std::span<double> out) {
            out[0] = beta(t, y[0], x[0]);
        };
        c.diffusion = [alpha = std::move(alpha)](double t, std::span<const double> y,
                                                 std::span<const double> x, std::span<double> out) {
            out[0] = alpha(t, y[0], x[0]);
        };
        return c;
    }
};

/// Hypothesis class a builtin model is designed to satisfy; selects the
/// default exponent for the a.s.-bound diagnostic (0.4 under the local
/// Lipschitz class, 0.2 under the weaker one-sided class).
enum class ConditionClass { LocalLipschitz, OneSided };

/// The delay model: dX = beta(t, Y(t), X(t))dt + alpha(t, Y(t), X(t))dW with
/// Y(t) = (X(delta_1(t)), ..., X(delta_k(t))) and X = xi on [-C, 0].
class SddeModel {
  public:
    /// Builds a model; a horizon that is not a multiple of tau is normalized
    /// by extending to the next multiple with indicator-zeroed coefficients.
    static std::shared_ptr<const SddeModel> make(std::string label, CoefficientField coeffs,
                                                 std::vector<DelaySpec> delays,
                                                 InitialSegment initial, double horizon,
                                                 ConditionClass cond = ConditionClass::LocalLipschitz);

    const std::string& label() const { return label_; }
    const CoefficientField& coeffs() const { return coeffs_; }
    const std::vector<DelaySpec>& delays() const { return delays_; }
    const InitialSegment& initial() const { return initial_; }

    /// Normalized horizon (a multiple of tau).
    double horizon() const { return horizon_; }
    /// Horizon as supplied by the caller (coefficients vanish beyond it).
    double user_horizon() const { return user_horizon_; }
    double tau() const { return tau_; }
    /// History depth C shared by all delays.
    double history() const { return history_; }
    int dim() const { return coeffs_.d; }
    int noise_dim() const { return coeffs_.m; }
    int num_delays() const { return coeffs_.k; }
    ConditionClass condition_class() const { return cond_; }

    void eval_drift(double t, std::span<const double> y, std::span<const double> x,
                    std::span<double> out) const {
        coeffs_.drift(t, y, x, out);
    }
    void eval_diffusion(double t, std::span<const double> y, std::span<const double> x,
                        std::span<double> out) const {
        coeffs_.diffusion(t, y, x, out);
    }

  private:
    SddeModel() = default;

    std::string label_;
    CoefficientField coeffs_;
    std::vector<DelaySpec> delays_;
    InitialSegment initial_{0.0, 1, nullptr};
    double horizon_ = 0.0;
    double user_horizon_ = 0.0;
    double tau_ = 0.0;
    double history_ = 0.0;
    ConditionClass cond_ = ConditionClass::LocalLipschitz;
};

using ModelPtr = std::shared_ptr<const SddeModel>;

/// Registry -------------------------------------------------------------

/// Returns the builtin (or programmatically registered) model for a label.
/// Throws UnknownModel for labels not in the registry.
ModelPtr builtin(const std::string& label);

std::vector<std::string> registered_labels();

/// Registers a custom model under its own label (test and embedding hook).
void register_model(const ModelPtr& model);

/// Validation -----------------------------------------------------------

struct ValidationCheck {
    std::string check;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

/// Samples times and state boxes to check delay bounds, delay monotonicity
/// and coefficient finiteness. Failures are reported, never thrown.
ValidationReport validate_model(const SddeModel& model, long probes, std::uint64_t seed);

} // namespace sdde
