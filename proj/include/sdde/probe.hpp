#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdde/model.hpp"

namespace sdde {

/// Verdict for one hypothesis, certified on a sample only.
struct ConditionResult {
    std::string condition;
    bool holds_on_sample = false;
    double estimated_constant = 0.0;   // max of the defining ratio over probes
    std::vector<double> worst_witness; // probe tuple attaining the max
    std::string note;
};

struct ConditionReport {
    std::string model_label;
    double radius = 0.0;
    long samples = 0;
    std::uint64_t seed = 0;
    std::vector<ConditionResult> results;

    const ConditionResult& find(const std::string& condition) const;
};

struct GrowthEstimate {
    bool holds = false;
    double m_hat = 0.0; // max of (2x.beta + |alpha|^2) / (1 + |x|^2)
    std::vector<double> witness;
};

struct LipschitzEstimate {
    bool holds = false;
    double c_hat = 0.0;   // max of the two defining ratios
    double c_drift = 0.0; // |d beta| / (|dy| + |dx|)
    double c_diff = 0.0;  // |d alpha|^2 / (|dy|^2 + |dx|^2)
    std::vector<double> witness;
};

struct OneSidedEstimate {
    bool holds = false;
    double c_onesided_x = 0.0; // 2(x-x')(beta(x)-beta(x')) / |x-x'|^2
    double c_lipschitz_y = 0.0; // |beta(y)-beta(y')| / |y-y'|
    std::vector<double> witness;
};

struct MonotonicityEstimate {
    bool holds = false;
    double l_hat = 0.0; // (2(x-z).d beta + |d alpha|^2) / |x-z|^2
    std::vector<double> witness;
};

struct BoundEstimate {
    bool holds = false;
    double k_big_hat = 0.0; // sup |beta| (C2)
    double k_small_hat = 0.0; // sup (|beta| + |alpha|) (A1)
};

/// Coercivity constant M_R: (t, y) with |y| <= R, x in a box of radius 4R.
GrowthEstimate probe_growth(const SddeModel& model, double R, long N, std::uint64_t seed);

/// Joint Lipschitz constants c_R in (y, x) on the R-box.
LipschitzEstimate probe_lipschitz(const SddeModel& model, double R, long N, std::uint64_t seed);

/// One-sided (monotone) drift constant in x plus the drift's y-Lipschitz
/// constant on the R-box.
OneSidedEstimate probe_onesided(const SddeModel& model, double R, long N, std::uint64_t seed);

/// Monotonicity constant L_R combining drift and diffusion.
MonotonicityEstimate probe_monotonicity_C3(const SddeModel& model, double R, long N,
                                           std::uint64_t seed);

/// Continuity in the delayed argument, uniform over sampled x: shrinking
/// |y - y'| ladders must drive the coefficient gap toward zero.
bool probe_continuity_C5(const SddeModel& model, double R, long N, std::uint64_t seed);

/// Uniform bounds on the R-box (C2 and A1).
BoundEstimate probe_bounds(const SddeModel& model, double R, long N, std::uint64_t seed);

/// Continuity of the drift in x (C1), same ladder scheme as C5.
bool probe_continuity_C1(const SddeModel& model, double R, long N, std::uint64_t seed);

/// Runs every probe and assembles the full report.
ConditionReport probe_conditions(const SddeModel& model, double R, long N, std::uint64_t seed);

/// JSON rendering of the report (per-condition verdicts and constants).
std::string to_json(const ConditionReport& report);

} // namespace sdde
