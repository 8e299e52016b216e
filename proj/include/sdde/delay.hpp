#pragma once

#include <cmath>
#include <functional>

#include "sdde/errors.hpp"

namespace sdde {

/// Time remapping delta(t) feeding past state into the coefficients.
/// Admissible delays are nondecreasing and satisfy
///   -C <= delta(t) <= floor(t/tau) * tau
/// on the horizon. The two canonical cases are the fixed delay t - tau and
/// the piecewise-constant delay floor(t/tau) * tau.
class DelaySpec {
  public:
    enum class Kind { Fixed, PiecewiseConstant, Custom };

    static DelaySpec fixed(double tau) { return DelaySpec(Kind::Fixed, tau, tau, {}); }

    static DelaySpec piecewise_constant(double tau) {
        return DelaySpec(Kind::PiecewiseConstant, tau, 0.0, {});
    }

    /// Custom delay with declared history depth C; the bound is enforced at
    /// evaluation time since it cannot be checked analytically.
    static DelaySpec custom(std::function<double(double)> f, double tau, double history) {
        return DelaySpec(Kind::Custom, tau, history, std::move(f));
    }

    Kind kind() const { return kind_; }
    double tau() const { return tau_; }
    /// History depth C (how far before 0 the delay may reach).
    double history() const { return history_; }

    /// Largest admissible value at time t: floor(t/tau) * tau.
    double upper_bound(double t) const { return std::floor(t / tau_) * tau_; }

    double eval(double t) const {
        switch (kind_) {
            case Kind::Fixed:
                return t - tau_;
            case Kind::PiecewiseConstant:
                return upper_bound(t);
            case Kind::Custom: {
                const double v = custom_(t);
                // small slack for floor() roundoff at lattice points
                const double tol = 1e-12 * (1.0 + std::abs(t));
                if (v < -history_ - tol || v > upper_bound(t) + tol)
                    throw DelayBoundViolation("custom delay out of [-C, floor(t/tau)*tau] at t=" +
                                              std::to_string(t));
                return v;
            }
        }
        return 0.0; // unreachable
    }

  private:
    DelaySpec(Kind kind, double tau, double history, std::function<double(double)> f)
        : kind_(kind), tau_(tau), history_(history), custom_(std::move(f)) {}

    Kind kind_;
    double tau_;
    double history_;
    std::function<double(double)> custom_;
};

} // namespace sdde
