#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sdde/brownian.hpp"
#include "sdde/model.hpp"

namespace sdde {

/// Grid projection kappa(t) = floor(n*t)/n.
struct GridMap {
    long n;
    double operator()(double t) const {
        return std::floor(t * static_cast<double>(n)) / static_cast<double>(n);
    }
    long index(double t) const { return static_cast<long>(std::floor(t * static_cast<double>(n))); }
};

struct IntegrateOptions {
    /// Linear interpolation for custom delays that fall between grid points.
    /// Off by default: the scheme's analysis assumes delays on the lattice.
    bool interpolate_offgrid_delays = false;
    /// Abort threshold on |X|.
    double blowup_limit = 1e12;
};

/// State of the explicit scheme on the grid j/n, plus the coefficients frozen
/// at each step start so the continuous interpolant can be evaluated without
/// re-running the model.
class EulerPath {
  public:
    const ModelPtr& model() const { return model_; }
    long steps_per_unit() const { return n_; }
    long num_steps() const { return steps_; }
    int dim() const { return model_->dim(); }
    const BrownianGrid& noise() const { return noise_; }

    /// Stored value at grid index j (length d).
    std::span<const double> at(long j) const { return {values_.data() + j * dim(), size_t(dim())}; }
    double at1(long j) const { return values_[j * dim()]; }

    /// Drift/diffusion frozen at step j (lengths d and d*m).
    std::span<const double> drift_at(long j) const {
        return {drift_.data() + j * dim(), size_t(dim())};
    }
    std::span<const double> diffusion_at(long j) const {
        const int dm = dim() * model_->noise_dim();
        return {diff_.data() + j * dm, size_t(dm)};
    }

    /// Continuous-time evaluation: xi(t) for t < 0, the stored value on grid
    /// points, and the exact Euler interpolant in between (needs the backing
    /// noise to resolve W_t; off-grid t at the fine resolution throws).
    void eval_continuous(double t, std::span<double> out) const;
    double eval_continuous1(double t) const;

  private:
    friend EulerPath integrate(const ModelPtr&, const BrownianGrid&, long, const IntegrateOptions&);

    ModelPtr model_;
    long n_ = 0;
    long steps_ = 0;
    BrownianGrid noise_; // coarsened view at level n (keeps fine backing data)
    std::vector<double> values_; // [steps+1][d]
    std::vector<double> drift_;  // [steps][d]
    std::vector<double> diff_;   // [steps][d*m]

    EulerPath(ModelPtr model, BrownianGrid noise) : model_(std::move(model)), noise_(std::move(noise)) {}
};

/// Runs the explicit scheme: X(t_{j+1}) = X(t_j) + beta(t_j, Y_j, X_j)/n +
/// alpha(t_j, Y_j, X_j) dW_j, with delayed values read from the initial
/// segment below 0 and from earlier grid values above.
/// Preconditions: n*tau and n*T integral, n divides noise resolution.
EulerPath integrate(const ModelPtr& model, const BrownianGrid& noise, long n,
                    const IntegrateOptions& opts = {});

/// max over the evaluation grid of |a(t) - b(t)| (Euclidean norm in R^d).
/// Both paths must share model label and noise identity.
double sup_error(const EulerPath& a, const EulerPath& b, long eval_grid_n);

/// Sup over the reference grid (resolution ref_n >= path.n, divisible) of the
/// distance between the path's continuous interpolant and reference values
/// laid out as [ref_steps+1][d]. Uses the SIMD kernel for scalar models.
double sup_error_vs_values(const EulerPath& path, std::span<const double> ref_values, long ref_n);

} // namespace sdde
