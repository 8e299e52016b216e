#include "sdde/oracle.hpp"

#include <cmath>

namespace sdde {

long ReferencePath::num_steps() const {
    return std::llround(static_cast<double>(n) * model->horizon());
}

bool oracle_available(const SddeModel& model) { return model.coeffs().state_free; }

namespace {

// Y(t) for the oracle: all delayed arguments are already-known values, read
// from xi below 0 and from previously computed rows above. Returns false when
// a delay points at the row currently being computed (piecewise-constant
// delay evaluated exactly on a lattice point), in which case the caller falls
// back to a left-point step.
bool oracle_delayed(const SddeModel& model, const std::vector<double>& values, long n, long known,
                    double t, std::vector<double>& y) {
    const int d = model.dim();
    for (int q = 0; q < model.num_delays(); ++q) {
        const double delta = model.delays()[q].eval(t);
        std::span<double> out(y.data() + q * d, d);
        if (delta < 0.0) {
            model.initial().eval(std::max(delta, -model.history()), out);
            continue;
        }
        const long j = BrownianGrid::grid_index(delta, n);
        if (j < 0) throw OffGridDelay("oracle: delay off the noise grid");
        if (j > known) return false;
        for (int c = 0; c < d; ++c) out[c] = values[j * d + c];
    }
    return true;
}

} // namespace

ReferencePath method_of_steps(const ModelPtr& model, const BrownianGrid& noise) {
    if (!oracle_available(*model))
        throw OracleUnavailable("method_of_steps needs state-free coefficients (model \"" +
                                model->label() + "\")");
    const long n = noise.steps_per_unit();
    const double ntau = static_cast<double>(n) * model->tau();
    if (std::abs(ntau - std::round(ntau)) > 1e-9)
        throw DelayGridMisaligned("method_of_steps: noise grid does not resolve the delay lattice");

    ReferencePath ref;
    ref.provenance = ReferenceProvenance::ExactSteps;
    ref.n = n;
    ref.model = model;
    ref.seed = noise.seed();
    ref.path_index = noise.path_index();

    const int d = model->dim(), m = model->noise_dim(), k = model->num_delays();
    const long steps = std::llround(static_cast<double>(n) * model->horizon());
    ref.values.assign((steps + 1) * d, 0.0);
    model->initial().eval(0.0, std::span<double>(ref.values.data(), d));

    const double h = 1.0 / static_cast<double>(n);
    // x argument is ignored by state-free coefficients; pass zeros
    std::vector<double> x(d, 0.0), y0(k * d), y1(k * d), b0(d), b1(d), a0(d * m);
    for (long j = 0; j < steps; ++j) {
        const double t0 = static_cast<double>(j) * h;
        const double t1 = static_cast<double>(j + 1) * h;
        oracle_delayed(*model, ref.values, n, j, t0, y0);
        model->eval_drift(t0, y0, x, b0);
        model->eval_diffusion(t0, y0, x, a0);

        // trapezoidal ds term; left-point when the right endpoint's delay
        // lands on the row being computed
        if (oracle_delayed(*model, ref.values, n, j, t1, y1)) {
            model->eval_drift(t1, y1, x, b1);
        } else {
            b1 = b0;
        }

        const auto dw = noise.increment(j);
        for (int c = 0; c < d; ++c) {
            double v = ref.values[j * d + c] + 0.5 * (b0[c] + b1[c]) * h;
            for (int w = 0; w < m; ++w) v += a0[c * m + w] * dw[w];
            ref.values[(j + 1) * d + c] = v;
        }
    }
    return ref;
}

ReferencePath fine_reference(const ModelPtr& model, const BrownianGrid& noise, long n_ref) {
    if (n_ref != noise.steps_per_unit())
        throw GridMisaligned("fine_reference: n_ref must equal the noise resolution");
    EulerPath path = integrate(model, noise, n_ref);
    ReferencePath ref;
    ref.provenance = ReferenceProvenance::FineEuler;
    ref.n = n_ref;
    ref.model = model;
    ref.seed = noise.seed();
    ref.path_index = noise.path_index();
    const long steps = path.num_steps();
    const int d = model->dim();
    ref.values.assign((steps + 1) * d, 0.0);
    for (long j = 0; j <= steps; ++j) {
        const auto row = path.at(j);
        for (int c = 0; c < d; ++c) ref.values[j * d + c] = row[c];
    }
    return ref;
}

} // namespace sdde
