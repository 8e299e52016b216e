#include "sdde/euler.hpp"

#include <cmath>

#include "sdde/kernels.hpp"

namespace sdde {

namespace {

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

double sup_norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Delayed value X(delta) served from the initial segment or earlier grid
// values; `values` holds rows 0..known inclusive.
void delayed_value(const SddeModel& model, const std::vector<double>& values, long n, long known,
                   double delta, const IntegrateOptions& opts, std::span<double> out) {
    const int d = model.dim();
    if (delta < 0.0) {
        model.initial().eval(std::max(delta, -model.history()), out);
        return;
    }
    const double s = delta * static_cast<double>(n);
    const long j = std::llround(s);
    if (std::abs(s - static_cast<double>(j)) > 1e-9) {
        if (!opts.interpolate_offgrid_delays)
            throw OffGridDelay("delay value " + std::to_string(delta) + " off the 1/" +
                               std::to_string(n) + " grid");
        const long lo = static_cast<long>(std::floor(s));
        const double w = s - static_cast<double>(lo);
        for (int c = 0; c < d; ++c)
            out[c] = (1.0 - w) * values[lo * d + c] + w * values[(lo + 1) * d + c];
        return;
    }
    if (j > known) throw Error("delay points past the current step"); // cannot happen for admissible delays
    for (int c = 0; c < d; ++c) out[c] = values[j * d + c];
}

} // namespace

EulerPath integrate(const ModelPtr& model, const BrownianGrid& noise, long n,
                    const IntegrateOptions& opts) {
    const double T = model->horizon();
    const double ntau = static_cast<double>(n) * model->tau();
    if (std::abs(ntau - std::round(ntau)) > 1e-9 || std::round(ntau) < 1.0)
        throw DelayGridMisaligned("integrate: n*tau must be a positive integer (n=" +
                                  std::to_string(n) + ", tau=" + std::to_string(model->tau()) +
                                  ")");
    const double nT = static_cast<double>(n) * T;
    if (std::abs(nT - std::round(nT)) > 1e-9) throw GridMisaligned("integrate: n*T not integral");
    if (noise.steps_per_unit() % n != 0)
        throw GridMisaligned("integrate: scheme level does not divide noise level");
    if (noise.dim() != model->noise_dim()) throw GridMisaligned("integrate: noise dimension mismatch");

    EulerPath path(model, noise.steps_per_unit() == n ? noise : noise.coarsen(noise.steps_per_unit() / n));
    path.n_ = n;
    const long steps = std::llround(nT);
    path.steps_ = steps;

    const int d = model->dim(), m = model->noise_dim(), k = model->num_delays();
    path.values_.assign((steps + 1) * d, 0.0);
    path.drift_.assign(steps * d, 0.0);
    path.diff_.assign(steps * d * m, 0.0);

    model->initial().eval(0.0, std::span<double>(path.values_.data(), d));

    const double h = 1.0 / static_cast<double>(n);
    std::vector<double> y(k * d);
    for (long j = 0; j < steps; ++j) {
        const double t = static_cast<double>(j) * h;
        for (int q = 0; q < k; ++q)
            delayed_value(*model, path.values_, n, j, model->delays()[q].eval(t), opts,
                          std::span<double>(y.data() + q * d, d));

        const std::span<const double> x(path.values_.data() + j * d, d);
        const std::span<double> bet(path.drift_.data() + j * d, d);
        const std::span<double> alf(path.diff_.data() + j * d * m, d * m);
        model->eval_drift(t, y, x, bet);
        model->eval_diffusion(t, y, x, alf);
        if (!all_finite(bet) || !all_finite(alf))
            throw NumericalBlowup("non-finite coefficient at step " + std::to_string(j), j);

        const auto dw = path.noise_.increment(j);
        for (int c = 0; c < d; ++c) {
            double v = x[c] + bet[c] * h;
            for (int w = 0; w < m; ++w) v += alf[c * m + w] * dw[w];
            path.values_[(j + 1) * d + c] = v;
        }
        const std::span<const double> next(path.values_.data() + (j + 1) * d, d);
        if (!all_finite(next) || sup_norm2(next) > opts.blowup_limit)
            throw NumericalBlowup("state blow-up at step " + std::to_string(j + 1), j + 1);
    }
    return path;
}

void EulerPath::eval_continuous(double t, std::span<double> out) const {
    const int d = dim(), m = model_->noise_dim();
    if (t < 0.0) {
        if (t < -model_->history() - 1e-12) throw OffGridQuery("t before the initial segment");
        model_->initial().eval(std::max(t, -model_->history()), out);
        return;
    }
    const long j = BrownianGrid::grid_index(t, n_);
    if (j >= 0 && j <= steps_) {
        for (int c = 0; c < d; ++c) out[c] = values_[j * d + c];
        return;
    }
    const GridMap kappa{n_};
    const long j0 = kappa.index(t);
    const double t0 = static_cast<double>(j0) / static_cast<double>(n_);
    // W_t - W_{t0} from the backing fine data; throws when t is off that grid
    std::vector<double> w1(m), w0(m);
    noise_.fine_value_at(t, w1);
    noise_.fine_value_at(t0, w0);
    for (int c = 0; c < d; ++c) {
        double v = values_[j0 * d + c] + drift_[j0 * d + c] * (t - t0);
        for (int w = 0; w < m; ++w) v += diff_[(j0 * d + c) * m + w] * (w1[w] - w0[w]);
        out[c] = v;
    }
}

double EulerPath::eval_continuous1(double t) const {
    double v;
    eval_continuous(t, std::span<double>(&v, 1));
    return v;
}

double sup_error(const EulerPath& a, const EulerPath& b, long eval_grid_n) {
    if (a.model()->label() != b.model()->label())
        throw IncomparablePaths("paths integrate different models");
    if (a.noise().seed() != b.noise().seed() || a.noise().path_index() != b.noise().path_index())
        throw IncomparablePaths("paths use different noise seeds");
    if (eval_grid_n < std::max(a.steps_per_unit(), b.steps_per_unit()) ||
        eval_grid_n % a.steps_per_unit() != 0 || eval_grid_n % b.steps_per_unit() != 0)
        throw GridMisaligned("evaluation grid must refine both paths");
    const double T = a.model()->horizon();
    const long steps = std::llround(static_cast<double>(eval_grid_n) * T);
    const int d = a.dim();
    std::vector<double> va(d), vb(d);
    double best = 0.0;
    for (long i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(eval_grid_n);
        a.eval_continuous(t, va);
        b.eval_continuous(t, vb);
        double s = 0.0;
        for (int c = 0; c < d; ++c) s += (va[c] - vb[c]) * (va[c] - vb[c]);
        best = std::max(best, std::sqrt(s));
    }
    return best;
}

double sup_error_vs_values(const EulerPath& path, std::span<const double> ref_values, long ref_n) {
    const long n = path.steps_per_unit();
    if (ref_n < n || ref_n % n != 0) throw GridMisaligned("reference grid must refine the path");
    const double T = path.model()->horizon();
    const long ref_steps = std::llround(static_cast<double>(ref_n) * T);
    const int d = path.dim(), m = path.model()->noise_dim();
    if (static_cast<long>(ref_values.size()) != (ref_steps + 1) * d)
        throw GridMisaligned("reference value array size mismatch");
    if (path.noise().fine_steps_per_unit() % ref_n != 0)
        throw GridMisaligned("reference grid incompatible with backing noise");

    const long ratio = ref_n / n;
    const double hf = 1.0 / static_cast<double>(ref_n);

    if (d == 1 && m == 1) {
        // per coarse step: kernel over the fine points inside the step
        const auto fine_cum = path.noise().fine_prefix_sums();
        const long fine_ratio = path.noise().fine_steps_per_unit() / ref_n;
        std::vector<double> dw(ratio);
        double best = std::abs(path.at1(0) - ref_values[0]);
        for (long j = 0; j < path.num_steps(); ++j) {
            const double w0 = fine_cum[j * ratio * fine_ratio];
            for (long i = 0; i < ratio; ++i)
                dw[i] = fine_cum[(j * ratio + i + 1) * fine_ratio] - w0;
            const double s = kernels::interp_sup_diff(path.at1(j), path.drift_at(j)[0],
                                                      path.diffusion_at(j)[0], hf, dw.data(),
                                                      ref_values.data() + j * ratio + 1, ratio);
            best = std::max(best, s);
        }
        return best;
    }

    std::vector<double> v(d);
    double best = 0.0;
    for (long i = 0; i <= ref_steps; ++i) {
        const double t = static_cast<double>(i) * hf;
        path.eval_continuous(t, v);
        double s = 0.0;
        for (int c = 0; c < d; ++c) {
            const double diff = v[c] - ref_values[i * d + c];
            s += diff * diff;
        }
        best = std::max(best, std::sqrt(s));
    }
    return best;
}

} // namespace sdde
