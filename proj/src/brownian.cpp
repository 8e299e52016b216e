#include "sdde/brownian.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

#include "sdde/kernels.hpp"
#include "sdde/philox.hpp"

namespace sdde {

namespace {

long checked_steps(double T, long n, const char* what) {
    if (n < 1) throw GridMisaligned(std::string(what) + ": n must be >= 1");
    const double s = static_cast<double>(n) * T;
    const long steps = std::llround(s);
    if (steps < 1 || std::abs(s - static_cast<double>(steps)) > 1e-9)
        throw GridMisaligned(std::string(what) + ": n*T is not integral");
    return steps;
}

std::vector<double> prefix(const std::vector<double>& inc, long steps, int m) {
    std::vector<double> cum((steps + 1) * m, 0.0);
    for (long j = 0; j < steps; ++j)
        for (int c = 0; c < m; ++c) cum[(j + 1) * m + c] = cum[j * m + c] + inc[j * m + c];
    return cum;
}

} // namespace

BrownianGrid::BrownianGrid(std::shared_ptr<const Fine> fine, long n) : fine_(std::move(fine)), n_(n) {
    steps_ = fine_->steps / (fine_->n / n);
    if (n_ == fine_->n) {
        inc_empty_ = cum_empty_ = true;
        return;
    }
    const long r = fine_->n / n_;
    const int m = fine_->m;
    inc_.resize(steps_ * m);
    if (m == 1) {
        kernels::coarsen_sum(fine_->inc.data(), steps_, r, inc_.data());
    } else {
        // de-interleave per coordinate, then group-sum
        std::vector<double> col(fine_->steps), out(steps_);
        for (int c = 0; c < m; ++c) {
            for (long j = 0; j < fine_->steps; ++j) col[j] = fine_->inc[j * m + c];
            kernels::coarsen_sum(col.data(), steps_, r, out.data());
            for (long j = 0; j < steps_; ++j) inc_[j * m + c] = out[j];
        }
    }
    cum_ = prefix(inc_, steps_, m);
}

BrownianGrid BrownianGrid::sample_path(int m, double T, long n_fine, std::uint64_t seed,
                                       long path_index) {
    const long steps = checked_steps(T, n_fine, "sample_path");
    auto fine = std::make_shared<Fine>();
    fine->m = m;
    fine->T = T;
    fine->n = n_fine;
    fine->steps = steps;
    fine->seed = seed;
    fine->path_index = path_index;
    fine->inc.resize(steps * m);
    const double sd = std::sqrt(1.0 / static_cast<double>(n_fine));
    for (long j = 0; j < steps; ++j)
        for (int c = 0; c < m; ++c)
            fine->inc[j * m + c] =
                sd * philox_normal(seed, static_cast<std::uint64_t>(j),
                                   static_cast<std::uint64_t>(c),
                                   static_cast<std::uint64_t>(path_index));
    fine->cum = prefix(fine->inc, steps, m);
    return BrownianGrid(std::move(fine), n_fine);
}

BrownianGrid BrownianGrid::from_increments(int m, double T, long n, std::uint64_t seed,
                                           long path_index, std::vector<double> increments) {
    const long steps = checked_steps(T, n, "from_increments");
    if (static_cast<long>(increments.size()) != steps * m)
        throw GridMisaligned("from_increments: increment count != n*T*m");
    auto fine = std::make_shared<Fine>();
    fine->m = m;
    fine->T = T;
    fine->n = n;
    fine->steps = steps;
    fine->seed = seed;
    fine->path_index = path_index;
    fine->inc = std::move(increments);
    fine->cum = prefix(fine->inc, steps, m);
    return BrownianGrid(std::move(fine), n);
}

BrownianGrid BrownianGrid::coarsen(long factor) const {
    if (factor < 1 || n_ % factor != 0)
        throw GridMisaligned("coarsen: factor does not divide n");
    const long target = n_ / factor;
    if (checked_steps(fine_->T, target, "coarsen") < 1) throw GridMisaligned("coarsen");
    return BrownianGrid(fine_, target);
}

BrownianGrid BrownianGrid::refine(long factor) const {
    if (factor < 1) throw GridMisaligned("refine: factor must be >= 1");
    const long target = n_ * factor;
    if (target > fine_->n || fine_->n % target != 0)
        throw GridMisaligned("refine: backing data stops at n=" + std::to_string(fine_->n));
    return BrownianGrid(fine_, target);
}

long BrownianGrid::grid_index(double t, long q) {
    const double s = t * static_cast<double>(q);
    const long j = std::llround(s);
    if (std::abs(s - static_cast<double>(j)) > 1e-9) return -1;
    return j;
}

void BrownianGrid::value_at(double t, std::span<double> out) const {
    const long j = grid_index(t, n_);
    if (j < 0 || j > steps_) throw OffGridQuery("value_at: t off grid");
    const auto cum = prefix_sums();
    for (int c = 0; c < dim(); ++c) out[c] = cum[j * dim() + c];
}

double BrownianGrid::value_at1(double t) const {
    double v;
    value_at(t, std::span<double>(&v, 1));
    return v;
}

void BrownianGrid::fine_value_at(double t, std::span<double> out) const {
    const long j = grid_index(t, fine_->n);
    if (j < 0 || j > fine_->steps) throw OffGridQuery("fine_value_at: t off fine grid");
    for (int c = 0; c < dim(); ++c) out[c] = fine_->cum[j * dim() + c];
}

void write_binary_path(const BrownianGrid& g, const std::string& file) {
    std::FILE* f = std::fopen(file.c_str(), "wb");
    if (!f) throw Error("cannot open " + file + " for writing");
    const std::int64_t m = g.dim(), n = g.steps_per_unit(), p = g.path_index();
    const double T = g.horizon();
    const std::uint64_t seed = g.seed();
    std::fwrite(&m, sizeof m, 1, f);
    std::fwrite(&T, sizeof T, 1, f);
    std::fwrite(&n, sizeof n, 1, f);
    std::fwrite(&seed, sizeof seed, 1, f);
    std::fwrite(&p, sizeof p, 1, f);
    for (long j = 0; j < g.num_steps(); ++j) {
        const auto row = g.increment(j);
        std::fwrite(row.data(), sizeof(double), row.size(), f);
    }
    std::fclose(f);
}

BrownianGrid read_binary_path(const std::string& file) {
    std::FILE* f = std::fopen(file.c_str(), "rb");
    if (!f) throw Error("cannot open " + file);
    std::int64_t m = 0, n = 0, p = 0;
    double T = 0;
    std::uint64_t seed = 0;
    bool ok = std::fread(&m, sizeof m, 1, f) == 1 && std::fread(&T, sizeof T, 1, f) == 1 &&
              std::fread(&n, sizeof n, 1, f) == 1 && std::fread(&seed, sizeof seed, 1, f) == 1 &&
              std::fread(&p, sizeof p, 1, f) == 1;
    if (!ok) {
        std::fclose(f);
        throw Error("truncated path file " + file);
    }
    const long steps = std::llround(static_cast<double>(n) * T);
    std::vector<double> inc(steps * m);
    ok = std::fread(inc.data(), sizeof(double), inc.size(), f) == inc.size();
    std::fclose(f);
    if (!ok) throw Error("truncated path file " + file);
    return BrownianGrid::from_increments(static_cast<int>(m), T, n, seed, p, std::move(inc));
}

} // namespace sdde
