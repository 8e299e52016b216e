#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sdde/errors.hpp"

namespace sdde {

/// m-dimensional Brownian increments on a uniform grid of width 1/n.
///
/// A grid is always backed by the finest-level data it was sampled at;
/// coarser grids are views materialized by group-summing that data. All
/// levels of one experiment therefore share a single underlying noise path,
/// refine/coarsen are exactly consistent, and every increment is a pure
/// function of (seed, path_index, step, coordinate).
class BrownianGrid {
  public:
    /// Draws i.i.d. N(0, 1/n_fine) increments per coordinate from the
    /// counter-based generator. n_fine * T must be integral.
    static BrownianGrid sample_path(int m, double T, long n_fine, std::uint64_t seed,
                                    long path_index = 0);

    /// Wraps externally supplied increments (deserialization, tests).
    static BrownianGrid from_increments(int m, double T, long n, std::uint64_t seed,
                                        long path_index, std::vector<double> increments);

    int dim() const { return fine_->m; }
    double horizon() const { return fine_->T; }
    long steps_per_unit() const { return n_; }
    long num_steps() const { return steps_; }
    std::uint64_t seed() const { return fine_->seed; }
    long path_index() const { return fine_->path_index; }
    /// Resolution of the backing data (the level sample_path was called at).
    long fine_steps_per_unit() const { return fine_->n; }

    /// Increment over [j/n, (j+1)/n], length m.
    std::span<const double> increment(long j) const { return {inc().data() + j * dim(), size_t(dim())}; }

    /// View of this path at resolution n/factor.
    BrownianGrid coarsen(long factor) const;

    /// View at resolution n*factor, served from the backing fine data;
    /// throws GridMisaligned when the data does not extend that far.
    BrownianGrid refine(long factor) const;

    /// W(t) for t on the grid (prefix sum; W(0) = 0).
    void value_at(double t, std::span<double> out) const;
    double value_at1(double t) const;

    /// W(t) at the backing fine resolution (used by continuous interpolants).
    void fine_value_at(double t, std::span<double> out) const;

    /// Prefix sums at this view's resolution: entry j*m+c is W_c(j/n).
    std::span<const double> prefix_sums() const { return cum_empty_ ? std::span<const double>{fine_->cum} : std::span<const double>{cum_}; }
    std::span<const double> fine_prefix_sums() const { return {fine_->cum}; }

    /// Grid index of time t at resolution q, or -1 when t is off-grid.
    static long grid_index(double t, long q);

  private:
    struct Fine {
        int m;
        double T;
        long n;
        long steps;
        std::uint64_t seed;
        long path_index;
        std::vector<double> inc; // [steps][m]
        std::vector<double> cum; // [steps+1][m]
    };

    BrownianGrid(std::shared_ptr<const Fine> fine, long n);

    const std::vector<double>& inc() const { return inc_empty_ ? fine_->inc : inc_; }

    std::shared_ptr<const Fine> fine_;
    long n_;     // view resolution; divides fine_->n
    long steps_; // n_ * T
    bool inc_empty_ = false; // view at fine level reuses backing arrays
    bool cum_empty_ = false;
    std::vector<double> inc_;
    std::vector<double> cum_;
};

/// Binary path dump: little-endian header {int64 m, double T, int64 n,
/// uint64 seed, int64 path_index} followed by row-major f64 increments.
void write_binary_path(const BrownianGrid& g, const std::string& file);
BrownianGrid read_binary_path(const std::string& file);

} // namespace sdde
