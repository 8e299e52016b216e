#pragma once

#include <string>
#include <vector>

#include "sdde/brownian.hpp"
#include "sdde/euler.hpp"
#include "sdde/model.hpp"

namespace sdde {

enum class ReferenceProvenance { ExactSteps, FineEuler };

/// Stand-in for the true solution on the noise grid.
struct ReferencePath {
    ReferenceProvenance provenance;
    long n = 0;                 // grid resolution (steps per unit time)
    std::vector<double> values; // [steps+1][d]
    ModelPtr model;
    std::uint64_t seed = 0;
    long path_index = 0;

    long num_steps() const;
    double at1(long j) const { return values[j * model->dim()]; }
};

/// Exact method-of-steps solution for models whose coefficients do not
/// depend on the current state: on each delay interval the delayed block is
/// a known function, so X accumulates a trapezoidal ds-integral and the
/// left-point pairing of alpha with the Brownian increments at the noise
/// grid's resolution.
ReferencePath method_of_steps(const ModelPtr& model, const BrownianGrid& noise);

/// Fine-level Euler reference (provenance FineEuler) at n_ref = noise level.
ReferencePath fine_reference(const ModelPtr& model, const BrownianGrid& noise, long n_ref);

/// True when the exact oracle applies to the model.
bool oracle_available(const SddeModel& model);

} // namespace sdde
