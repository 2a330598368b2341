#pragma once

#include <cstdint>
#include <vector>

#include "morld/types.hpp"

namespace morld {

struct HypervolumeEstimate {
    double value = 0.0;
    double standard_error = 0.0; // zero for the exact path
};

// Exact sweep for m = 2; Monte-Carlo estimate for m >= 3. Every point must
// dominate z_ref, otherwise "invalid reference point" is raised.
HypervolumeEstimate hypervolume(const std::vector<ObjectiveVector>& front,
                                const ObjectiveVector& z_ref, std::uint64_t seed = 0,
                                std::size_t samples = 1'000'000);

double hypervolume_2d(const std::vector<ObjectiveVector>& front, const ObjectiveVector& z_ref);

// Uniform sampling of the box spanned by z_ref and the per-objective maxima.
HypervolumeEstimate hypervolume_monte_carlo(const std::vector<ObjectiveVector>& front,
                                            const ObjectiveVector& z_ref, std::size_t samples,
                                            std::uint64_t seed);

// (1/|Z|) * sqrt(sum over z of min_v ||z - v||^2).
double igd(const std::vector<ObjectiveVector>& front,
           const std::vector<ObjectiveVector>& reference);

// Mean squared gap between consecutive sorted values, summed over objectives.
// A single point has sparsity 0.
double sparsity(const std::vector<ObjectiveVector>& front);

// Mean over weights of the best weighted-sum utility in the front.
double expected_utility(const std::vector<ObjectiveVector>& front,
                        const std::vector<WeightVector>& weights);

} // namespace morld
