#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "morld/types.hpp"

namespace morld {

double scalarize_ws(const ObjectiveVector& f, const WeightVector& weights);

class ReferencePoint;

// max_i w_i |f_i - z_i|. Smaller is better.
double scalarize_tch(const ObjectiveVector& f, const WeightVector& weights,
                     const ObjectiveVector& z);

enum class ReferenceMode { fixed, adaptive };

// Utopian anchor for Tchebycheff. In adaptive mode each component tracks the
// largest observed value plus the margin tau and never decreases. Before the
// first observation every component is -inf.
class ReferencePoint {
public:
    static ReferencePoint fixed(ObjectiveVector values);
    static ReferencePoint adaptive(std::size_t objective_count, double tau = 0.5);

    const ObjectiveVector& values() const { return values_; }
    ReferenceMode mode() const { return mode_; }
    double tau() const { return tau_; }
    bool initialized() const;

private:
    ReferencePoint(ObjectiveVector values, ReferenceMode mode, double tau);
    friend ReferencePoint update_reference_point(const ReferencePoint&,
                                                 const std::vector<ObjectiveVector>&);

    ObjectiveVector values_;
    ReferenceMode mode_ = ReferenceMode::fixed;
    double tau_ = 0.0;
};

ReferencePoint update_reference_point(const ReferencePoint& z,
                                      const std::vector<ObjectiveVector>& observed);

enum class ScalarizationKind { weighted_sum, tchebycheff };

// Uniform "larger is better" view over both scalarizations: Tchebycheff is
// negated here so learners only ever maximize.
struct Scalarization {
    ScalarizationKind kind = ScalarizationKind::weighted_sum;

    double operator()(const ObjectiveVector& f, const WeightVector& weights,
                      const ReferencePoint* reference = nullptr) const;
};

// m = 2: {(i/(n-1), 1 - i/(n-1))}. m > 2: Das-Dennis lattice, only for n that
// equal C(H+m-1, m-1) for some number of divisions H.
std::vector<WeightVector> generate_weights_uniform(std::size_t m, std::size_t n);

// Multiplicative adaptation pushing the weights away from the nearest
// non-dominated neighbour, then renormalized onto the simplex.
WeightVector adapt_weights_psa(const WeightVector& weights, const ObjectiveVector& own_eval,
                               const ObjectiveVector& neighbor_eval, double delta = 1.05);

// Closest member of front to own (Euclidean), skipping members equal to own.
std::optional<std::size_t> nearest_neighbor_index(const ObjectiveVector& own,
                                                  const std::vector<ObjectiveVector>& front);

// For each subproblem, the min(k, n-1) closest other subproblems by weight
// distance; ties go to the lower index.
using Neighborhood = std::vector<std::vector<std::size_t>>;

Neighborhood build_neighborhood(const std::vector<WeightVector>& weights, std::size_t k);

// Rotational selection: round mod n.
std::size_t select_subproblem(std::int64_t round, std::size_t n);

} // namespace morld
