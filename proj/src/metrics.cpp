#include "morld/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "morld/archive.hpp"
#include "morld/decomposition.hpp"
#include "morld/rng.hpp"

namespace morld {

namespace {

void require_front(const std::vector<ObjectiveVector>& front, const char* what) {
    if (front.empty())
        throw Error(std::string(what) + ": empty front");
    for (const auto& p : front)
        require_same_length(p, front.front(), what);
}

// Dominated inputs are a caller bug, reported but tolerated.
std::vector<ObjectiveVector> filtered(const std::vector<ObjectiveVector>& front, const char* what) {
    auto kept = nondominated(front);
    if (kept.size() != front.size())
        std::clog << "warning: " << what << ": dropped " << front.size() - kept.size()
                  << " dominated or duplicate point(s)\n";
    return kept;
}

void require_reference(const std::vector<ObjectiveVector>& front, const ObjectiveVector& z_ref) {
    for (const auto& p : front) {
        require_same_length(p, z_ref, "hypervolume");
        if (!dominates(p, z_ref))
            throw Error("invalid reference point");
    }
}

} // namespace

double hypervolume_2d(const std::vector<ObjectiveVector>& front, const ObjectiveVector& z_ref) {
    require_front(front, "hypervolume");
    if (z_ref.size() != 2)
        throw Error("hypervolume_2d: two objectives required");
    require_reference(front, z_ref);
    auto points = filtered(front, "hypervolume");
    std::sort(points.begin(), points.end(),
              [](const ObjectiveVector& a, const ObjectiveVector& b) { return a[0] > b[0]; });
    // Descending in objective 0 means ascending in objective 1 on a
    // non-dominated set; each point adds the strip down to its right neighbour.
    double volume = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double next_x = i + 1 < points.size() ? points[i + 1][0] : z_ref[0];
        volume += (points[i][0] - next_x) * (points[i][1] - z_ref[1]);
    }
    return volume;
}

HypervolumeEstimate hypervolume_monte_carlo(const std::vector<ObjectiveVector>& front,
                                            const ObjectiveVector& z_ref, std::size_t samples,
                                            std::uint64_t seed) {
    require_front(front, "hypervolume");
    require_reference(front, z_ref);
    if (samples == 0)
        throw Error("hypervolume: sample count must be positive");
    const std::size_t m = z_ref.size();
    ObjectiveVector upper(z_ref);
    for (const auto& p : front)
        for (std::size_t i = 0; i < m; ++i)
            upper[i] = std::max(upper[i], p[i]);
    double box = 1.0;
    for (std::size_t i = 0; i < m; ++i)
        box *= upper[i] - z_ref[i];

    Rng rng = Rng::derive(seed, stream::metrics);
    ObjectiveVector x(m);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < m; ++i)
            x[i] = z_ref[i] + rng.uniform01() * (upper[i] - z_ref[i]);
        for (const auto& p : front) {
            bool covers = true;
            for (std::size_t i = 0; i < m && covers; ++i)
                covers = p[i] >= x[i];
            if (covers) {
                ++hits;
                break;
            }
        }
    }
    const double frac = static_cast<double>(hits) / static_cast<double>(samples);
    return {box * frac, box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples))};
}

HypervolumeEstimate hypervolume(const std::vector<ObjectiveVector>& front,
                                const ObjectiveVector& z_ref, std::uint64_t seed,
                                std::size_t samples) {
    if (z_ref.size() == 2)
        return {hypervolume_2d(front, z_ref), 0.0};
    require_front(front, "hypervolume");
    return hypervolume_monte_carlo(filtered(front, "hypervolume"), z_ref, samples, seed);
}

double igd(const std::vector<ObjectiveVector>& front,
           const std::vector<ObjectiveVector>& reference) {
    require_front(front, "igd");
    require_front(reference, "igd");
    require_same_length(front.front(), reference.front(), "igd");
    const auto points = filtered(front, "igd");
    double total = 0.0;
    for (const auto& z : reference) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& v : points)
            best = std::min(best, squared_distance(z, v));
        total += best;
    }
    return std::sqrt(total) / static_cast<double>(reference.size());
}

double sparsity(const std::vector<ObjectiveVector>& front) {
    require_front(front, "sparsity");
    const auto points = filtered(front, "sparsity");
    if (points.size() < 2)
        return 0.0;
    const std::size_t m = points.front().size();
    double total = 0.0;
    std::vector<double> column(points.size());
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < points.size(); ++i)
            column[i] = points[i][j];
        std::sort(column.begin(), column.end());
        for (std::size_t i = 0; i + 1 < column.size(); ++i) {
            const double gap = column[i] - column[i + 1];
            total += gap * gap;
        }
    }
    return total / static_cast<double>(points.size() - 1);
}

double expected_utility(const std::vector<ObjectiveVector>& front,
                        const std::vector<WeightVector>& weights) {
    require_front(front, "expected_utility");
    if (weights.empty())
        throw Error("expected_utility: empty weight set");
    const auto points = filtered(front, "expected_utility");
    double total = 0.0;
    for (const auto& w : weights) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& v : points)
            best = std::max(best, scalarize_ws(v, w));
        total += best;
    }
    return total / static_cast<double>(weights.size());
}

} // namespace morld
