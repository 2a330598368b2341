#include "morld/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace morld {

double scalarize_ws(const ObjectiveVector& f, const WeightVector& weights) {
    return dot(weights.span(), f);
}

double scalarize_tch(const ObjectiveVector& f, const WeightVector& weights,
                     const ObjectiveVector& z) {
    require_same_length(weights.span(), f, "scalarize_tch");
    require_same_length(f, z, "scalarize_tch");
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        worst = std::max(worst, weights[i] * std::abs(f[i] - z[i]));
    return worst;
}

ReferencePoint::ReferencePoint(ObjectiveVector values, ReferenceMode mode, double tau)
    : values_(std::move(values)), mode_(mode), tau_(tau) {}

ReferencePoint ReferencePoint::fixed(ObjectiveVector values) {
    if (!all_finite(values))
        throw Error("reference point must be finite");
    return ReferencePoint(std::move(values), ReferenceMode::fixed, 0.0);
}

ReferencePoint ReferencePoint::adaptive(std::size_t objective_count, double tau) {
    if (!(tau >= 0.0))
        throw Error("tau must be >= 0");
    return ReferencePoint(ObjectiveVector(objective_count, -std::numeric_limits<double>::infinity()),
                          ReferenceMode::adaptive, tau);
}

bool ReferencePoint::initialized() const { return all_finite(values_); }

ReferencePoint update_reference_point(const ReferencePoint& z,
                                      const std::vector<ObjectiveVector>& observed) {
    if (z.mode() != ReferenceMode::adaptive)
        throw Error("update_reference_point: reference point is fixed");
    ReferencePoint next = z;
    for (const auto& f : observed) {
        require_same_length(f, next.values_, "update_reference_point");
        for (std::size_t i = 0; i < f.size(); ++i)
            next.values_[i] = std::max(next.values_[i], f[i] + z.tau());
    }
    return next;
}

double Scalarization::operator()(const ObjectiveVector& f, const WeightVector& weights,
                                 const ReferencePoint* reference) const {
    switch (kind) {
    case ScalarizationKind::weighted_sum:
        return scalarize_ws(f, weights);
    case ScalarizationKind::tchebycheff:
        if (reference == nullptr)
            throw Error("tchebycheff scalarization needs a reference point");
        return -scalarize_tch(f, weights, reference->values());
    }
    return 0.0;
}

namespace {

std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n)
        return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

// All compositions of `divisions` into m non-negative parts, first component
// descending.
void das_dennis(std::size_t m, std::size_t divisions, std::vector<std::size_t>& prefix,
                std::size_t remaining, std::vector<WeightVector>& out) {
    if (prefix.size() + 1 == m) {
        prefix.push_back(remaining);
        std::vector<double> w(m);
        for (std::size_t i = 0; i < m; ++i)
            w[i] = static_cast<double>(prefix[i]) / static_cast<double>(divisions);
        out.push_back(WeightVector::normalized(std::move(w)));
        prefix.pop_back();
        return;
    }
    for (std::size_t part = remaining + 1; part-- > 0;) {
        prefix.push_back(part);
        das_dennis(m, divisions, prefix, remaining - part, out);
        prefix.pop_back();
    }
}

} // namespace

std::vector<WeightVector> generate_weights_uniform(std::size_t m, std::size_t n) {
    if (m < 2 || n < 2)
        throw Error("generate_weights_uniform: need m >= 2 and n >= 2");
    std::vector<WeightVector> weights;
    if (m == 2) {
        for (std::size_t i = 0; i < n; ++i) {
            const double a = static_cast<double>(i) / static_cast<double>(n - 1);
            weights.emplace_back(std::vector<double>{a, 1.0 - a});
        }
        return weights;
    }
    for (std::size_t divisions = 1;; ++divisions) {
        const std::size_t count = binomial(divisions + m - 1, m - 1);
        if (count == n) {
            std::vector<std::size_t> prefix;
            das_dennis(m, divisions, prefix, divisions, weights);
            return weights;
        }
        if (count > n)
            throw Error("unsupported weight count for m>2");
    }
}

WeightVector adapt_weights_psa(const WeightVector& weights, const ObjectiveVector& own_eval,
                               const ObjectiveVector& neighbor_eval, double delta) {
    if (!(delta > 1.0))
        throw Error("adapt_weights_psa: delta must be > 1");
    require_same_length(weights.span(), own_eval, "adapt_weights_psa");
    require_same_length(own_eval, neighbor_eval, "adapt_weights_psa");
    std::vector<double> scaled(weights.entries());
    for (std::size_t j = 0; j < scaled.size(); ++j)
        scaled[j] = own_eval[j] >= neighbor_eval[j] ? scaled[j] * delta : scaled[j] / delta;
    return WeightVector::normalized(std::move(scaled));
}

std::optional<std::size_t> nearest_neighbor_index(const ObjectiveVector& own,
                                                  const std::vector<ObjectiveVector>& front) {
    std::optional<std::size_t> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < front.size(); ++i) {
        if (front[i] == own)
            continue;
        const double d = squared_distance(own, front[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

Neighborhood build_neighborhood(const std::vector<WeightVector>& weights, std::size_t k) {
    const std::size_t n = weights.size();
    Neighborhood hood(n);
    const std::size_t size = n == 0 ? 0 : std::min(k, n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, std::size_t>> others;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                others.emplace_back(squared_distance(weights[i].span(), weights[j].span()), j);
        std::sort(others.begin(), others.end());
        for (std::size_t r = 0; r < size; ++r)
            hood[i].push_back(others[r].second);
    }
    return hood;
}

std::size_t select_subproblem(std::int64_t round, std::size_t n) {
    if (n == 0)
        throw Error("select_subproblem: empty population");
    if (round < 0)
        throw Error("select_subproblem: negative round");
    return static_cast<std::size_t>(round) % n;
}

} // namespace morld
