#pragma once

// Independent reference computations for tests. Nothing here calls the code
// paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "morld/momdp.hpp"
#include "morld/types.hpp"

namespace oracle {

using morld::ObjectiveVector;

inline bool weakly_better_everywhere(const ObjectiveVector& a, const ObjectiveVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] < b[i])
            return false;
    return true;
}

inline bool strictly_better(const ObjectiveVector& a, const ObjectiveVector& b) {
    return weakly_better_everywhere(a, b) && a != b;
}

// O(n^2): keep a point when nothing strictly beats it and no earlier copy exists.
inline std::vector<ObjectiveVector> brute_force_nondominated(const std::vector<ObjectiveVector>& pts) {
    std::vector<ObjectiveVector> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (strictly_better(pts[j], pts[i]) || (j < i && pts[j] == pts[i])) {
                keep = false;
                break;
            }
        }
        if (keep)
            out.push_back(pts[i]);
    }
    return out;
}

// 2-D hypervolume by inclusion-exclusion over all subsets (small fronts only).
inline double inclusion_exclusion_hv(const std::vector<ObjectiveVector>& pts,
                                     const ObjectiveVector& ref) {
    const std::size_t n = pts.size();
    double total = 0.0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        ObjectiveVector corner(ref.size(), std::numeric_limits<double>::infinity());
        int bits = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                ++bits;
                for (std::size_t k = 0; k < ref.size(); ++k)
                    corner[k] = std::min(corner[k], pts[i][k]);
            }
        }
        double vol = 1.0;
        for (std::size_t k = 0; k < ref.size(); ++k)
            vol *= std::max(0.0, corner[k] - ref[k]);
        total += (bits % 2 == 1 ? 1.0 : -1.0) * vol;
    }
    return total;
}

// Every deterministic transition as a one-step experience.
inline std::vector<morld::Experience> all_transitions(const morld::Momdp& env) {
    std::vector<morld::Experience> out;
    for (int s = 0; s < env.state_count(); ++s)
        for (int a = 0; a < env.action_count(); ++a)
            for (const auto& o : env.outcomes(s, a))
                out.push_back(morld::Experience{s, a, o.reward, o.next_state, o.terminal,
                                                ObjectiveVector(o.reward.size(), 0.0)});
    return out;
}

// Synchronous value iteration on the weighted-sum reward, model-based.
inline std::vector<std::vector<double>> scalar_value_iteration(const morld::Momdp& env,
                                                               const std::vector<double>& w,
                                                               double gamma) {
    const auto S = static_cast<std::size_t>(env.state_count());
    const auto A = static_cast<std::size_t>(env.action_count());
    std::vector<std::vector<double>> q(S, std::vector<double>(A, 0.0));
    for (int iter = 0; iter < 10000; ++iter) {
        auto next = q;
        for (std::size_t s = 0; s < S; ++s)
            for (std::size_t a = 0; a < A; ++a) {
                double v = 0.0;
                for (const auto& o : env.outcomes(int(s), int(a))) {
                    double r = 0.0;
                    for (std::size_t i = 0; i < w.size(); ++i)
                        r += w[i] * o.reward[i];
                    const auto& row = q[static_cast<std::size_t>(o.next_state)];
                    const double tail = o.terminal ? 0.0 : *std::max_element(row.begin(), row.end());
                    v += o.probability * (r + gamma * tail);
                }
                next[s][a] = v;
            }
        if (next == q)
            break;
        q = std::move(next);
    }
    return q;
}

// Vector value iteration bootstrapping from the w-greedy next action (lowest
// index on ties).
inline std::vector<std::vector<ObjectiveVector>> vector_value_iteration(const morld::Momdp& env,
                                                                        const std::vector<double>& w,
                                                                        double gamma) {
    const auto S = static_cast<std::size_t>(env.state_count());
    const auto A = static_cast<std::size_t>(env.action_count());
    const auto m = static_cast<std::size_t>(env.objective_count());
    std::vector<std::vector<ObjectiveVector>> q(S, std::vector<ObjectiveVector>(A, ObjectiveVector(m, 0.0)));
    auto score = [&](const ObjectiveVector& v) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            s += w[i] * v[i];
        return s;
    };
    for (int iter = 0; iter < 10000; ++iter) {
        auto next = q;
        for (std::size_t s = 0; s < S; ++s)
            for (std::size_t a = 0; a < A; ++a) {
                ObjectiveVector v(m, 0.0);
                for (const auto& o : env.outcomes(int(s), int(a))) {
                    ObjectiveVector tail(m, 0.0);
                    if (!o.terminal) {
                        const auto& row = q[static_cast<std::size_t>(o.next_state)];
                        std::size_t best = 0;
                        for (std::size_t b = 1; b < A; ++b)
                            if (score(row[b]) > score(row[best]))
                                best = b;
                        tail = row[best];
                    }
                    for (std::size_t i = 0; i < m; ++i)
                        v[i] += o.probability * (o.reward[i] + gamma * tail[i]);
                }
                next[s][a] = v;
            }
        if (next == q)
            break;
        q = std::move(next);
    }
    return q;
}

inline double tchebycheff(const ObjectiveVector& f, const std::vector<double>& w,
                          const ObjectiveVector& z) {
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        worst = std::max(worst, w[i] * std::abs(f[i] - z[i]));
    return worst;
}

// Point of `front` with the smallest Tchebycheff distance (first on ties).
inline ObjectiveVector tchebycheff_argmin(const std::vector<ObjectiveVector>& front,
                                          const std::vector<double>& w, const ObjectiveVector& z) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < front.size(); ++i)
        if (tchebycheff(front[i], w, z) < tchebycheff(front[best], w, z))
            best = i;
    return front[best];
}

inline double ws(const ObjectiveVector& f, const std::vector<double>& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        s += w[i] * f[i];
    return s;
}

// Random mutually non-dominated 2-D front: points on a noisy decreasing curve.
inline std::vector<ObjectiveVector> random_front_2d(std::mt19937_64& gen, std::size_t max_size) {
    std::uniform_int_distribution<std::size_t> size_dist(1, max_size);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    std::vector<ObjectiveVector> pts;
    const std::size_t n = size_dist(gen);
    for (std::size_t i = 0; i < n; ++i)
        pts.push_back({u(gen), u(gen)});
    return brute_force_nondominated(pts);
}

} // namespace oracle
