#include "morld/types.hpp"

#include <cmath>
#include <numeric>

namespace morld {

namespace {
constexpr double kSimplexTolerance = 1e-9;
}

WeightVector::WeightVector(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.empty())
        throw Error("weight vector must not be empty");
    double sum = 0.0;
    for (double w : entries_) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw Error("weight entries must be finite and non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kSimplexTolerance)
        throw Error("weight entries must sum to 1");
}

WeightVector WeightVector::normalized(std::vector<double> entries) {
    double sum = 0.0;
    for (double w : entries) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw Error("weight entries must be finite and non-negative");
        sum += w;
    }
    if (!(sum > 0.0))
        throw Error("cannot normalize an all-zero weight vector");
    for (double& w : entries)
        w /= sum;
    return WeightVector(std::move(entries));
}

void require_same_length(std::span<const double> a, std::span<const double> b,
                         const char* what) {
    if (a.size() != b.size())
        throw Error(std::string(what) + ": length mismatch (" + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()) + ")");
}

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x))
            return false;
    return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
    require_same_length(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    require_same_length(a, b, "distance");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

} // namespace morld
