#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace morld {

// Raised on any contract violation inside the library. Messages are stable
// strings that tests and the CLI match on.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One value per objective. All objectives are maximized.
using ObjectiveVector = std::vector<double>;

// A point on the probability simplex: non-negative entries summing to 1.
class WeightVector {
public:
    WeightVector() = default;
    explicit WeightVector(std::vector<double> entries);

    // Rescales arbitrary non-negative entries onto the simplex.
    static WeightVector normalized(std::vector<double> entries);

    std::size_t size() const { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<double>& entries() const { return entries_; }
    std::span<const double> span() const { return entries_; }

    bool operator==(const WeightVector&) const = default;

private:
    std::vector<double> entries_;
};

void require_same_length(std::span<const double> a, std::span<const double> b,
                         const char* what);

bool all_finite(std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);

double squared_distance(std::span<const double> a, std::span<const double> b);

} // namespace morld
