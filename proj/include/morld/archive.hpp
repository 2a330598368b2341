#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "morld/types.hpp"

namespace morld {

// a Pareto-dominates b: a_i >= b_i everywhere and a_j > b_j somewhere.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

// Non-dominated subset in input order; later duplicates are dropped.
std::vector<ObjectiveVector> nondominated(const std::vector<ObjectiveVector>& points);

// NSGA-II crowding distance. Boundary points of every objective get +inf.
std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& front);

struct ArchiveTag {
    int subproblem = -1;
    std::int64_t step = 0;
};

struct ArchiveEntry {
    ObjectiveVector eval;
    std::string payload; // serialized policy snapshot
    ArchiveTag tag;
};

std::vector<ArchiveEntry> prune(const std::vector<ArchiveEntry>& candidates);

// External archive of mutually non-dominated evaluations. When a capacity is
// set, overflow evicts the entry with the smallest crowding distance.
class ParetoArchive {
public:
    ParetoArchive() = default;
    explicit ParetoArchive(std::optional<std::size_t> capacity);

    // True when insert() would accept eval.
    bool accepts(const ObjectiveVector& eval) const;

    // Returns true when the evaluation was accepted.
    bool insert(ObjectiveVector eval, std::string payload, ArchiveTag tag);

    const std::vector<ArchiveEntry>& entries() const { return entries_; }
    std::vector<ObjectiveVector> front() const;
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    std::optional<std::size_t> capacity() const { return capacity_; }

    // CSV with header obj_0..obj_{m-1},subproblem,step.
    void write_csv(std::ostream& out) const;

private:
    std::vector<ArchiveEntry> entries_;
    std::optional<std::size_t> capacity_;
};

} // namespace morld
