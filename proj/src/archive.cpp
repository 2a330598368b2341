#include "morld/archive.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "morld/format.hpp"

namespace morld {

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    require_same_length(a, b, "dominates");
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i])
            return false;
        if (a[i] > b[i])
            strict = true;
    }
    return strict;
}

namespace {

template <typename T, typename Key>
std::vector<T> filter_nondominated(const std::vector<T>& items, Key key) {
    std::vector<T> kept;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& vi = key(items[i]);
        bool drop = false;
        for (std::size_t j = 0; j < items.size() && !drop; ++j) {
            if (i == j)
                continue;
            const auto& vj = key(items[j]);
            drop = dominates(vj, vi) || (j < i && vj == vi);
        }
        if (!drop)
            kept.push_back(items[i]);
    }
    return kept;
}

} // namespace

std::vector<ObjectiveVector> nondominated(const std::vector<ObjectiveVector>& points) {
    return filter_nondominated(points, [](const ObjectiveVector& v) -> const ObjectiveVector& {
        return v;
    });
}

std::vector<ArchiveEntry> prune(const std::vector<ArchiveEntry>& candidates) {
    return filter_nondominated(candidates,
                               [](const ArchiveEntry& e) -> const ObjectiveVector& { return e.eval; });
}

std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& front) {
    const std::size_t n = front.size();
    if (n == 0)
        throw Error("crowding_distance: empty front");
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> distance(n, 0.0);
    if (n <= 2) {
        std::fill(distance.begin(), distance.end(), inf);
        return distance;
    }
    const std::size_t m = front.front().size();
    std::vector<std::size_t> order(n);
    for (std::size_t obj = 0; obj < m; ++obj) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return front[a][obj] < front[b][obj];
        });
        const double lo = front[order.front()][obj];
        const double hi = front[order.back()][obj];
        distance[order.front()] = inf;
        distance[order.back()] = inf;
        if (hi == lo)
            continue;
        for (std::size_t k = 1; k + 1 < n; ++k)
            distance[order[k]] += (front[order[k + 1]][obj] - front[order[k - 1]][obj]) / (hi - lo);
    }
    return distance;
}

ParetoArchive::ParetoArchive(std::optional<std::size_t> capacity) : capacity_(capacity) {
    if (capacity_ && *capacity_ == 0)
        throw Error("archive capacity must be positive");
}

bool ParetoArchive::accepts(const ObjectiveVector& eval) const {
    for (const auto& e : entries_)
        if (e.eval == eval || dominates(e.eval, eval))
            return false;
    return true;
}

bool ParetoArchive::insert(ObjectiveVector eval, std::string payload, ArchiveTag tag) {
    if (!all_finite(eval))
        throw Error("archive: evaluation must be finite");
    for (const auto& e : entries_)
        if (e.eval == eval || dominates(e.eval, eval))
            return false;
    std::erase_if(entries_, [&](const ArchiveEntry& e) { return dominates(eval, e.eval); });
    entries_.push_back(ArchiveEntry{std::move(eval), std::move(payload), tag});
    if (capacity_ && entries_.size() > *capacity_) {
        const auto distance = crowding_distance(front());
        const auto victim = std::min_element(distance.begin(), distance.end()) - distance.begin();
        entries_.erase(entries_.begin() + victim);
    }
    return true;
}

std::vector<ObjectiveVector> ParetoArchive::front() const {
    std::vector<ObjectiveVector> points;
    points.reserve(entries_.size());
    for (const auto& e : entries_)
        points.push_back(e.eval);
    return points;
}

void ParetoArchive::write_csv(std::ostream& out) const {
    const std::size_t m = entries_.empty() ? 0 : entries_.front().eval.size();
    for (std::size_t i = 0; i < m; ++i)
        out << "obj_" << i << ',';
    out << "subproblem,step\n";
    for (const auto& e : entries_) {
        for (double v : e.eval)
            out << format_number(v) << ',';
        out << e.tag.subproblem << ',' << e.tag.step << '\n';
    }
}

} // namespace morld
