#include "morld/buffer.hpp"

#include <algorithm>

#include "morld/archive.hpp"

namespace morld {

namespace {

template <typename Range>
ObjectiveVector sum_rewards(const Range& range) {
    ObjectiveVector total;
    for (const auto& e : range) {
        if (total.empty())
            total.assign(e.reward.size(), 0.0);
        for (std::size_t i = 0; i < total.size(); ++i)
            total[i] += e.reward[i];
    }
    return total;
}

// Index of the group to drop: smallest crowding distance, earliest on ties.
std::size_t least_crowded(const std::vector<ObjectiveVector>& returns) {
    const auto distance = crowding_distance(returns);
    return static_cast<std::size_t>(std::min_element(distance.begin(), distance.end()) -
                                    distance.begin());
}

} // namespace

ObjectiveVector episode_return(const Episode& episode) { return sum_rewards(episode); }

ExperienceBuffer::ExperienceBuffer(std::size_t capacity, Replacement replacement)
    : capacity_(capacity), replacement_(replacement) {
    if (capacity_ == 0)
        throw Error("buffer capacity must be positive");
}

void ExperienceBuffer::push(const std::vector<Experience>& experiences) {
    for (const auto& e : experiences)
        push_one(e);
}

void ExperienceBuffer::push_one(const Experience& e) {
    items_.push_back(e);
    if (last_group_open_)
        ++group_sizes_.back();
    else
        group_sizes_.push_back(1);
    last_group_open_ = !e.terminal;
    while (items_.size() > capacity_)
        evict();
}

void ExperienceBuffer::evict() {
    const std::size_t closed = group_sizes_.size() - (last_group_open_ ? 1 : 0);
    if (replacement_ == Replacement::fifo || closed == 0) {
        items_.pop_front();
        if (--group_sizes_.front() == 0)
            group_sizes_.pop_front();
        return;
    }
    std::vector<ObjectiveVector> returns;
    std::size_t offset = 0;
    for (std::size_t g = 0; g < closed; ++g) {
        returns.push_back(sum_rewards(std::ranges::subrange(
            items_.begin() + static_cast<std::ptrdiff_t>(offset),
            items_.begin() + static_cast<std::ptrdiff_t>(offset + group_sizes_[g]))));
        offset += group_sizes_[g];
    }
    const std::size_t victim = least_crowded(returns);
    std::size_t start = 0;
    for (std::size_t g = 0; g < victim; ++g)
        start += group_sizes_[g];
    const auto first = items_.begin() + static_cast<std::ptrdiff_t>(start);
    items_.erase(first, first + static_cast<std::ptrdiff_t>(group_sizes_[victim]));
    group_sizes_.erase(group_sizes_.begin() + static_cast<std::ptrdiff_t>(victim));
}

std::vector<Experience> ExperienceBuffer::sample(std::size_t batch, Rng& rng) const {
    return sample_union({this}, batch, rng);
}

std::vector<Experience> sample_union(const std::vector<const ExperienceBuffer*>& buffers,
                                     std::size_t batch, Rng& rng) {
    std::size_t total = 0;
    for (const auto* b : buffers)
        total += b->size();
    if (batch == 0)
        return {};
    if (total == 0)
        throw Error("empty buffer");
    std::vector<Experience> out;
    out.reserve(batch);
    for (std::size_t k = 0; k < batch; ++k) {
        auto idx = static_cast<std::size_t>(rng.uniform_index(total));
        for (const auto* b : buffers) {
            if (idx < b->size()) {
                out.push_back((*b)[idx]);
                break;
            }
            idx -= b->size();
        }
    }
    return out;
}

EpisodeBuffer::EpisodeBuffer(std::size_t capacity, Replacement replacement)
    : capacity_(capacity), replacement_(replacement) {
    if (capacity_ == 0)
        throw Error("buffer capacity must be positive");
}

void EpisodeBuffer::push(Episode episode) {
    if (episode.empty() || !episode.back().terminal)
        throw Error("incomplete episode");
    episodes_.push_back(std::move(episode));
    while (episodes_.size() > capacity_) {
        if (replacement_ == Replacement::fifo) {
            episodes_.pop_front();
            continue;
        }
        std::vector<ObjectiveVector> returns;
        for (const auto& ep : episodes_)
            returns.push_back(episode_return(ep));
        episodes_.erase(episodes_.begin() + static_cast<std::ptrdiff_t>(least_crowded(returns)));
    }
}

std::vector<Episode> EpisodeBuffer::sample(std::size_t count, Rng& rng) const {
    return sample_union({this}, count, rng);
}

std::vector<Episode> sample_union(const std::vector<const EpisodeBuffer*>& buffers,
                                  std::size_t count, Rng& rng) {
    std::size_t total = 0;
    for (const auto* b : buffers)
        total += b->size();
    if (count == 0)
        return {};
    if (total == 0)
        throw Error("empty buffer");
    std::vector<Episode> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        auto idx = static_cast<std::size_t>(rng.uniform_index(total));
        for (const auto* b : buffers) {
            if (idx < b->size()) {
                out.push_back((*b)[idx]);
                break;
            }
            idx -= b->size();
        }
    }
    return out;
}

} // namespace morld
