#pragma once

#include <cstddef>
#include <deque>
#include <vector>

#include "morld/momdp.hpp"
#include "morld/rng.hpp"

namespace morld {

enum class Replacement { fifo, diverse_crowding };

// Which buffers a subproblem samples from.
enum class BufferSharing { per_policy, neighborhood, global };

// Step-granular replay buffer. Experiences are grouped into episodes at
// terminal flags; diverse-crowding eviction removes the whole closed episode
// whose return has the smallest crowding distance (oldest on ties).
class ExperienceBuffer {
public:
    ExperienceBuffer(std::size_t capacity, Replacement replacement = Replacement::fifo);

    void push(const std::vector<Experience>& experiences);

    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    std::size_t capacity() const { return capacity_; }
    Replacement replacement() const { return replacement_; }
    const Experience& operator[](std::size_t i) const { return items_[i]; }
    std::vector<Experience> contents() const { return {items_.begin(), items_.end()}; }

    // Uniform with replacement.
    std::vector<Experience> sample(std::size_t batch, Rng& rng) const;

private:
    void push_one(const Experience& e);
    void evict();

    std::size_t capacity_;
    Replacement replacement_;
    std::deque<Experience> items_;
    std::deque<std::size_t> group_sizes_;
    bool last_group_open_ = false;
};

// Uniform draws over the union of several buffers.
std::vector<Experience> sample_union(const std::vector<const ExperienceBuffer*>& buffers,
                                     std::size_t batch, Rng& rng);

// Whole-episode buffer for Monte-Carlo learners. Capacity counts episodes.
class EpisodeBuffer {
public:
    EpisodeBuffer(std::size_t capacity, Replacement replacement = Replacement::fifo);

    void push(Episode episode);

    std::size_t size() const { return episodes_.size(); }
    bool empty() const { return episodes_.empty(); }
    const Episode& operator[](std::size_t i) const { return episodes_[i]; }

    std::vector<Episode> sample(std::size_t count, Rng& rng) const;

private:
    std::size_t capacity_;
    Replacement replacement_;
    std::deque<Episode> episodes_;
};

std::vector<Episode> sample_union(const std::vector<const EpisodeBuffer*>& buffers,
                                  std::size_t count, Rng& rng);

ObjectiveVector episode_return(const Episode& episode);

} // namespace morld
