#include "morld/qtable.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <limits>
#include <sstream>

namespace morld {

namespace {

std::string exact(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void check_sizes(int states, int actions, int objectives) {
    if (states < 1 || actions < 1 || objectives < 1)
        throw Error("q-table: dimensions must be positive");
}

ObjectiveVector total_return(const Episode& episode) {
    ObjectiveVector total(episode.front().reward.size(), 0.0);
    for (const auto& e : episode)
        for (std::size_t i = 0; i < total.size(); ++i)
            total[i] += e.reward[i];
    return total;
}

} // namespace

void validate(const LearningRate& rate) {
    if (!(rate.alpha > 0.0 && rate.alpha <= 1.0))
        throw Error("alpha must lie in (0, 1]");
    if (!(rate.gamma >= 0.0 && rate.gamma <= 1.0))
        throw Error("gamma must lie in [0, 1]");
}

QTableScalar::QTableScalar(int state_count, int action_count, LearningRate rate)
    : states_(state_count), actions_(action_count), rate_(rate) {
    check_sizes(states_, actions_, 1);
    validate(rate_);
    table_.assign(static_cast<std::size_t>(states_ * actions_), 0.0);
}

std::size_t QTableScalar::index(int s, int a) const {
    if (s < 0 || s >= states_ || a < 0 || a >= actions_)
        throw Error("q-table: index out of range");
    return static_cast<std::size_t>(s * actions_ + a);
}

std::vector<double> QTableScalar::row(int s) const {
    const auto first = table_.begin() + static_cast<std::ptrdiff_t>(index(s, 0));
    return {first, first + actions_};
}

double QTableScalar::max(int s) const {
    const auto r = row(s);
    return *std::max_element(r.begin(), r.end());
}

QTableVector::QTableVector(int state_count, int action_count, int objective_count, LearningRate rate)
    : states_(state_count), actions_(action_count), objectives_(objective_count), rate_(rate) {
    check_sizes(states_, actions_, objectives_);
    validate(rate_);
    table_.assign(static_cast<std::size_t>(states_ * actions_ * objectives_), 0.0);
}

std::span<double> QTableVector::at(int s, int a) {
    if (s < 0 || s >= states_ || a < 0 || a >= actions_)
        throw Error("q-table: index out of range");
    return {table_.data() + static_cast<std::size_t>((s * actions_ + a) * objectives_),
            static_cast<std::size_t>(objectives_)};
}

std::span<const double> QTableVector::at(int s, int a) const {
    return const_cast<QTableVector*>(this)->at(s, a);
}

std::vector<double> QTableVector::scalarized_row(int s, const WeightVector& weights) const {
    std::vector<double> row(static_cast<std::size_t>(actions_));
    for (int a = 0; a < actions_; ++a)
        row[static_cast<std::size_t>(a)] = dot(weights.span(), at(s, a));
    return row;
}

QTableEnvelope::QTableEnvelope(int state_count, int action_count, int objective_count,
                               std::vector<WeightVector> weight_set, LearningRate rate)
    : states_(state_count), actions_(action_count), objectives_(objective_count),
      weight_set_(std::move(weight_set)), rate_(rate) {
    check_sizes(states_, actions_, objectives_);
    validate(rate_);
    if (weight_set_.empty())
        throw Error("envelope: weight set must not be empty");
    for (const auto& w : weight_set_)
        if (w.size() != static_cast<std::size_t>(objectives_))
            throw Error("envelope: weight length must equal objective count");
    table_.assign(static_cast<std::size_t>(states_ * actions_ * objectives_) * weight_set_.size(),
                  0.0);
}

std::size_t QTableEnvelope::weight_index(const WeightVector& weights) const {
    for (std::size_t i = 0; i < weight_set_.size(); ++i)
        if (weight_set_[i] == weights)
            return i;
    throw Error("envelope: weight vector is not in the weight set");
}

std::span<double> QTableEnvelope::at(int s, int a, std::size_t w) {
    if (s < 0 || s >= states_ || a < 0 || a >= actions_ || w >= weight_set_.size())
        throw Error("q-table: index out of range");
    const std::size_t cell =
        (static_cast<std::size_t>(s * actions_ + a) * weight_set_.size() + w) *
        static_cast<std::size_t>(objectives_);
    return {table_.data() + cell, static_cast<std::size_t>(objectives_)};
}

std::span<const double> QTableEnvelope::at(int s, int a, std::size_t w) const {
    return const_cast<QTableEnvelope*>(this)->at(s, a, w);
}

std::vector<double> QTableEnvelope::scalarized_row(int s, const WeightVector& weights) const {
    std::vector<double> row(static_cast<std::size_t>(actions_),
                            -std::numeric_limits<double>::infinity());
    for (int a = 0; a < actions_; ++a)
        for (std::size_t w = 0; w < weight_set_.size(); ++w)
            row[static_cast<std::size_t>(a)] =
                std::max(row[static_cast<std::size_t>(a)], dot(weights.span(), at(s, a, w)));
    return row;
}

QTableEsr::QTableEsr(int action_count, double alpha) : actions_(action_count), alpha_(alpha) {
    check_sizes(1, actions_, 1);
    if (!(alpha_ > 0.0 && alpha_ <= 1.0))
        throw Error("alpha must lie in (0, 1]");
}

std::vector<double> QTableEsr::row(int state, const ObjectiveVector& accrued) const {
    if (auto it = table_.find(StateKey{state, discretize_accrued(accrued)}); it != table_.end())
        return it->second.value;
    return std::vector<double>(static_cast<std::size_t>(actions_), 0.0);
}

QTableEsr::Row& QTableEsr::entry(const StateKey& key) {
    auto [it, inserted] = table_.try_emplace(key);
    if (inserted) {
        it->second.value.assign(static_cast<std::size_t>(actions_), 0.0);
        it->second.visits.assign(static_cast<std::size_t>(actions_), 0);
    }
    return it->second;
}

void update_scalarized_q(QTableScalar& q, const Experience& e, const Scalarization& g,
                         const WeightVector& weights, const ReferencePoint* reference) {
    const double reward = g(e.reward, weights, reference);
    const double bootstrap = e.terminal ? 0.0 : q.rate().gamma * q.max(e.next_state);
    double& cell = q.at(e.state, e.action);
    cell += q.rate().alpha * (reward + bootstrap - cell);
}

void update_vector_q(QTableVector& q, const Experience& e, const WeightVector& weights) {
    require_same_length(e.reward, weights.span(), "update_vector_q");
    const auto m = static_cast<std::size_t>(q.objective_count());
    std::vector<double> next(m, 0.0);
    if (!e.terminal) {
        const int best = argmax_lowest(q.scalarized_row(e.next_state, weights));
        const auto src = q.at(e.next_state, best);
        next.assign(src.begin(), src.end());
    }
    auto cell = q.at(e.state, e.action);
    for (std::size_t i = 0; i < m; ++i)
        cell[i] += q.rate().alpha * (e.reward[i] + q.rate().gamma * next[i] - cell[i]);
}

void update_envelope_q(QTableEnvelope& q, const Experience& e, const WeightVector& weights) {
    const std::size_t w = q.weight_index(weights);
    const auto m = static_cast<std::size_t>(q.objective_count());
    std::vector<double> next(m, 0.0);
    if (!e.terminal) {
        double best = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < q.action_count(); ++a) {
            for (std::size_t k = 0; k < q.weight_set().size(); ++k) {
                const auto cand = q.at(e.next_state, a, k);
                const double score = dot(weights.span(), cand);
                if (score > best) {
                    best = score;
                    next.assign(cand.begin(), cand.end());
                }
            }
        }
    }
    auto cell = q.at(e.state, e.action, w);
    for (std::size_t i = 0; i < m; ++i)
        cell[i] += q.rate().alpha * (e.reward[i] + q.rate().gamma * next[i] - cell[i]);
}

void update_esr_mc(QTableEsr& q, const Episode& episode, const Scalarization& g,
                   const WeightVector& weights, const ReferencePoint* reference) {
    if (episode.empty() || !episode.back().terminal)
        throw Error("incomplete episode");
    const double target = g(total_return(episode), weights, reference);
    for (const auto& e : episode) {
        auto& row = q.entry(StateKey{e.state, discretize_accrued(e.accrued)});
        const auto a = static_cast<std::size_t>(e.action);
        row.value.at(a) += q.alpha() * (target - row.value[a]);
        ++row.visits[a];
    }
}

std::vector<double> action_values(const QTable& q, int state, const ObjectiveVector& accrued,
                                  const WeightVector& weights) {
    return std::visit(
        [&](const auto& table) -> std::vector<double> {
            using T = std::decay_t<decltype(table)>;
            if constexpr (std::is_same_v<T, QTableScalar>)
                return table.row(state);
            else if constexpr (std::is_same_v<T, QTableEsr>)
                return table.row(state, accrued);
            else
                return table.scalarized_row(state, weights);
        },
        q);
}

TabularPolicy greedy_policy(const QTable& q, const WeightVector& weights) {
    return std::visit(
        [&](const auto& table) -> TabularPolicy {
            using T = std::decay_t<decltype(table)>;
            if constexpr (std::is_same_v<T, QTableEsr>) {
                TabularPolicy policy(PolicyKind::greedy, table.action_count(), true);
                for (const auto& [key, row] : table.table())
                    policy.set_preferences(key, row.value);
                policy.set_default_preferences(
                    std::vector<double>(static_cast<std::size_t>(table.action_count()), 0.0));
                return policy;
            } else {
                TabularPolicy policy(PolicyKind::greedy, table.action_count());
                for (int s = 0; s < table.state_count(); ++s) {
                    if constexpr (std::is_same_v<T, QTableScalar>)
                        policy.set_preferences(StateKey{s, {}}, table.row(s));
                    else
                        policy.set_preferences(StateKey{s, {}}, table.scalarized_row(s, weights));
                }
                return policy;
            }
        },
        q);
}

void transfer_policy(const QTable& source, QTable& destination) {
    if (source.index() != destination.index())
        throw Error(std::string("transfer_policy: kind mismatch (") + kind_name(source) + " vs " +
                    kind_name(destination) + ")");
    destination = source;
}

const char* kind_name(const QTable& q) {
    static constexpr std::array<const char*, 4> names{"scalar", "vector", "envelope", "esr"};
    return names[q.index()];
}

std::string serialize(const QTable& q) {
    std::ostringstream out;
    std::visit(
        [&](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            out << "# morld-qtable v1 " << kind_name(q) << " actions=" << t.action_count();
            if constexpr (std::is_same_v<T, QTableScalar>) {
                out << " states=" << t.state_count() << '\n';
                for (int s = 0; s < t.state_count(); ++s)
                    for (int a = 0; a < t.action_count(); ++a)
                        out << s << ' ' << a << ' ' << exact(t.at(s, a)) << '\n';
            } else if constexpr (std::is_same_v<T, QTableVector>) {
                out << " states=" << t.state_count() << " objectives=" << t.objective_count()
                    << '\n';
                for (int s = 0; s < t.state_count(); ++s)
                    for (int a = 0; a < t.action_count(); ++a) {
                        out << s << ' ' << a;
                        for (double v : t.at(s, a))
                            out << ' ' << exact(v);
                        out << '\n';
                    }
            } else if constexpr (std::is_same_v<T, QTableEnvelope>) {
                out << " states=" << t.state_count() << " objectives=" << t.objective_count()
                    << " weights=" << t.weight_set().size() << '\n';
                for (int s = 0; s < t.state_count(); ++s)
                    for (int a = 0; a < t.action_count(); ++a)
                        for (std::size_t w = 0; w < t.weight_set().size(); ++w) {
                            out << s << ' ' << a << ' ' << w;
                            for (double v : t.at(s, a, w))
                                out << ' ' << exact(v);
                            out << '\n';
                        }
            } else {
                out << " keys=" << t.table().size() << '\n';
                for (const auto& [key, row] : t.table())
                    for (int a = 0; a < t.action_count(); ++a) {
                        out << key.state << " [";
                        for (std::size_t i = 0; i < key.accrued.size(); ++i)
                            out << (i ? " " : "") << exact(static_cast<double>(key.accrued[i]) * 1e-6);
                        out << "] " << a << ' ' << exact(row.value[static_cast<std::size_t>(a)])
                            << ' ' << row.visits[static_cast<std::size_t>(a)] << '\n';
                    }
            }
        },
        q);
    return out.str();
}

} // namespace morld
