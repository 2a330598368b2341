#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "morld/decomposition.hpp"
#include "morld/momdp.hpp"

namespace morld {

struct LearningRate {
    double alpha = 0.1;
    double gamma = 1.0;
    bool operator==(const LearningRate&) const = default;
};

void validate(const LearningRate& rate);

// One scalar per (state, action); learns the scalarized reward.
class QTableScalar {
public:
    QTableScalar(int state_count, int action_count, LearningRate rate);

    int state_count() const { return states_; }
    int action_count() const { return actions_; }
    const LearningRate& rate() const { return rate_; }

    double& at(int s, int a) { return table_[index(s, a)]; }
    double at(int s, int a) const { return table_[index(s, a)]; }
    std::vector<double> row(int s) const;
    double max(int s) const;

    const std::vector<double>& raw() const { return table_; }
    bool operator==(const QTableScalar&) const = default;

private:
    std::size_t index(int s, int a) const;

    int states_;
    int actions_;
    LearningRate rate_;
    std::vector<double> table_;
};

// One m-vector per (state, action).
class QTableVector {
public:
    QTableVector(int state_count, int action_count, int objective_count, LearningRate rate);

    int state_count() const { return states_; }
    int action_count() const { return actions_; }
    int objective_count() const { return objectives_; }
    const LearningRate& rate() const { return rate_; }

    std::span<double> at(int s, int a);
    std::span<const double> at(int s, int a) const;
    // Row of weighted sums w^T q(s, .).
    std::vector<double> scalarized_row(int s, const WeightVector& weights) const;

    const std::vector<double>& raw() const { return table_; }
    bool operator==(const QTableVector&) const = default;

private:
    int states_;
    int actions_;
    int objectives_;
    LearningRate rate_;
    std::vector<double> table_;
};

// Vector Q-values additionally indexed by a finite set of weights.
class QTableEnvelope {
public:
    QTableEnvelope(int state_count, int action_count, int objective_count,
                   std::vector<WeightVector> weight_set, LearningRate rate);

    int state_count() const { return states_; }
    int action_count() const { return actions_; }
    int objective_count() const { return objectives_; }
    const LearningRate& rate() const { return rate_; }
    const std::vector<WeightVector>& weight_set() const { return weight_set_; }
    std::size_t weight_index(const WeightVector& weights) const;

    std::span<double> at(int s, int a, std::size_t w);
    std::span<const double> at(int s, int a, std::size_t w) const;
    // max over the weight set of weights^T q(s, a, w'), per action.
    std::vector<double> scalarized_row(int s, const WeightVector& weights) const;

    const std::vector<double>& raw() const { return table_; }
    bool operator==(const QTableEnvelope&) const = default;

private:
    int states_;
    int actions_;
    int objectives_;
    std::vector<WeightVector> weight_set_;
    LearningRate rate_;
    std::vector<double> table_;
};

// Monte-Carlo action values over (state, accrued reward) keys. Missing keys
// read as zero.
class QTableEsr {
public:
    struct Row {
        std::vector<double> value;
        std::vector<std::int64_t> visits;
        bool operator==(const Row&) const = default;
    };

    QTableEsr(int action_count, double alpha);

    int action_count() const { return actions_; }
    double alpha() const { return alpha_; }

    std::vector<double> row(int state, const ObjectiveVector& accrued) const;
    Row& entry(const StateKey& key);
    const std::map<StateKey, Row>& table() const { return table_; }

    bool operator==(const QTableEsr&) const = default;

private:
    int actions_;
    double alpha_;
    std::map<StateKey, Row> table_;
};

using QTable = std::variant<QTableScalar, QTableVector, QTableEnvelope, QTableEsr>;

void update_scalarized_q(QTableScalar& q, const Experience& e, const Scalarization& g,
                         const WeightVector& weights, const ReferencePoint* reference = nullptr);

void update_vector_q(QTableVector& q, const Experience& e, const WeightVector& weights);

// Bootstrap vector is the q(s', a', w') maximizing weights^T q over all
// actions and weights in the set; ties go to the lowest (action, weight index).
void update_envelope_q(QTableEnvelope& q, const Experience& e, const WeightVector& weights);

// Every step of a complete episode moves toward the scalarized episodic return.
void update_esr_mc(QTableEsr& q, const Episode& episode, const Scalarization& g,
                   const WeightVector& weights, const ReferencePoint* reference = nullptr);

// Action preferences the greedy policy maximizes at (state, accrued).
std::vector<double> action_values(const QTable& q, int state, const ObjectiveVector& accrued,
                                  const WeightVector& weights);

TabularPolicy greedy_policy(const QTable& q, const WeightVector& weights);

// Deep copy of source into destination; both must hold the same table kind.
void transfer_policy(const QTable& source, QTable& destination);

const char* kind_name(const QTable& q);

// Line-oriented text dump, see README for the format.
std::string serialize(const QTable& q);

} // namespace morld
