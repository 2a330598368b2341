#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "morld/rng.hpp"
#include "morld/types.hpp"

namespace morld {

struct Outcome {
    double probability = 1.0;
    int next_state = 0;
    ObjectiveVector reward;
    bool terminal = false;
};

// A finite multi-objective MDP described by explicit outcome tables. Instances
// are immutable once built; every sampling call takes the caller's Rng.
class Momdp {
public:
    Momdp(std::string name, int state_count, int action_count, int objective_count,
          int max_episode_steps, std::vector<std::pair<int, double>> initial_distribution,
          std::vector<std::vector<Outcome>> transitions);

    const std::string& name() const { return name_; }
    int state_count() const { return state_count_; }
    int action_count() const { return action_count_; }
    int objective_count() const { return objective_count_; }
    int max_episode_steps() const { return max_episode_steps_; }
    bool deterministic() const { return deterministic_; }

    const std::vector<std::pair<int, double>>& initial_distribution() const { return initial_; }
    const std::vector<Outcome>& outcomes(int state, int action) const;

    // Draws from the RNG only when the distribution has more than one support point.
    int sample_initial(Rng& rng) const;
    const Outcome& sample(int state, int action, Rng& rng) const;

private:
    std::string name_;
    int state_count_;
    int action_count_;
    int objective_count_;
    int max_episode_steps_;
    std::vector<std::pair<int, double>> initial_;
    std::vector<std::vector<Outcome>> transitions_;
    bool deterministic_ = true;
};

// Corridor of depth columns along the seabed. Action 0 advances to the next
// column, action 1 descends and collects the treasure below the current
// column. Every step costs -1 on the second objective.
struct DstCorridorEnv {
    static constexpr int advance = 0;
    static constexpr int descend = 1;
    static inline const std::vector<double> treasure_values{1, 2, 3, 5, 10};
    static Momdp make();
};

// Two binary decisions, four leaves: (4,0) (3,1) (1,3) (0,4).
struct TinyTreeEnv {
    static constexpr int left = 0;
    static constexpr int right = 1;
    static Momdp make();
};

// "dst-corridor" or "tiny-tree".
Momdp make_env(const std::string& id);
std::vector<std::string> registered_envs();

// Accrued reward vectors are keyed on a 1e-6 grid. Integer-reward
// environments therefore map each accrued vector to a unique exact key.
std::vector<std::int64_t> discretize_accrued(const ObjectiveVector& accrued);

struct StateKey {
    int state = 0;
    std::vector<std::int64_t> accrued;
    auto operator<=>(const StateKey&) const = default;
};

struct Experience {
    int state = 0;
    int action = 0;
    ObjectiveVector reward;
    int next_state = 0;
    bool terminal = false;
    ObjectiveVector accrued; // undiscounted reward collected before this step
};

using Episode = std::vector<Experience>;

enum class PolicyKind { greedy, epsilon_greedy, softmax };

class TabularPolicy {
public:
    TabularPolicy(PolicyKind kind, int action_count, bool conditions_on_accrued = false);

    // One action per state, as a greedy one-hot table.
    static TabularPolicy deterministic(const std::vector<int>& actions, int action_count);

    PolicyKind kind() const { return kind_; }
    int action_count() const { return action_count_; }
    bool conditions_on_accrued() const { return conditions_on_accrued_; }

    double epsilon() const { return epsilon_; }
    void set_epsilon(double epsilon);
    double temperature() const { return temperature_; }
    void set_temperature(double temperature);

    void set_preferences(const StateKey& key, std::vector<double> row);
    // Row used for states without an explicit entry. Unset by default, in which
    // case visiting such a state is an error.
    void set_default_preferences(std::vector<double> row);

    const std::vector<double>& preferences(int state, const ObjectiveVector& accrued) const;
    int greedy_action(int state, const ObjectiveVector& accrued) const;
    int select(int state, const ObjectiveVector& accrued, Rng& rng) const;

    const std::map<StateKey, std::vector<double>>& table() const { return table_; }

private:
    PolicyKind kind_;
    int action_count_;
    bool conditions_on_accrued_;
    double epsilon_ = 0.0;
    double temperature_ = 1.0;
    std::map<StateKey, std::vector<double>> table_;
    std::optional<std::vector<double>> default_row_;
};

// Lowest index wins ties.
int argmax_lowest(const std::vector<double>& row);

struct Rollout {
    std::vector<Experience> trace;
    ObjectiveVector episodic_return; // undiscounted
};

Rollout rollout(const Momdp& env, const TabularPolicy& policy, std::uint64_t rng_seed);

ObjectiveVector evaluate_policy(const Momdp& env, const TabularPolicy& policy, int episodes,
                                double gamma, std::uint64_t rng_seed);

struct EnumeratedPolicy {
    std::vector<int> actions; // one action per state
    ObjectiveVector value;
};

// Exhaustive list of stationary deterministic policies with exact values from
// finite-horizon dynamic programming. Refuses more than 10^6 policies.
std::vector<EnumeratedPolicy> enumerate_deterministic_policies(const Momdp& env, double gamma);

// Distinct non-dominated values among enumerate_deterministic_policies, in
// order of first appearance.
std::vector<ObjectiveVector> true_pareto_front(const Momdp& env, double gamma);

ObjectiveVector mixture_value(const std::vector<ObjectiveVector>& values,
                              const std::vector<double>& probabilities);

} // namespace morld
