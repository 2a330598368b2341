#include "morld/momdp.hpp"

#include <cmath>
#include <numeric>

#include "morld/archive.hpp"

namespace morld {

namespace {

constexpr double kProbabilityTolerance = 1e-12;
constexpr double kAccruedGrid = 1e6;

double probability_sum(const std::vector<std::pair<int, double>>& dist) {
    double s = 0.0;
    for (const auto& [state, p] : dist)
        s += p;
    return s;
}

template <typename Weights>
std::size_t draw_index(const Weights& probabilities, Rng& rng) {
    if (probabilities.size() == 1)
        return 0;
    const double u = rng.uniform01();
    double cumulative = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        cumulative += probabilities[i];
        if (u < cumulative)
            return i;
    }
    return probabilities.size() - 1;
}

} // namespace

Momdp::Momdp(std::string name, int state_count, int action_count, int objective_count,
             int max_episode_steps, std::vector<std::pair<int, double>> initial_distribution,
             std::vector<std::vector<Outcome>> transitions)
    : name_(std::move(name)), state_count_(state_count), action_count_(action_count),
      objective_count_(objective_count), max_episode_steps_(max_episode_steps),
      initial_(std::move(initial_distribution)), transitions_(std::move(transitions)) {
    if (state_count_ < 1 || action_count_ < 1 || objective_count_ < 1 || max_episode_steps_ < 1)
        throw Error("momdp: counts must be positive");
    if (transitions_.size() != static_cast<std::size_t>(state_count_ * action_count_))
        throw Error("momdp: transition table must cover every (state, action)");
    if (initial_.empty() || std::abs(probability_sum(initial_) - 1.0) > kProbabilityTolerance)
        throw Error("momdp: initial distribution must sum to 1");
    for (const auto& [s, p] : initial_)
        if (s < 0 || s >= state_count_ || p < 0.0)
            throw Error("momdp: invalid initial distribution entry");
    if (initial_.size() > 1)
        deterministic_ = false;
    for (const auto& outcomes : transitions_) {
        if (outcomes.empty())
            throw Error("momdp: empty transition distribution");
        double total = 0.0;
        for (const auto& o : outcomes) {
            if (o.probability < 0.0 || o.next_state < 0 || o.next_state >= state_count_)
                throw Error("momdp: invalid outcome");
            if (o.reward.size() != static_cast<std::size_t>(objective_count_))
                throw Error("momdp: reward vector length must equal objective count");
            if (!all_finite(o.reward))
                throw Error("momdp: rewards must be finite");
            total += o.probability;
        }
        if (std::abs(total - 1.0) > kProbabilityTolerance)
            throw Error("momdp: transition probabilities must sum to 1");
        if (outcomes.size() > 1)
            deterministic_ = false;
    }
}

const std::vector<Outcome>& Momdp::outcomes(int state, int action) const {
    if (state < 0 || state >= state_count_ || action < 0 || action >= action_count_)
        throw Error("momdp: state or action out of range");
    return transitions_[static_cast<std::size_t>(state * action_count_ + action)];
}

int Momdp::sample_initial(Rng& rng) const {
    std::vector<double> probs;
    probs.reserve(initial_.size());
    for (const auto& [s, p] : initial_)
        probs.push_back(p);
    return initial_[draw_index(probs, rng)].first;
}

const Outcome& Momdp::sample(int state, int action, Rng& rng) const {
    const auto& outs = outcomes(state, action);
    if (outs.size() == 1)
        return outs.front();
    std::vector<double> probs;
    probs.reserve(outs.size());
    for (const auto& o : outs)
        probs.push_back(o.probability);
    return outs[draw_index(probs, rng)];
}

Momdp DstCorridorEnv::make() {
    const int depth = static_cast<int>(treasure_values.size());
    std::vector<std::vector<Outcome>> transitions;
    for (int column = 0; column < depth; ++column) {
        const bool last = column + 1 == depth;
        transitions.push_back({Outcome{1.0, last ? column : column + 1, {0.0, -1.0}, last}});
        transitions.push_back({Outcome{1.0, column, {treasure_values[column], -1.0}, true}});
    }
    return Momdp("dst-corridor", depth, 2, 2, depth + 1, {{0, 1.0}}, std::move(transitions));
}

Momdp TinyTreeEnv::make() {
    std::vector<std::vector<Outcome>> transitions{
        {Outcome{1.0, 1, {0.0, 0.0}, false}}, // root, left
        {Outcome{1.0, 2, {0.0, 0.0}, false}}, // root, right
        {Outcome{1.0, 1, {4.0, 0.0}, true}},
        {Outcome{1.0, 1, {3.0, 1.0}, true}},
        {Outcome{1.0, 2, {1.0, 3.0}, true}},
        {Outcome{1.0, 2, {0.0, 4.0}, true}},
    };
    return Momdp("tiny-tree", 3, 2, 2, 2, {{0, 1.0}}, std::move(transitions));
}

Momdp make_env(const std::string& id) {
    if (id == "dst-corridor")
        return DstCorridorEnv::make();
    if (id == "tiny-tree")
        return TinyTreeEnv::make();
    throw Error("unknown environment id '" + id + "'");
}

std::vector<std::string> registered_envs() { return {"dst-corridor", "tiny-tree"}; }

std::vector<std::int64_t> discretize_accrued(const ObjectiveVector& accrued) {
    std::vector<std::int64_t> key(accrued.size());
    for (std::size_t i = 0; i < accrued.size(); ++i)
        key[i] = std::llround(accrued[i] * kAccruedGrid);
    return key;
}

TabularPolicy::TabularPolicy(PolicyKind kind, int action_count, bool conditions_on_accrued)
    : kind_(kind), action_count_(action_count), conditions_on_accrued_(conditions_on_accrued) {
    if (action_count_ < 1)
        throw Error("policy: action count must be positive");
}

TabularPolicy TabularPolicy::deterministic(const std::vector<int>& actions, int action_count) {
    TabularPolicy policy(PolicyKind::greedy, action_count);
    for (std::size_t s = 0; s < actions.size(); ++s) {
        std::vector<double> row(static_cast<std::size_t>(action_count), 0.0);
        row.at(static_cast<std::size_t>(actions[s])) = 1.0;
        policy.set_preferences(StateKey{static_cast<int>(s), {}}, std::move(row));
    }
    return policy;
}

void TabularPolicy::set_epsilon(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw Error("policy: epsilon must lie in [0, 1]");
    epsilon_ = epsilon;
}

void TabularPolicy::set_temperature(double temperature) {
    if (!(temperature > 0.0))
        throw Error("policy: temperature must be positive");
    temperature_ = temperature;
}

void TabularPolicy::set_preferences(const StateKey& key, std::vector<double> row) {
    if (row.size() != static_cast<std::size_t>(action_count_))
        throw Error("policy: preference row must have one entry per action");
    table_[key] = std::move(row);
}

void TabularPolicy::set_default_preferences(std::vector<double> row) {
    if (row.size() != static_cast<std::size_t>(action_count_))
        throw Error("policy: preference row must have one entry per action");
    default_row_ = std::move(row);
}

const std::vector<double>& TabularPolicy::preferences(int state,
                                                      const ObjectiveVector& accrued) const {
    StateKey key{state, conditions_on_accrued_ ? discretize_accrued(accrued)
                                               : std::vector<std::int64_t>{}};
    if (auto it = table_.find(key); it != table_.end())
        return it->second;
    if (default_row_)
        return *default_row_;
    throw Error("unreachable-state policy gap");
}

int argmax_lowest(const std::vector<double>& row) {
    int best = 0;
    for (std::size_t a = 1; a < row.size(); ++a)
        if (row[a] > row[static_cast<std::size_t>(best)])
            best = static_cast<int>(a);
    return best;
}

int TabularPolicy::greedy_action(int state, const ObjectiveVector& accrued) const {
    return argmax_lowest(preferences(state, accrued));
}

int TabularPolicy::select(int state, const ObjectiveVector& accrued, Rng& rng) const {
    const auto& row = preferences(state, accrued);
    switch (kind_) {
    case PolicyKind::greedy:
        return argmax_lowest(row);
    case PolicyKind::epsilon_greedy:
        if (rng.uniform01() < epsilon_)
            return static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(action_count_)));
        return argmax_lowest(row);
    case PolicyKind::softmax: {
        const double top = row[static_cast<std::size_t>(argmax_lowest(row))];
        std::vector<double> weights(row.size());
        double total = 0.0;
        for (std::size_t a = 0; a < row.size(); ++a) {
            weights[a] = std::exp((row[a] - top) / temperature_);
            total += weights[a];
        }
        for (double& w : weights)
            w /= total;
        return static_cast<int>(draw_index(weights, rng));
    }
    }
    return 0;
}

Rollout rollout(const Momdp& env, const TabularPolicy& policy, std::uint64_t rng_seed) {
    if (policy.action_count() != env.action_count())
        throw Error("rollout: policy and environment disagree on action count");
    Rng env_rng = Rng::derive(rng_seed, stream::environment);
    Rng policy_rng = Rng::derive(rng_seed, stream::exploration);

    const auto m = static_cast<std::size_t>(env.objective_count());
    Rollout result;
    result.episodic_return.assign(m, 0.0);
    int state = env.sample_initial(env_rng);
    for (int t = 0; t < env.max_episode_steps(); ++t) {
        const int action = policy.select(state, result.episodic_return, policy_rng);
        const Outcome& out = env.sample(state, action, env_rng);
        const bool truncated = t + 1 == env.max_episode_steps();
        result.trace.push_back(Experience{state, action, out.reward, out.next_state,
                                          out.terminal || truncated, result.episodic_return});
        for (std::size_t i = 0; i < m; ++i)
            result.episodic_return[i] += out.reward[i];
        if (out.terminal)
            break;
        state = out.next_state;
    }
    return result;
}

ObjectiveVector evaluate_policy(const Momdp& env, const TabularPolicy& policy, int episodes,
                                double gamma, std::uint64_t rng_seed) {
    if (episodes < 1)
        throw Error("evaluate_policy: episodes must be >= 1");
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw Error("evaluate_policy: gamma must lie in [0, 1]");
    const auto m = static_cast<std::size_t>(env.objective_count());
    ObjectiveVector total(m, 0.0);
    Rng seeds = Rng::derive(rng_seed, stream::evaluation);
    for (int e = 0; e < episodes; ++e) {
        const Rollout r = rollout(env, policy, seeds.next_u64());
        double discount = 1.0;
        for (const auto& step : r.trace) {
            for (std::size_t i = 0; i < m; ++i)
                total[i] += discount * step.reward[i];
            discount *= gamma;
        }
    }
    for (double& v : total)
        v /= episodes;
    return total;
}

std::vector<EnumeratedPolicy> enumerate_deterministic_policies(const Momdp& env, double gamma) {
    const int states = env.state_count();
    const int actions = env.action_count();
    double count = 1.0;
    for (int s = 0; s < states; ++s) {
        count *= actions;
        if (count > 1e6)
            throw Error("oracle too large");
    }

    const auto m = static_cast<std::size_t>(env.objective_count());
    const auto n_states = static_cast<std::size_t>(states);
    std::vector<EnumeratedPolicy> result;
    result.reserve(static_cast<std::size_t>(count));
    std::vector<int> assignment(n_states, 0);
    std::vector<ObjectiveVector> value(n_states), next(n_states);
    while (true) {
        // Finite-horizon evaluation: value[s] is the expected discounted
        // return with h steps left, built up from h = 0.
        for (auto& v : value)
            v.assign(m, 0.0);
        for (int h = 1; h <= env.max_episode_steps(); ++h) {
            for (std::size_t s = 0; s < n_states; ++s) {
                next[s].assign(m, 0.0);
                for (const auto& o : env.outcomes(static_cast<int>(s), assignment[s])) {
                    const auto& tail = value[static_cast<std::size_t>(o.next_state)];
                    for (std::size_t i = 0; i < m; ++i)
                        next[s][i] +=
                            o.probability * (o.reward[i] + (o.terminal ? 0.0 : gamma * tail[i]));
                }
            }
            std::swap(value, next);
        }
        ObjectiveVector start(m, 0.0);
        for (const auto& [s, p] : env.initial_distribution())
            for (std::size_t i = 0; i < m; ++i)
                start[i] += p * value[static_cast<std::size_t>(s)][i];
        result.push_back(EnumeratedPolicy{assignment, std::move(start)});

        std::size_t pos = 0;
        while (pos < n_states && ++assignment[pos] == actions)
            assignment[pos++] = 0;
        if (pos == n_states)
            break;
    }
    return result;
}

std::vector<ObjectiveVector> true_pareto_front(const Momdp& env, double gamma) {
    std::vector<ObjectiveVector> values;
    for (auto& p : enumerate_deterministic_policies(env, gamma))
        values.push_back(std::move(p.value));
    return nondominated(values);
}

ObjectiveVector mixture_value(const std::vector<ObjectiveVector>& values,
                              const std::vector<double>& probabilities) {
    if (values.size() != probabilities.size())
        throw Error("mixture_value: length mismatch");
    if (values.empty())
        throw Error("mixture_value: no policies");
    double total = 0.0;
    for (double p : probabilities) {
        if (p < 0.0)
            throw Error("mixture_value: probabilities must be non-negative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw Error("mixture_value: probabilities must sum to 1");
    ObjectiveVector mix(values.front().size(), 0.0);
    for (std::size_t k = 0; k < values.size(); ++k) {
        require_same_length(values[k], mix, "mixture_value");
        for (std::size_t i = 0; i < mix.size(); ++i)
            mix[i] += probabilities[k] * values[k][i];
    }
    return mix;
}

} // namespace morld
