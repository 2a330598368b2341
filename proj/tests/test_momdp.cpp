#include <algorithm>
#include <random>

#include "doctest.h"
#include "morld/archive.hpp"
#include "morld/momdp.hpp"

using namespace morld;

namespace {

TabularPolicy descend_at(int column) {
    std::vector<int> actions(5, DstCorridorEnv::advance);
    actions[static_cast<std::size_t>(column)] = DstCorridorEnv::descend;
    return TabularPolicy::deterministic(actions, 2);
}

bool contains(const std::vector<ObjectiveVector>& set, const ObjectiveVector& v) {
    return std::find(set.begin(), set.end(), v) != set.end();
}

} // namespace

TEST_CASE("environments satisfy their structural invariants") {
    for (const auto& id : registered_envs()) {
        const Momdp env = make_env(id);
        CHECK(env.deterministic());
        CHECK(env.objective_count() == 2);
    }
    CHECK_THROWS_WITH_AS(make_env("mo-halfcheetah"), "unknown environment id 'mo-halfcheetah'",
                         Error);
}

TEST_CASE("momdp rejects malformed tables") {
    std::vector<std::vector<Outcome>> bad{{Outcome{0.5, 0, {0.0}, true}}};
    CHECK_THROWS_AS(Momdp("bad", 1, 1, 1, 1, {{0, 1.0}}, bad), Error);
    std::vector<std::vector<Outcome>> wrong_m{{Outcome{1.0, 0, {0.0, 1.0}, true}}};
    CHECK_THROWS_AS(Momdp("bad", 1, 1, 1, 1, {{0, 1.0}}, wrong_m), Error);
    std::vector<std::vector<Outcome>> ok{{Outcome{1.0, 0, {0.0}, true}}};
    CHECK_THROWS_AS(Momdp("bad", 1, 1, 1, 1, {{0, 0.9}}, ok), Error);
}

TEST_CASE("rollout on the corridor follows the map") {
    const Momdp env = DstCorridorEnv::make();
    const auto r0 = rollout(env, descend_at(0), 7);
    CHECK(r0.episodic_return == ObjectiveVector{1, -1});
    CHECK(r0.trace.size() == 1);

    const auto r4 = rollout(env, descend_at(4), 7);
    CHECK(r4.episodic_return == ObjectiveVector{10, -5});
    REQUIRE(r4.trace.size() == 5);
    // accrued tracks the reward collected before each step
    CHECK(r4.trace[0].accrued == ObjectiveVector{0, 0});
    CHECK(r4.trace[3].accrued == ObjectiveVector{0, -3});
    CHECK(r4.trace.back().terminal);

    const auto all_advance = rollout(env, TabularPolicy::deterministic({0, 0, 0, 0, 0}, 2), 1);
    CHECK(all_advance.episodic_return == ObjectiveVector{0, -5});
}

TEST_CASE("rollout on the tiny tree reads the leaf") {
    const Momdp env = TinyTreeEnv::make();
    CHECK(rollout(env, TabularPolicy::deterministic({0, 0, 0}, 2), 0).episodic_return ==
          ObjectiveVector{4, 0});
    CHECK(rollout(env, TabularPolicy::deterministic({1, 0, 1}, 2), 0).episodic_return ==
          ObjectiveVector{0, 4});
}

TEST_CASE("rollout return is the component-wise sum of the trace") {
    const Momdp env = DstCorridorEnv::make();
    TabularPolicy policy(PolicyKind::epsilon_greedy, 2);
    policy.set_epsilon(0.5);
    policy.set_default_preferences({0.0, 0.0});
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto r = rollout(env, policy, seed);
        ObjectiveVector sum{0, 0};
        for (const auto& e : r.trace)
            for (std::size_t i = 0; i < 2; ++i)
                sum[i] += e.reward[i];
        CHECK(sum == r.episodic_return);
        CHECK(r.trace.size() <= static_cast<std::size_t>(env.max_episode_steps()));
    }
}

TEST_CASE("a policy without an entry for a visited state is an error") {
    const Momdp env = DstCorridorEnv::make();
    TabularPolicy partial(PolicyKind::greedy, 2);
    partial.set_preferences(StateKey{0, {}}, {1.0, 0.0}); // advances into column 1
    CHECK_THROWS_WITH_AS(rollout(env, partial, 0), "unreachable-state policy gap", Error);
}

TEST_CASE("greedy ties break to the lowest action") {
    CHECK(argmax_lowest({0.5, 0.5}) == 0);
    CHECK(argmax_lowest({0.1, 0.9}) == 1);
    CHECK(argmax_lowest({2.0, 3.0, 3.0}) == 1);
}

TEST_CASE("evaluate_policy") {
    const Momdp dst = DstCorridorEnv::make();
    CHECK(evaluate_policy(dst, descend_at(0), 5, 1.0, 3) == ObjectiveVector{1, -1});
    CHECK(evaluate_policy(dst, descend_at(1), 5, 1.0, 3) == ObjectiveVector{2, -2});
    const Momdp tree = TinyTreeEnv::make();
    CHECK(evaluate_policy(tree, TabularPolicy::deterministic({0, 1, 0}, 2), 3, 0.0, 1) ==
          ObjectiveVector{0, 0});
    CHECK_THROWS_AS(evaluate_policy(dst, descend_at(0), 0, 1.0, 0), Error);
}

TEST_CASE("deterministic evaluation is seed independent and equals the DP value") {
    const Momdp env = DstCorridorEnv::make();
    for (double gamma : {1.0, 0.9, 0.5}) {
        for (const auto& p : enumerate_deterministic_policies(env, gamma)) {
            const auto policy = TabularPolicy::deterministic(p.actions, 2);
            const auto a = evaluate_policy(env, policy, 2, gamma, 11);
            const auto b = evaluate_policy(env, policy, 2, gamma, 99);
            CHECK(a == b);
            for (std::size_t i = 0; i < 2; ++i)
                CHECK(a[i] == doctest::Approx(p.value[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("enumeration oracle") {
    const Momdp dst = DstCorridorEnv::make();
    const auto policies = enumerate_deterministic_policies(dst, 1.0);
    CHECK(policies.size() == 32);
    std::vector<ObjectiveVector> values;
    for (const auto& p : policies)
        values.push_back(p.value);
    for (const ObjectiveVector& v : {ObjectiveVector{1, -1}, ObjectiveVector{2, -2},
                                     ObjectiveVector{3, -3}, ObjectiveVector{5, -4},
                                     ObjectiveVector{10, -5}})
        CHECK(contains(values, v));

    // every treasure is Pareto optimal
    const auto front = true_pareto_front(dst, 1.0);
    CHECK(front.size() == 5);

    const auto tree = enumerate_deterministic_policies(TinyTreeEnv::make(), 1.0);
    std::vector<ObjectiveVector> distinct;
    for (const auto& p : tree)
        if (!contains(distinct, p.value))
            distinct.push_back(p.value);
    CHECK(distinct.size() == 4);
    for (const auto& p : enumerate_deterministic_policies(TinyTreeEnv::make(), 0.0))
        CHECK(p.value == ObjectiveVector{0, 0});
}

TEST_CASE("enumeration refuses oversized problems") {
    std::vector<std::vector<Outcome>> t;
    for (int s = 0; s < 21; ++s)
        for (int a = 0; a < 2; ++a)
            t.push_back({Outcome{1.0, s, {0.0}, true}});
    const Momdp big("big", 21, 2, 1, 1, {{0, 1.0}}, t);
    CHECK_THROWS_WITH_AS(enumerate_deterministic_policies(big, 1.0), "oracle too large", Error);
}

TEST_CASE("only the extreme treasures lie on the convex hull") {
    const ObjectiveVector lo{1, -1}, hi{10, -5};
    for (const ObjectiveVector& p :
         {ObjectiveVector{2, -2}, ObjectiveVector{3, -3}, ObjectiveVector{5, -4}}) {
        // height of the chord lo-hi at p's first coordinate
        const double t = (p[0] - lo[0]) / (hi[0] - lo[0]);
        const double chord = lo[1] + t * (hi[1] - lo[1]);
        CHECK(p[1] < chord);
    }
}

TEST_CASE("mixture_value") {
    CHECK(mixture_value({{1, -1}, {10, -5}}, {0.5, 0.5}) == ObjectiveVector{5.5, -3});
    CHECK(mixture_value({{1, -1}}, {1.0}) == ObjectiveVector{1, -1});
    const auto mix = mixture_value({{1, -1}, {10, -5}}, {0.75, 0.25});
    CHECK(mix[0] == doctest::Approx(3.25));
    CHECK(mix[1] == doctest::Approx(-2));
    CHECK(dominates(mix, {2, -2}));
    CHECK_THROWS_AS(mixture_value({{1, -1}}, {0.5, 0.5}), Error);
    CHECK_THROWS_AS(mixture_value({{1, -1}, {0, 0}}, {0.7, 0.7}), Error);
}

TEST_CASE("mixture_value stays inside the convex hull of its inputs") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const ObjectiveVector a{u(gen) * 10, -u(gen) * 10}, b{u(gen) * 10, -u(gen) * 10};
        const double p = u(gen);
        const auto mix = mixture_value({a, b}, {p, 1.0 - p});
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(mix[i] >= std::min(a[i], b[i]) - 1e-12);
            CHECK(mix[i] <= std::max(a[i], b[i]) + 1e-12);
        }
        // collinear with a and b
        const double cross = (b[0] - a[0]) * (mix[1] - a[1]) - (b[1] - a[1]) * (mix[0] - a[0]);
        CHECK(std::abs(cross) < 1e-9);
    }
}
