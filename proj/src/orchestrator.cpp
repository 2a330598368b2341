#include "morld/orchestrator.hpp"

#include <algorithm>
#include <cmath>

#include "morld/metrics.hpp"

namespace morld {

std::string to_string(LearnerKind kind) {
    switch (kind) {
    case LearnerKind::scalar_q: return "scalar-q";
    case LearnerKind::vector_q: return "vector-q";
    case LearnerKind::envelope_q: return "envelope-q";
    case LearnerKind::esr_mc: return "esr-mc";
    }
    return "?";
}

std::string to_string(Cooperation mode) {
    switch (mode) {
    case Cooperation::none: return "none";
    case Cooperation::shared_buffer: return "shared-buffer";
    case Cooperation::shared_buffer_neighborhood: return "shared-buffer-neighborhood";
    case Cooperation::transfer: return "transfer";
    }
    return "?";
}

std::string to_string(ScalarizationKind kind) {
    return kind == ScalarizationKind::weighted_sum ? "weighted-sum" : "tchebycheff";
}

std::string to_string(Replacement replacement) {
    return replacement == Replacement::fifo ? "fifo" : "diverse-crowding";
}

ObjectiveVector default_hv_reference(const std::string& env_id) {
    if (env_id == "dst-corridor")
        return {0.0, -50.0};
    if (env_id == "tiny-tree")
        return {-1.0, -1.0};
    throw ConfigError("hv_reference", "hv_reference has no default for env '" + env_id + "'");
}

void validate(const RunConfig& c) {
    const auto envs = registered_envs();
    if (std::find(envs.begin(), envs.end(), c.env) == envs.end())
        throw ConfigError("env", "env: unknown environment id '" + c.env + "'");
    if (c.population_size < 1)
        throw ConfigError("population_size", "population_size must be ≥ 1");
    if (c.steps_per_iteration < 1)
        throw ConfigError("steps_per_iteration", "steps_per_iteration must be ≥ 1");
    if (c.total_steps < 0)
        throw ConfigError("total_steps", "total_steps must be ≥ 0");
    if (c.total_steps > 0 && c.total_steps < c.steps_per_iteration)
        throw ConfigError("total_steps", "total_steps must be ≥ steps_per_iteration");
    if (c.update_passes < 1)
        throw ConfigError("update_passes", "update_passes must be ≥ 1");
    if (c.batch_size < 1)
        throw ConfigError("batch_size", "batch_size must be ≥ 1");
    if (!(c.gamma >= 0.0 && c.gamma <= 1.0))
        throw ConfigError("gamma", "gamma must lie in [0, 1]");
    if (!(c.alpha > 0.0 && c.alpha <= 1.0))
        throw ConfigError("alpha", "alpha must lie in (0, 1]");
    if (!(c.epsilon_start >= 0.0 && c.epsilon_start <= 1.0))
        throw ConfigError("epsilon_start", "epsilon_start must lie in [0, 1]");
    if (!(c.epsilon_min >= 0.0 && c.epsilon_min <= c.epsilon_start))
        throw ConfigError("epsilon_min", "epsilon_min must lie in [0, epsilon_start]");
    if (!(c.epsilon_decay_fraction >= 0.0 && c.epsilon_decay_fraction <= 1.0))
        throw ConfigError("epsilon_decay_fraction", "epsilon_decay_fraction must lie in [0, 1]");
    if (!(c.delta > 1.0))
        throw ConfigError("delta", "delta must be > 1");
    if (!(c.tau >= 0.0))
        throw ConfigError("tau", "tau must be ≥ 0");
    if (c.psa_period_steps < 1)
        throw ConfigError("psa_period_steps", "psa_period_steps must be ≥ 1");
    if (c.eval_episodes < 1)
        throw ConfigError("eval_episodes", "eval_episodes must be ≥ 1");
    if (c.buffer_capacity < 1)
        throw ConfigError("buffer_capacity", "buffer_capacity must be ≥ 1");
    if (c.eum_weights < 2)
        throw ConfigError("eum_weights", "eum_weights must be ≥ 2");
    if (c.checkpoint_stride < 1)
        throw ConfigError("checkpoint_stride", "checkpoint_stride must be ≥ 1");
    if ((c.learner == LearnerKind::vector_q || c.learner == LearnerKind::envelope_q) &&
        c.scalarization != ScalarizationKind::weighted_sum)
        throw ConfigError("scalarization",
                          "scalarization must be weighted-sum for " + to_string(c.learner));
    if (c.learner == LearnerKind::envelope_q && c.psa_enabled)
        throw ConfigError("psa_enabled", "psa_enabled must be false for envelope-q");
    const Momdp env = make_env(c.env);
    if (!c.initial_weights.empty()) {
        if (c.initial_weights.size() != c.population_size)
            throw ConfigError("initial_weights", "initial_weights must have population_size entries");
        for (const auto& w : c.initial_weights)
            if (w.size() != static_cast<std::size_t>(env.objective_count()))
                throw ConfigError("initial_weights", "initial_weights must have one entry per objective");
    } else if (c.population_size > 1)
        (void)generate_weights_uniform(static_cast<std::size_t>(env.objective_count()),
                                       c.population_size);
    if (c.hv_reference && c.hv_reference->size() != static_cast<std::size_t>(env.objective_count()))
        throw ConfigError("hv_reference", "hv_reference must have one entry per objective");
}

double epsilon_at(const RunConfig& c, std::int64_t step) {
    const double horizon = c.epsilon_decay_fraction * static_cast<double>(c.total_steps);
    if (!(horizon > 0.0))
        return c.epsilon_min;
    const double frac = std::min(1.0, static_cast<double>(step) / horizon);
    return std::max(c.epsilon_min, c.epsilon_start - (c.epsilon_start - c.epsilon_min) * frac);
}

namespace {

std::vector<WeightVector> uniform_population_weights(std::size_t m, std::size_t n) {
    if (n == 1) {
        // A single subproblem weighs every objective equally.
        return {WeightVector::normalized(std::vector<double>(m, 1.0))};
    }
    return generate_weights_uniform(m, n);
}

} // namespace

namespace {

RunConfig validated(RunConfig config) {
    validate(config);
    return config;
}

} // namespace

MorldRun::MorldRun(RunConfig config)
    : config_(validated(std::move(config))), env_(make_env(config_.env)),
      env_rng_(Rng::derive(config_.seed, stream::environment)),
      explore_rng_(Rng::derive(config_.seed, stream::exploration)),
      buffer_rng_(Rng::derive(config_.seed, stream::buffer)),
      eval_rng_(Rng::derive(config_.seed, stream::evaluation)) {
    scalarization_.kind = config_.scalarization;
    initialize();
}

QTable MorldRun::make_learner(const WeightVector& weight) const {
    const LearningRate rate{config_.alpha, config_.gamma};
    switch (config_.learner) {
    case LearnerKind::scalar_q:
        return QTableScalar(env_.state_count(), env_.action_count(), rate);
    case LearnerKind::vector_q:
        return QTableVector(env_.state_count(), env_.action_count(), env_.objective_count(), rate);
    case LearnerKind::envelope_q: {
        std::vector<WeightVector> set;
        for (const auto& sp : population_)
            set.push_back(sp.weight);
        if (set.empty())
            set.push_back(weight);
        return QTableEnvelope(env_.state_count(), env_.action_count(), env_.objective_count(),
                              std::move(set), rate);
    }
    case LearnerKind::esr_mc:
        return QTableEsr(env_.action_count(), config_.alpha);
    }
    throw Error("unknown learner kind");
}

const ReferencePoint* MorldRun::reference_ptr() const {
    return reference_ ? &*reference_ : nullptr;
}

void MorldRun::initialize() {
    const auto m = static_cast<std::size_t>(env_.objective_count());
    const auto n = config_.population_size;
    const auto weights =
        config_.initial_weights.empty() ? uniform_population_weights(m, n) : config_.initial_weights;

    population_.clear();
    for (std::size_t i = 0; i < n; ++i)
        population_.push_back(Subproblem{i, weights[i], QTableScalar(1, 1, {}), 0, {}, {}, false});
    for (auto& sp : population_)
        sp.learner = make_learner(sp.weight);
    cursors_.assign(n, Cursor{});

    if (config_.scalarization == ScalarizationKind::tchebycheff)
        reference_ = ReferencePoint::adaptive(m, config_.tau);

    const bool shared = config_.cooperation == Cooperation::shared_buffer;
    const std::size_t buffer_count = shared ? 1 : n;
    if (config_.learner == LearnerKind::esr_mc)
        episode_buffers_.assign(buffer_count,
                                EpisodeBuffer(config_.buffer_capacity, config_.buffer_replacement));
    else
        step_buffers_.assign(buffer_count,
                             ExperienceBuffer(config_.buffer_capacity, config_.buffer_replacement));
    for (auto& sp : population_)
        sp.buffer_id = shared ? 0 : sp.index;

    hv_reference_ = config_.hv_reference ? *config_.hv_reference : default_hv_reference(config_.env);
    eum_weight_set_ = generate_weights_uniform(m, config_.eum_weights);
    try {
        reference_front_ = true_pareto_front(env_, config_.gamma);
    } catch (const Error&) {
        reference_front_.reset();
    }

    rebuild_neighborhood();
    evaluate_and_archive();
    next_adapt_step_ = config_.psa_period_steps;
    record_checkpoint();
}

void MorldRun::rebuild_neighborhood() {
    std::vector<WeightVector> weights;
    for (const auto& sp : population_)
        weights.push_back(sp.weight);
    neighborhood_ = build_neighborhood(weights, config_.neighborhood_k);
    for (auto& sp : population_) {
        sp.visible_buffers = {sp.buffer_id};
        if (config_.cooperation == Cooperation::shared_buffer_neighborhood)
            for (std::size_t j : neighborhood_[sp.index])
                sp.visible_buffers.push_back(population_[j].buffer_id);
    }
}

void MorldRun::observe(const std::vector<ObjectiveVector>& returns) {
    if (reference_ && !returns.empty())
        reference_ = update_reference_point(*reference_, returns);
}

void MorldRun::sample(std::size_t index, std::int64_t steps) {
    Subproblem& sp = population_[index];
    Cursor& cur = cursors_[index];
    const auto m = static_cast<std::size_t>(env_.objective_count());
    std::vector<Experience> collected;
    std::vector<ObjectiveVector> returns;

    for (std::int64_t k = 0; k < steps; ++k) {
        if (!cur.active) {
            cur.active = true;
            cur.state = env_.sample_initial(env_rng_);
            cur.steps = 0;
            cur.accrued.assign(m, 0.0);
            cur.partial.clear();
        }
        const double epsilon = epsilon_at(config_, env_steps_);
        int action;
        if (explore_rng_.uniform01() < epsilon)
            action = static_cast<int>(
                explore_rng_.uniform_index(static_cast<std::uint64_t>(env_.action_count())));
        else
            action = argmax_lowest(action_values(sp.learner, cur.state, cur.accrued, sp.weight));

        const Outcome& out = env_.sample(cur.state, action, env_rng_);
        ++cur.steps;
        ++env_steps_;
        const bool done = out.terminal || cur.steps >= env_.max_episode_steps();
        Experience e{cur.state, action, out.reward, out.next_state, done, cur.accrued};
        for (std::size_t i = 0; i < m; ++i)
            cur.accrued[i] += out.reward[i];
        if (config_.learner == LearnerKind::esr_mc)
            cur.partial.push_back(std::move(e));
        else
            collected.push_back(std::move(e));

        if (done) {
            ++episodes_;
            returns.push_back(cur.accrued);
            if (config_.learner == LearnerKind::esr_mc)
                episode_buffers_[sp.buffer_id].push(std::move(cur.partial));
            cur.active = false;
        } else {
            cur.state = out.next_state;
        }
    }
    if (!collected.empty())
        step_buffers_[sp.buffer_id].push(collected);
    observe(returns);
}

void MorldRun::improve_policies() {
    const ReferencePoint* z = reference_ptr();
    for (auto& sp : population_) {
        if (config_.learner == LearnerKind::esr_mc) {
            std::vector<const EpisodeBuffer*> visible;
            for (std::size_t b : sp.visible_buffers)
                visible.push_back(&episode_buffers_[b]);
            if (std::all_of(visible.begin(), visible.end(), [](auto* b) { return b->empty(); }))
                continue;
            auto& table = std::get<QTableEsr>(sp.learner);
            for (const auto& episode : sample_union(
                     visible, static_cast<std::size_t>(config_.update_passes), buffer_rng_))
                update_esr_mc(table, episode, scalarization_, sp.weight, z);
            sp.trained = true;
            continue;
        }

        std::vector<const ExperienceBuffer*> visible;
        for (std::size_t b : sp.visible_buffers)
            visible.push_back(&step_buffers_[b]);
        if (std::all_of(visible.begin(), visible.end(), [](auto* b) { return b->empty(); }))
            continue;
        for (int pass = 0; pass < config_.update_passes; ++pass) {
            const auto batch = sample_union(visible, config_.batch_size, buffer_rng_);
            std::visit(
                [&](auto& table) {
                    using T = std::decay_t<decltype(table)>;
                    for (const auto& e : batch) {
                        if constexpr (std::is_same_v<T, QTableScalar>)
                            update_scalarized_q(table, e, scalarization_, sp.weight, z);
                        else if constexpr (std::is_same_v<T, QTableVector>)
                            update_vector_q(table, e, sp.weight);
                        else if constexpr (std::is_same_v<T, QTableEnvelope>)
                            update_envelope_q(table, e, sp.weight);
                    }
                },
                sp.learner);
        }
        sp.trained = true;
    }
}

std::vector<ObjectiveVector> evaluate_population(std::vector<Subproblem>& population,
                                                 const Momdp& env, int episodes, double gamma,
                                                 std::uint64_t seed) {
    Rng seeds = Rng::derive(seed, stream::evaluation);
    std::vector<ObjectiveVector> evals;
    for (auto& sp : population) {
        sp.last_eval =
            evaluate_policy(env, greedy_policy(sp.learner, sp.weight), episodes, gamma, seeds.next_u64());
        evals.push_back(sp.last_eval);
    }
    return evals;
}

void MorldRun::evaluate_and_archive() {
    const auto evals = evaluate_population(population_, env_, config_.eval_episodes, config_.gamma,
                                           eval_rng_.next_u64());
    observe(evals);
    for (const auto& sp : population_) {
        if (!archive_.accepts(sp.last_eval))
            continue;
        archive_.insert(sp.last_eval, serialize(sp.learner),
                        ArchiveTag{static_cast<int>(sp.index), env_steps_});
    }
}

void MorldRun::adapt() {
    if (!config_.psa_enabled || population_.size() < 2)
        return;
    const auto front = archive_.front();
    bool changed = false;
    for (auto& sp : population_) {
        const auto neighbor = nearest_neighbor_index(sp.last_eval, front);
        if (!neighbor)
            continue;
        WeightVector next = adapt_weights_psa(sp.weight, sp.last_eval, front[*neighbor], config_.delta);
        if (!(next == sp.weight)) {
            sp.weight = std::move(next);
            changed = true;
        }
    }
    if (changed)
        rebuild_neighborhood();
}

void MorldRun::cooperate() {
    if (config_.cooperation != Cooperation::transfer)
        return;
    for (auto& sp : population_) {
        if (sp.trained)
            continue;
        for (std::size_t j : neighborhood_[sp.index]) {
            if (population_[j].trained) {
                transfer_policy(population_[j].learner, sp.learner);
                sp.trained = true;
                break;
            }
        }
    }
}

void MorldRun::record_checkpoint() {
    Checkpoint cp;
    cp.iteration = iteration_;
    cp.step = env_steps_;
    cp.front = archive_.front();
    cp.archive_size = archive_.size();
    cp.hypervolume = hypervolume(cp.front, hv_reference_,
                                 Rng::derive(config_.seed, stream::metrics,
                                             static_cast<std::uint64_t>(iteration_))
                                     .next_u64())
                         .value;
    if (reference_front_)
        cp.igd = igd(cp.front, *reference_front_);
    cp.sparsity = sparsity(cp.front);
    cp.eum = expected_utility(cp.front, eum_weight_set_);
    checkpoints_.push_back(std::move(cp));
}

void MorldRun::step() {
    if (finished())
        return;
    const std::size_t chosen = select_subproblem(iteration_, population_.size());
    sample(chosen, std::min(config_.steps_per_iteration, config_.total_steps - env_steps_));
    improve_policies();
    evaluate_and_archive();
    if (env_steps_ >= next_adapt_step_) {
        adapt();
        while (next_adapt_step_ <= env_steps_)
            next_adapt_step_ += config_.psa_period_steps;
    }
    cooperate();
    ++iteration_;
    if (iteration_ % config_.checkpoint_stride == 0 || finished())
        record_checkpoint();
}

RunReport MorldRun::run_to_completion() {
    while (!finished())
        step();
    RunReport report;
    report.checkpoints = checkpoints_;
    report.archive = archive_;
    for (const auto& sp : population_)
        report.final_weights.push_back(sp.weight);
    report.env_steps = env_steps_;
    report.episodes = episodes_;
    return report;
}

RunReport run(const RunConfig& config) { return MorldRun(config).run_to_completion(); }

} // namespace morld
