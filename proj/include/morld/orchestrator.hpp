#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "morld/archive.hpp"
#include "morld/buffer.hpp"
#include "morld/decomposition.hpp"
#include "morld/momdp.hpp"
#include "morld/qtable.hpp"

namespace morld {

enum class LearnerKind { scalar_q, vector_q, envelope_q, esr_mc };
enum class Cooperation { none, shared_buffer, shared_buffer_neighborhood, transfer };

// Raised for invalid configuration values; key() names the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& message)
        : Error(message), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct RunConfig {
    std::string env = "dst-corridor";
    std::size_t population_size = 6;
    std::int64_t total_steps = 20000;
    std::int64_t steps_per_iteration = 100;
    int update_passes = 1;
    std::size_t batch_size = 32;
    double gamma = 1.0;
    double alpha = 0.1;
    double epsilon_start = 1.0;
    double epsilon_min = 0.05;
    double epsilon_decay_fraction = 0.5;
    ScalarizationKind scalarization = ScalarizationKind::weighted_sum;
    double delta = 1.05;
    double tau = 0.5;
    bool psa_enabled = false;
    std::int64_t psa_period_steps = 1000;
    Cooperation cooperation = Cooperation::none;
    std::size_t neighborhood_k = 2;
    int eval_episodes = 5;
    std::size_t buffer_capacity = 1000;
    Replacement buffer_replacement = Replacement::fifo;
    LearnerKind learner = LearnerKind::scalar_q;
    std::optional<ObjectiveVector> hv_reference; // per-environment default when unset
    std::size_t eum_weights = 101;
    std::uint64_t seed = 0;
    std::int64_t checkpoint_stride = 1; // in iterations
    // Programmatic only: explicit starting weights, one per subproblem.
    std::vector<WeightVector> initial_weights;
};

// Throws ConfigError naming the first invalid key.
void validate(const RunConfig& config);

// Default hypervolume reference point for a registered environment.
ObjectiveVector default_hv_reference(const std::string& env_id);

// Linear decay from epsilon_start to epsilon_min over the first
// epsilon_decay_fraction of the step budget.
double epsilon_at(const RunConfig& config, std::int64_t step);

struct Subproblem {
    std::size_t index = 0;
    WeightVector weight;
    QTable learner;
    std::size_t buffer_id = 0;
    std::vector<std::size_t> visible_buffers;
    ObjectiveVector last_eval;
    bool trained = false;
};

struct Checkpoint {
    std::int64_t iteration = 0;
    std::int64_t step = 0;
    std::vector<ObjectiveVector> front;
    double hypervolume = 0.0;
    std::optional<double> igd;
    double sparsity = 0.0;
    double eum = 0.0;
    std::size_t archive_size = 0;
};

struct RunReport {
    std::vector<Checkpoint> checkpoints;
    ParetoArchive archive;
    std::vector<WeightVector> final_weights;
    std::int64_t env_steps = 0;
    std::int64_t episodes = 0;
};

// One decomposition run over a single environment: selection, policy-following
// sampling, buffered improvement of every subproblem, evaluation, archiving,
// adaptation, neighbourhood upkeep and cooperation, repeated until the step
// budget is spent. Strictly single-threaded and deterministic given the seed.
class MorldRun {
public:
    explicit MorldRun(RunConfig config);

    const RunConfig& config() const { return config_; }
    const Momdp& env() const { return env_; }
    const std::vector<Subproblem>& population() const { return population_; }
    const ParetoArchive& archive() const { return archive_; }
    const Neighborhood& neighborhood() const { return neighborhood_; }
    const std::optional<ReferencePoint>& reference() const { return reference_; }
    const std::vector<ExperienceBuffer>& step_buffers() const { return step_buffers_; }
    const std::vector<EpisodeBuffer>& episode_buffers() const { return episode_buffers_; }
    std::int64_t env_steps() const { return env_steps_; }
    std::int64_t iteration() const { return iteration_; }
    bool finished() const { return env_steps_ >= config_.total_steps; }

    // Executes one iteration of the main loop.
    void step();
    RunReport run_to_completion();

    // Exposed for tests: apply one cooperation pass now.
    void cooperate();

private:
    struct Cursor {
        bool active = false;
        int state = 0;
        int steps = 0;
        ObjectiveVector accrued;
        Episode partial;
    };

    void initialize();
    void sample(std::size_t index, std::int64_t steps);
    void improve_policies();
    void evaluate_and_archive();
    void adapt();
    void rebuild_neighborhood();
    void record_checkpoint();
    void observe(const std::vector<ObjectiveVector>& returns);
    QTable make_learner(const WeightVector& weight) const;
    const ReferencePoint* reference_ptr() const;

    RunConfig config_;
    Momdp env_;
    Scalarization scalarization_;
    std::vector<Subproblem> population_;
    std::vector<Cursor> cursors_;
    std::vector<ExperienceBuffer> step_buffers_;
    std::vector<EpisodeBuffer> episode_buffers_;
    Neighborhood neighborhood_;
    ParetoArchive archive_;
    std::optional<ReferencePoint> reference_;
    std::vector<WeightVector> eum_weight_set_;
    std::optional<std::vector<ObjectiveVector>> reference_front_;
    ObjectiveVector hv_reference_;

    Rng env_rng_;
    Rng explore_rng_;
    Rng buffer_rng_;
    Rng eval_rng_;

    std::int64_t env_steps_ = 0;
    std::int64_t episodes_ = 0;
    std::int64_t iteration_ = 0;
    std::int64_t next_adapt_step_ = 0;
    std::vector<Checkpoint> checkpoints_;
};

RunReport run(const RunConfig& config);

std::vector<ObjectiveVector> evaluate_population(std::vector<Subproblem>& population,
                                                 const Momdp& env, int episodes, double gamma,
                                                 std::uint64_t seed);

std::string to_string(LearnerKind kind);
std::string to_string(Cooperation mode);
std::string to_string(ScalarizationKind kind);
std::string to_string(Replacement replacement);

} // namespace morld
