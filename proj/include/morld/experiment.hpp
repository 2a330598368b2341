#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "morld/orchestrator.hpp"

namespace morld {

struct ExperimentSpec {
    RunConfig config; // template; the seed field is replaced per run
    std::vector<std::uint64_t> seeds;
    std::filesystem::path out_dir = "out";
    std::vector<std::string> overrides; // "key = value" records, oldest first
};

// Flat "key = value" text. Optional [section] headers group keys; '#' starts a
// comment. Unknown keys or sections, malformed lines and invalid values raise
// ConfigError with "<source>:<line>" and the key in the message.
ExperimentSpec parse_config_text(const std::string& text, const std::string& source = "<config>");
ExperimentSpec parse_config(const std::filesystem::path& path);

// Sets one key as if it appeared in the file and logs the override.
void apply_override(ExperimentSpec& spec, const std::string& key, const std::string& value);

void validate(const ExperimentSpec& spec);

// Every key with its resolved value; parsing it back yields the same spec.
std::string snapshot(const ExperimentSpec& spec);

std::vector<std::string> config_keys();

// CSV bodies for one run (with header) and the shared headers.
std::string metrics_csv_header();
std::string pf_csv_header(std::size_t objective_count);
std::string metrics_csv_rows(std::uint64_t seed, const RunReport& report);
std::string pf_csv_rows(std::uint64_t seed, const RunReport& report);

struct ExperimentOptions {
    unsigned parallel = 1;
    bool quiet = true;
};

struct ExperimentResult {
    int exit_code = 0; // 0 success, 2 at least one run failed
    std::vector<std::uint64_t> failed_seeds;
};

// One orchestrator run per seed, then merged metrics.csv and pf.csv plus the
// config snapshot under spec.out_dir.
ExperimentResult run_experiment(const ExperimentSpec& spec, const ExperimentOptions& options = {});

} // namespace morld
