#include "morld/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <atomic>
#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "morld/format.hpp"

namespace morld {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        parts.push_back(trim(item));
    return parts;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
    throw ConfigError(key, "key '" + key + "': invalid value '" + value + "' (expected " +
                               expected + ")");
}

std::int64_t to_int(const std::string& key, const std::string& v) {
    std::int64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        bad_value(key, v, "an integer");
    return out;
}

std::size_t to_count(const std::string& key, const std::string& v) {
    const auto x = to_int(key, v);
    if (x < 0)
        bad_value(key, v, "a non-negative integer");
    return static_cast<std::size_t>(x);
}

double to_real(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || !std::isfinite(out))
        bad_value(key, v, "a finite real number");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true")
        return true;
    if (v == "false")
        return false;
    bad_value(key, v, "true or false");
}

std::string exact(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

template <typename Enum>
Enum to_enum(const std::string& key, const std::string& v,
             const std::vector<std::pair<std::string, Enum>>& names) {
    std::string expected;
    for (const auto& [name, value] : names) {
        if (name == v)
            return value;
        expected += (expected.empty() ? "" : ", ") + name;
    }
    bad_value(key, v, "one of " + expected);
}

const std::vector<std::pair<std::string, ScalarizationKind>> kScalarizations{
    {"weighted-sum", ScalarizationKind::weighted_sum}, {"tchebycheff", ScalarizationKind::tchebycheff}};
const std::vector<std::pair<std::string, LearnerKind>> kLearners{
    {"scalar-q", LearnerKind::scalar_q},
    {"vector-q", LearnerKind::vector_q},
    {"envelope-q", LearnerKind::envelope_q},
    {"esr-mc", LearnerKind::esr_mc}};
const std::vector<std::pair<std::string, Cooperation>> kCooperation{
    {"none", Cooperation::none},
    {"shared-buffer", Cooperation::shared_buffer},
    {"shared-buffer-neighborhood", Cooperation::shared_buffer_neighborhood},
    {"transfer", Cooperation::transfer}};
const std::vector<std::pair<std::string, Replacement>> kReplacement{
    {"fifo", Replacement::fifo}, {"diverse-crowding", Replacement::diverse_crowding}};

struct KeyInfo {
    std::string section;
    std::function<void(ExperimentSpec&, const std::string&)> set;
    std::function<std::string(const ExperimentSpec&)> get;
};

// Ordered as written in snapshots.
const std::vector<std::pair<std::string, KeyInfo>>& key_table() {
    static const std::vector<std::pair<std::string, KeyInfo>> table = [] {
        std::vector<std::pair<std::string, KeyInfo>> t;
        auto add = [&](std::string key, std::string section, auto set, auto get) {
            t.emplace_back(std::move(key), KeyInfo{std::move(section), set, get});
        };
        add("env", "experiment",
            [](ExperimentSpec& s, const std::string& v) { s.config.env = v; },
            [](const ExperimentSpec& s) { return s.config.env; });
        add("seeds", "experiment",
            [](ExperimentSpec& s, const std::string& v) {
                s.seeds.clear();
                for (const auto& item : split_list(v)) {
                    const auto x = to_int("seeds", item);
                    if (x < 0)
                        bad_value("seeds", v, "a comma-separated list of non-negative integers");
                    s.seeds.push_back(static_cast<std::uint64_t>(x));
                }
            },
            [](const ExperimentSpec& s) {
                std::string out;
                for (auto seed : s.seeds)
                    out += (out.empty() ? "" : ", ") + std::to_string(seed);
                return out;
            });
        add("out_dir", "experiment",
            [](ExperimentSpec& s, const std::string& v) { s.out_dir = v; },
            [](const ExperimentSpec& s) { return s.out_dir.string(); });
        add("checkpoint_stride", "experiment",
            [](ExperimentSpec& s, const std::string& v) {
                s.config.checkpoint_stride = to_int("checkpoint_stride", v);
            },
            [](const ExperimentSpec& s) { return std::to_string(s.config.checkpoint_stride); });
        add("population_size", "experiment",
            [](ExperimentSpec& s, const std::string& v) {
                s.config.population_size = to_count("population_size", v);
            },
            [](const ExperimentSpec& s) { return std::to_string(s.config.population_size); });
        add("total_steps", "experiment",
            [](ExperimentSpec& s, const std::string& v) { s.config.total_steps = to_int("total_steps", v); },
            [](const ExperimentSpec& s) { return std::to_string(s.config.total_steps); });
        add("steps_per_iteration", "experiment",
            [](ExperimentSpec& s, const std::string& v) {
                s.config.steps_per_iteration = to_int("steps_per_iteration", v);
            },
            [](const ExperimentSpec& s) { return std::to_string(s.config.steps_per_iteration); });
        add("eval_episodes", "experiment",
            [](ExperimentSpec& s, const std::string& v) {
                s.config.eval_episodes = static_cast<int>(to_int("eval_episodes", v));
            },
            [](const ExperimentSpec& s) { return std::to_string(s.config.eval_episodes); });

        add("scalarization", "decomposition",
            [](ExperimentSpec& s, const std::string& v) {
                s.config.scalarization = to_enum("scalarization", v, kScalarizations);
            },
            [](const ExperimentSpec& s) { return to_string(s.config.scalarization); });
        add("delta", "decomposition",
            [](ExperimentSpec& s, const std::string& v) { s.config.delta = to_real("delta", v); },
            [](const ExperimentSpec& s) { return exact(s.config.delta); });
        add("tau", "decomposition",
            [](ExperimentSpec& s, const std::string& v) { s.config.tau = to_real("tau", v); },
            [](const ExperimentSpec& s) { return exact(s.config.tau); });
        add("psa_enabled", "decomposition",
            [](ExperimentSpec& s, const std::string& v) { s.config.psa_enabled = to_bool("psa_enabled", v); },
            [](const ExperimentSpec& s) { return std::string(s.config.psa_enabled ? "true" : "false"); });
        add("psa_period_steps", "decomposition",
            [](ExperimentSpec& s, const std::string& v) {
                s.config.psa_period_steps = to_int("psa_period_steps", v);
            },
            [](const ExperimentSpec& s) { return std::to_string(s.config.psa_period_steps); });
        add("neighborhood_k", "decomposition",
            [](ExperimentSpec& s, const std::string& v) {
                s.config.neighborhood_k = to_count("neighborhood_k", v);
            },
            [](const ExperimentSpec& s) { return std::to_string(s.config.neighborhood_k); });

        add("learner", "learning",
            [](ExperimentSpec& s, const std::string& v) { s.config.learner = to_enum("learner", v, kLearners); },
            [](const ExperimentSpec& s) { return to_string(s.config.learner); });
        add("update_passes", "learning",
            [](ExperimentSpec& s, const std::string& v) {
                s.config.update_passes = static_cast<int>(to_int("update_passes", v));
            },
            [](const ExperimentSpec& s) { return std::to_string(s.config.update_passes); });
        add("batch_size", "learning",
            [](ExperimentSpec& s, const std::string& v) { s.config.batch_size = to_count("batch_size", v); },
            [](const ExperimentSpec& s) { return std::to_string(s.config.batch_size); });
        add("gamma", "learning",
            [](ExperimentSpec& s, const std::string& v) { s.config.gamma = to_real("gamma", v); },
            [](const ExperimentSpec& s) { return exact(s.config.gamma); });
        add("alpha", "learning",
            [](ExperimentSpec& s, const std::string& v) { s.config.alpha = to_real("alpha", v); },
            [](const ExperimentSpec& s) { return exact(s.config.alpha); });
        add("epsilon_start", "learning",
            [](ExperimentSpec& s, const std::string& v) { s.config.epsilon_start = to_real("epsilon_start", v); },
            [](const ExperimentSpec& s) { return exact(s.config.epsilon_start); });
        add("epsilon_min", "learning",
            [](ExperimentSpec& s, const std::string& v) { s.config.epsilon_min = to_real("epsilon_min", v); },
            [](const ExperimentSpec& s) { return exact(s.config.epsilon_min); });
        add("epsilon_decay_fraction", "learning",
            [](ExperimentSpec& s, const std::string& v) {
                s.config.epsilon_decay_fraction = to_real("epsilon_decay_fraction", v);
            },
            [](const ExperimentSpec& s) { return exact(s.config.epsilon_decay_fraction); });
        add("buffer_capacity", "learning",
            [](ExperimentSpec& s, const std::string& v) {
                s.config.buffer_capacity = to_count("buffer_capacity", v);
            },
            [](const ExperimentSpec& s) { return std::to_string(s.config.buffer_capacity); });
        add("buffer_replacement", "learning",
            [](ExperimentSpec& s, const std::string& v) {
                s.config.buffer_replacement = to_enum("buffer_replacement", v, kReplacement);
            },
            [](const ExperimentSpec& s) { return to_string(s.config.buffer_replacement); });

        add("cooperation", "cooperation",
            [](ExperimentSpec& s, const std::string& v) {
                s.config.cooperation = to_enum("cooperation", v, kCooperation);
            },
            [](const ExperimentSpec& s) { return to_string(s.config.cooperation); });

        add("hv_reference", "metrics",
            [](ExperimentSpec& s, const std::string& v) {
                if (v == "auto") {
                    s.config.hv_reference.reset();
                    return;
                }
                ObjectiveVector z;
                for (const auto& item : split_list(v))
                    z.push_back(to_real("hv_reference", item));
                s.config.hv_reference = std::move(z);
            },
            [](const ExperimentSpec& s) {
                if (!s.config.hv_reference)
                    return std::string("auto");
                std::string out;
                for (double x : *s.config.hv_reference)
                    out += (out.empty() ? "" : ", ") + exact(x);
                return out;
            });
        add("eum_weights", "metrics",
            [](ExperimentSpec& s, const std::string& v) { s.config.eum_weights = to_count("eum_weights", v); },
            [](const ExperimentSpec& s) { return std::to_string(s.config.eum_weights); });
        return t;
    }();
    return table;
}

const KeyInfo* find_key(const std::string& key) {
    for (const auto& [name, info] : key_table())
        if (name == key)
            return &info;
    return nullptr;
}

const std::string kOverridePrefix = "# override: ";

} // namespace

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& [name, info] : key_table())
        keys.push_back(name);
    return keys;
}

ExperimentSpec parse_config_text(const std::string& text, const std::string& source) {
    static const std::set<std::string> sections{"experiment", "decomposition", "learning",
                                                "cooperation", "metrics"};
    ExperimentSpec spec;
    std::map<std::string, int> key_lines;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    auto where = [&] { return source + ":" + std::to_string(line_no) + ": "; };
    while (std::getline(in, raw)) {
        ++line_no;
        if (raw.rfind(kOverridePrefix, 0) == 0) {
            spec.overrides.push_back(trim(raw.substr(kOverridePrefix.size())));
            continue;
        }
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("", where() + "malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (!sections.contains(section))
                throw ConfigError("", where() + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("", where() + "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const KeyInfo* info = find_key(key);
        if (info == nullptr)
            throw ConfigError(key, where() + "unknown key '" + key + "'");
        if (!section.empty() && info->section != section)
            throw ConfigError(key, where() + "key '" + key + "' belongs in section [" +
                                       info->section + "]");
        if (key_lines.contains(key))
            throw ConfigError(key, where() + "duplicate key '" + key + "'");
        key_lines[key] = line_no;
        try {
            info->set(spec, value);
        } catch (const ConfigError& e) {
            throw ConfigError(key, where() + e.what());
        }
    }
    try {
        validate(spec);
    } catch (const ConfigError& e) {
        const auto it = key_lines.find(e.key());
        const std::string loc = it != key_lines.end()
                                    ? source + ":" + std::to_string(it->second) + ": "
                                    : source + ": ";
        throw ConfigError(e.key(), loc + e.what());
    }
    return spec;
}

ExperimentSpec parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("", path.string() + ": cannot open config file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.string());
}

void apply_override(ExperimentSpec& spec, const std::string& key, const std::string& value) {
    const KeyInfo* info = find_key(key);
    if (info == nullptr)
        throw ConfigError(key, "unknown key '" + key + "'");
    info->set(spec, value);
    spec.overrides.push_back(key + " = " + value);
}

void validate(const ExperimentSpec& spec) {
    if (spec.seeds.empty())
        throw ConfigError("seeds", "seeds must list at least one seed");
    std::set<std::uint64_t> unique(spec.seeds.begin(), spec.seeds.end());
    if (unique.size() != spec.seeds.size())
        throw ConfigError("seeds", "seeds must be distinct");
    if (spec.out_dir.empty())
        throw ConfigError("out_dir", "out_dir must not be empty");
    validate(spec.config);
}

std::string snapshot(const ExperimentSpec& spec) {
    std::ostringstream out;
    out << "# Resolved experiment configuration.\n";
    for (const auto& o : spec.overrides)
        out << kOverridePrefix << o << '\n';
    std::string section;
    for (const auto& [name, info] : key_table()) {
        if (info.section != section) {
            section = info.section;
            out << "\n[" << section << "]\n";
        }
        out << name << " = " << info.get(spec) << '\n';
    }
    return out.str();
}

std::string metrics_csv_header() { return "seed,step,hypervolume,igd,sparsity,eum,archive_size\n"; }

std::string pf_csv_header(std::size_t objective_count) {
    std::string h = "seed,";
    for (std::size_t i = 0; i < objective_count; ++i)
        h += "obj_" + std::to_string(i) + ",";
    return h + "subproblem,step_found\n";
}

std::string metrics_csv_rows(std::uint64_t seed, const RunReport& report) {
    std::ostringstream out;
    for (const auto& cp : report.checkpoints) {
        out << seed << ',' << cp.step << ',' << format_number(cp.hypervolume) << ','
            << (cp.igd ? format_number(*cp.igd) : "") << ',' << format_number(cp.sparsity) << ','
            << format_number(cp.eum) << ',' << cp.archive_size << '\n';
    }
    return out.str();
}

std::string pf_csv_rows(std::uint64_t seed, const RunReport& report) {
    std::ostringstream out;
    for (const auto& e : report.archive.entries()) {
        out << seed << ',';
        for (double v : e.eval)
            out << format_number(v) << ',';
        out << e.tag.subproblem << ',' << e.tag.step << '\n';
    }
    return out.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write " + path.string());
    out << content;
}

struct SeedOutput {
    bool ok = false;
    std::string metrics;
    std::string pf;
};

} // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, const ExperimentOptions& options) {
    validate(spec);
    std::filesystem::create_directories(spec.out_dir);
    const auto m = static_cast<std::size_t>(make_env(spec.config.env).objective_count());

    std::vector<std::uint64_t> order(spec.seeds);
    std::sort(order.begin(), order.end());
    std::vector<SeedOutput> outputs(order.size());
    std::mutex log_mutex;
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t k = next++; k < order.size(); k = next++) {
            const std::uint64_t seed = order[k];
            const auto dir = spec.out_dir / ("seed_" + std::to_string(seed));
            std::filesystem::create_directories(dir);
            std::filesystem::remove(dir / "error.log");
            try {
                RunConfig config = spec.config;
                config.seed = seed;
                const RunReport report = run(config);
                outputs[k].metrics = metrics_csv_rows(seed, report);
                outputs[k].pf = pf_csv_rows(seed, report);
                write_file(dir / "metrics.csv", metrics_csv_header() + outputs[k].metrics);
                write_file(dir / "pf.csv", pf_csv_header(m) + outputs[k].pf);
                outputs[k].ok = true;
                if (!options.quiet) {
                    std::lock_guard lock(log_mutex);
                    std::cerr << "seed " << seed << ": " << report.archive.size()
                              << " archived policies after " << report.env_steps << " steps\n";
                }
            } catch (const std::exception& e) {
                write_file(dir / "error.log", std::string(e.what()) + "\n");
                std::lock_guard lock(log_mutex);
                std::cerr << "seed " << seed << ": run failed: " << e.what() << '\n';
            }
        }
    };

    const unsigned threads =
        std::max(1u, std::min<unsigned>(options.parallel, static_cast<unsigned>(order.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t)
            pool.emplace_back(worker);
        worker();
    }

    ExperimentResult result;
    std::string metrics = metrics_csv_header();
    std::string pf = pf_csv_header(m);
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (!outputs[k].ok) {
            result.failed_seeds.push_back(order[k]);
            continue;
        }
        metrics += outputs[k].metrics;
        pf += outputs[k].pf;
    }
    write_file(spec.out_dir / "config.snapshot", snapshot(spec));
    write_file(spec.out_dir / "metrics.csv", metrics);
    write_file(spec.out_dir / "pf.csv", pf);
    result.exit_code = result.failed_seeds.empty() ? 0 : 2;
    return result;
}

} // namespace morld
