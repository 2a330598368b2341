// Batch experiment driver: one decomposition run per seed, CSV outputs.
//
//   morld_bench --config exp.cfg [--out-dir DIR] [--seeds 1,2,3] [--parallel N] [--quiet]
//
// Exit codes: 0 success, 1 configuration error, 2 run failure.

#include <iostream>

#include "CLI11.hpp"
#include "morld/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Seeded multi-objective decomposition benchmark"};
    std::string config_path;
    std::string out_dir;
    std::string seeds;
    unsigned parallel = 1;
    bool quiet = false;
    app.add_option("--config", config_path, "experiment config file")->required();
    app.add_option("--out-dir", out_dir, "override out_dir");
    app.add_option("--seeds", seeds, "override seeds (comma-separated)");
    app.add_option("--parallel", parallel, "maximum concurrent runs")->check(CLI::PositiveNumber);
    app.add_flag("--quiet", quiet, "suppress per-seed progress");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    morld::ExperimentSpec spec;
    try {
        spec = morld::parse_config(config_path);
        if (!out_dir.empty())
            morld::apply_override(spec, "out_dir", out_dir);
        if (!seeds.empty())
            morld::apply_override(spec, "seeds", seeds);
        morld::validate(spec);
    } catch (const morld::Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }

    try {
        const auto result = morld::run_experiment(spec, {parallel, quiet});
        if (result.exit_code != 0)
            std::cerr << result.failed_seeds.size() << " run(s) failed; see seed_*/error.log\n";
        return result.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
