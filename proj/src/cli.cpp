#include "ebmc/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ebmc/csv.hpp"
#include "ebmc/experiment.hpp"
#include "ebmc/gridworld.hpp"
#include "ebmc/svg_plot.hpp"

namespace ebmc {

namespace {

namespace fs = std::filesystem;

void write_outputs(const ExperimentConfig& cfg, const std::vector<MetricsRecord>& records,
                   const fs::path& out_dir) {
    fs::create_directories(out_dir);
    write_records_csv(records, out_dir / "records.csv");
    const AggregateCurve curve = aggregate(records);
    write_curve_csv(curve, out_dir / "curve.csv");
    const std::vector<NamedCurve> curves{{strategy_name(cfg.strategy), curve}};
    render_plot(curves, out_dir / "curve.svg");
}

int do_run(const std::string& config_path, const std::string& out_dir, int parallelism,
           std::optional<std::int64_t> seed) {
    KeyValues kv = KeyValues::parse_file(config_path);
    if (seed) kv.set("base_seed", std::to_string(*seed));
    const ExperimentConfig cfg = ExperimentConfig::from_keyvalues(kv);

    const auto records = run_experiment(cfg, parallelism);
    write_outputs(cfg, records, out_dir);
    std::cout << "wrote " << records.size() << " records for " << cfg.runs << " runs to "
              << out_dir << "\n";
    return 0;
}

// one directory per grid point, named <key>=<value> with '/' made safe
std::string point_dir_name(const std::string& key, const std::string& value) {
    std::string name = key + "=" + value;
    for (char& c : name) {
        if (c == '/' || c == '\\') c = '_';
    }
    return name;
}

int do_sweep(const std::string& config_path, const std::string& out_dir, int parallelism) {
    const KeyValues base = KeyValues::parse_file(config_path);
    const ExperimentConfig base_cfg = ExperimentConfig::from_keyvalues(base);
    if (!base_cfg.sweep) {
        throw ConfigError("sweep.key: required for the sweep subcommand");
    }

    for (const std::string& value : base_cfg.sweep->values) {
        KeyValues kv = base;
        kv.set(base_cfg.sweep->key, value);
        const ExperimentConfig cfg = ExperimentConfig::from_keyvalues(kv);
        const fs::path dir = fs::path(out_dir) / point_dir_name(base_cfg.sweep->key, value);
        const auto records = run_experiment(cfg, parallelism);
        write_outputs(cfg, records, dir);
        std::cout << "sweep point " << base_cfg.sweep->key << " = " << value << " -> " << dir
                  << "\n";
    }
    return 0;
}

int do_oracle(const std::string& config_path) {
    const ExperimentConfig cfg = ExperimentConfig::load(config_path);
    std::cout << bfs_optimal_steps(cfg.gridworld) << "\n";
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"epsilon-adaptive tabular RL benchmark harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int parallelism = 1;
    std::optional<std::int64_t> seed;

    auto* run_cmd = app.add_subcommand("run", "run one experiment and write records/curve/plot");
    run_cmd->add_option("config", config_path, "experiment config file")->required();
    run_cmd->add_option("--out", out_dir, "output directory")->required();
    run_cmd->add_option("--parallelism", parallelism, "worker threads across runs");
    run_cmd->add_option("--seed", seed, "override base_seed");

    auto* sweep_cmd =
        app.add_subcommand("sweep", "expand the config's parameter grid, one experiment each");
    sweep_cmd->add_option("config", config_path, "experiment config file")->required();
    sweep_cmd->add_option("--out", out_dir, "output directory")->required();
    sweep_cmd->add_option("--parallelism", parallelism, "worker threads across runs");

    std::string oracle_target;
    auto* oracle_cmd = app.add_subcommand("oracle", "print a reference value for an environment");
    oracle_cmd->add_option("target", oracle_target, "oracle name (gridworld)")->required();
    oracle_cmd->add_option("config", config_path, "experiment config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run_cmd->parsed()) return do_run(config_path, out_dir, parallelism, seed);
        if (sweep_cmd->parsed()) return do_sweep(config_path, out_dir, parallelism);
        if (oracle_cmd->parsed()) {
            if (oracle_target != "gridworld") {
                std::cerr << "error: unknown oracle '" << oracle_target << "'\n";
                return 2;
            }
            return do_oracle(config_path);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace ebmc
