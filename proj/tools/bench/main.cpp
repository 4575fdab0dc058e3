// Command-line driver: run a configured sweep, list the scenario catalog,
// or validate a config without running it.
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <arh/errors.hpp>
#include <bench_core/bench.hpp>

namespace {

int run_command(const std::string& config_path, int reps, int workers, bool seed_set,
                std::uint64_t seed, const std::string& out_dir) {
    arh::bench::BenchConfig config = arh::bench::parse_config_file(config_path);
    if (reps > 0) config.replications = reps;
    if (workers > 0) config.workers = workers;
    if (seed_set) config.seed_base = seed;
    if (!out_dir.empty()) config.out_dir = out_dir;
    arh::bench::check_config(config);

    arh::bench::RunMeta meta;
    const arh::bench::ResultTable table = arh::bench::run(config, &meta);

    std::filesystem::create_directories(config.out_dir);
    const std::string csv_path = config.out_dir + "/results.csv";
    const std::string svg_path = config.out_dir + "/figure.svg";
    const std::string meta_path = config.out_dir + "/metadata.json";
    arh::bench::emit_csv(table, csv_path);
    arh::bench::emit_svg(table, config.threshold, svg_path);
    arh::bench::emit_metadata(config, meta, meta_path);

    for (const auto& row : table.rows) {
        std::cout << row.scenario << " " << row.method << " n=" << row.n << " k_n=" << row.k_n;
        if (row.aborted)
            std::cout << " aborted (" << row.failures << "/" << row.f_den << " failures)";
        else
            std::cout << " F=" << row.f_num << "/" << row.f_den << " mean=" << row.mean_err
                      << " median=" << row.median_err;
        std::cout << "\n";
    }
    std::cout << "wrote " << csv_path << "\n"
              << "wrote " << svg_path << "\n"
              << "wrote " << meta_path << "\n";
    return 0;
}

int validate_command(const std::string& config_path) {
    const arh::bench::BenchConfig config = arh::bench::parse_config_file(config_path);
    arh::bench::check_config(config);
    std::cout << "config OK: " << config.label << ", "
              << arh::regime_name(config.scenario.regime) << ", "
              << config.methods.size() << " methods, " << config.sample_sizes.size()
              << " sample sizes, " << config.replications << " replications\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ARH(1) comparative-study benchmark"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int reps = -1, workers = -1;
    std::uint64_t seed = 0;

    CLI::App* run_cmd = app.add_subcommand("run", "Run a sweep from a config file");
    run_cmd->add_option("--config", config_path, "Config file path")->required();
    run_cmd->add_option("--reps", reps, "Override the replication count");
    run_cmd->add_option("--workers", workers, "Override the worker count");
    CLI::Option* seed_opt = run_cmd->add_option("--seed", seed, "Override the seed base");
    run_cmd->add_option("--out", out_dir, "Override the output directory");

    CLI::App* list_cmd = app.add_subcommand("list-scenarios", "Print the scenario catalog");

    std::string validate_path;
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "Parse and validate a config without running it");
    validate_cmd->add_option("--config", validate_path, "Config file path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed())
            return run_command(config_path, reps, workers, seed_opt->count() > 0, seed, out_dir);
        if (list_cmd->parsed()) {
            std::cout << arh::bench::list_scenarios();
            return 0;
        }
        if (validate_cmd->parsed()) return validate_command(validate_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
