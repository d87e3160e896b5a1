#include "polykin/acceptance.hpp"
#include "polykin/config.hpp"
#include "polykin/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

namespace {

int cmd_run(const std::string& path, const std::string& out_override, int threads) {
    polykin::RunConfig cfg;
    try {
        cfg = polykin::load_config(path);
    } catch (const polykin::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
    if (!out_override.empty()) cfg.output_dir = out_override;
    if (threads > 0) cfg.num.threads = threads;
    for (const auto& w : cfg.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    try {
        const auto summary = polykin::run_scenario(cfg, cfg.output_dir);
        std::printf("%s\n", summary.dump(2).c_str());
    } catch (const polykin::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 3;
    }
    return 0;
}

int cmd_validate(const std::string& path) {
    polykin::RunConfig cfg;
    try {
        cfg = polykin::load_config(path);
    } catch (const polykin::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
    const polykin::NondimGroups g = polykin::config_groups(cfg);
    std::printf("configuration OK: scenario %s, solver %s, mode %s, stress %s\n",
                polykin::to_string(cfg.scenario), polykin::to_string(cfg.solver),
                polykin::to_string(cfg.mode), polykin::to_string(cfg.stress_mode));
    std::printf("  De = %.6g, Re = %.6g, coil/gap = %.6g, epsilon = %.6g\n", g.De, g.Re,
                g.ell_ratio, g.epsilon);
    std::printf("  lambda_H = %.6g s, lambda_B = %.6g s, eta_s/eta = %.6g\n", g.lambda_H,
                g.lambda_B, g.eta_s_star);
    for (const auto& w : cfg.warnings) std::printf("  warning: %s\n", w.c_str());
    return 0;
}

int cmd_suite(bool quick) {
    const auto results = polykin::acceptance::run_all(quick);
    std::printf("%s", polykin::acceptance::format_table(results).c_str());
    const int bad = polykin::acceptance::unexpected_failures(results);
    std::printf("%d of %zu criteria deviate from expectation\n", bad, results.size());
    return bad == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dumbbell polymer solution simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int threads = 0;
    bool quick = false;

    auto* run = app.add_subcommand("run", "execute a configured run");
    run->add_option("config", config_path, "JSON configuration file")->required();
    run->add_option("--out", out_dir, "output directory (overrides the config)");
    run->add_option("--threads", threads, "worker thread cap");

    auto* validate = app.add_subcommand("validate", "check a configuration and echo groups");
    validate->add_option("config", config_path, "JSON configuration file")->required();

    auto* suite = app.add_subcommand("suite", "run the verification battery");
    suite->add_flag("--quick", quick, "smaller ensembles and shorter horizons");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path, out_dir, threads);
    if (validate->parsed()) return cmd_validate(config_path);
    return cmd_suite(quick);
}
