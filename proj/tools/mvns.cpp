// Command-line driver: validate configurations, run experiments, bundle
// plot-ready CSVs.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "mvns/runner.hpp"

namespace {

std::filesystem::path resolve_output_dir(const std::string& out_flag,
                                         const std::string& hash) {
    if (!out_flag.empty()) return out_flag;
    if (const char* root = std::getenv("MVNS_OUTPUT_ROOT")) {
        return std::filesystem::path(root) / hash;
    }
    return std::filesystem::path("out") / hash;
}

void print_ledger(const mvns::RunManifest& m) {
    std::cout << "content hash: " << m.content_hash << "\n";
    std::cout << "assumption checks:\n";
    for (const auto& c : m.assumptions.checks) {
        std::cout << "  " << c.id << "  max_ratio=" << c.max_ratio
                  << (c.pass ? "  ok" : "  FAIL") << "\n";
    }
    std::cout << "constant ledger:\n";
    for (const auto& row : m.ledger.rows()) {
        std::cout << "  " << row.name << " = " << row.value << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mean-field stochastic Navier-Stokes ensemble simulator"};
    app.require_subcommand(1);

    std::string config_path, out_flag;
    mvns::RunOverrides overrides;
    std::vector<double> snapshot_times;
    bool have_snapshots = false;

    auto* check = app.add_subcommand("check", "parse a config, run the assumption "
                                              "checker, print the constant ledger");
    check->add_option("config", config_path)->required();

    auto* run = app.add_subcommand("run", "execute the configured experiment");
    run->add_option("config", config_path)->required();
    run->add_option("--out", out_flag, "output directory (default: MVNS_OUTPUT_ROOT/<hash>)");
    uint64_t seed_override = 0;
    auto* seed_opt = run->add_option("--seed-override", seed_override);
    int workers = 0;
    auto* workers_opt = run->add_option("--workers", workers);
    run->add_flag("--force", overrides.force,
                  "run even when the ledger is not dissipative (assertions skipped)");
    auto* snap_opt = run->add_option("--snapshot-times", snapshot_times)->delimiter(',');

    auto* plots = app.add_subcommand("plots", "bundle report curves into per-figure CSVs");
    std::vector<std::string> report_files;
    plots->add_option("reports", report_files)->required();
    plots->add_option("--out", out_flag);

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) {
            const auto manifest = mvns::parse_config(config_path);
            print_ledger(manifest);
            return mvns::exit_ok;
        }
        if (run->parsed()) {
            auto manifest = mvns::parse_config(config_path);
            if (*seed_opt) overrides.seed = seed_override;
            if (*workers_opt) overrides.workers = workers;
            have_snapshots = static_cast<bool>(*snap_opt);
            if (have_snapshots) overrides.snapshot_times = snapshot_times;
            mvns::apply_overrides(manifest, overrides);
            const auto dir = resolve_output_dir(out_flag, manifest.content_hash);
            const int code = mvns::run_manifest(manifest, dir);
            std::cout << "outputs: " << dir.string() << "\n";
            std::cout << (code == mvns::exit_ok ? "PASS" : "FAIL") << " (exit " << code
                      << ")\n";
            return code;
        }
        if (plots->parsed()) {
            std::vector<std::filesystem::path> paths(report_files.begin(),
                                                     report_files.end());
            const auto dir = out_flag.empty() ? std::filesystem::path(".")
                                              : std::filesystem::path(out_flag);
            for (const auto& f : mvns::emit_plots(paths, dir)) {
                std::cout << "wrote " << (dir / f).string() << "\n";
            }
            return mvns::exit_ok;
        }
    } catch (const mvns::AssumptionError& e) {
        std::cerr << "assumption error: " << e.what() << "\n";
        return mvns::exit_config_error;
    } catch (const mvns::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return mvns::exit_config_error;
    } catch (const mvns::SimError& e) {
        std::cerr << "numeric abort: " << e.what() << "\n";
        return mvns::exit_numeric_abort;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return mvns::exit_config_error;
    }
    return mvns::exit_ok;
}
