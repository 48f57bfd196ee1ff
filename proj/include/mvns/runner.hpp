#pragma once

#include <filesystem>
#include <optional>

#include "mvns/manifest.hpp"

namespace mvns {

// Exit-code contract: 0 all assertions pass, 2 assertion failure,
// 3 config/assumption error, 4 numeric abort.
enum ExitCode : int {
    exit_ok = 0,
    exit_assert_fail = 2,
    exit_config_error = 3,
    exit_numeric_abort = 4,
};

struct RunOverrides {
    std::optional<uint64_t> seed;
    std::optional<int> workers;
    bool force = false;
    std::optional<std::vector<double>> snapshot_times;
};

void apply_overrides(RunManifest& manifest, const RunOverrides& o);

// Executes the manifest's experiment and writes manifest.json, report.json,
// curves.csv and ledger.csv into output_dir. Every emitted file is listed in
// the report. Numeric aborts still produce a report flagged "aborted".
int run_manifest(const RunManifest& manifest, const std::filesystem::path& output_dir);

// Re-bundles one or more reports into per-figure tidy CSVs
// (moment_curves.csv, attraction_curves.csv, stability_ladders.csv,
// absorbing_curves.csv). Throws ConfigError when a report is missing.
std::vector<std::string> emit_plots(const std::vector<std::filesystem::path>& report_files,
                                    const std::filesystem::path& output_dir);

} // namespace mvns
