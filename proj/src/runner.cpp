#include "mvns/runner.hpp"

#include <fstream>

#include "mvns/io.hpp"

namespace mvns {

using nlohmann::json;

namespace {

json report_json(const RunManifest& m, const ExperimentReport& rep,
                 const std::vector<std::string>& artifacts, bool aborted,
                 const std::string& abort_reason) {
    json out;
    out["kind"] = m.kind;
    out["content_hash"] = m.content_hash;
    out["version"] = m.version;
    out["aborted"] = aborted;
    if (aborted) out["abort_reason"] = abort_reason;
    out["pass"] = !aborted && rep.pass();
    json asserts = json::array();
    for (const auto& a : rep.assertions) {
        asserts.push_back({{"id", a.id},
                           {"constant", a.constant_ref},
                           {"observed", a.observed},
                           {"bound", a.bound},
                           {"stderr", a.stderr_},
                           {"pass", a.pass},
                           {"note", a.note}});
    }
    out["assertions"] = asserts;
    out["notes"] = rep.notes;
    json checks = json::array();
    for (const auto& c : m.assumptions.checks) {
        checks.push_back({{"id", c.id},
                          {"max_ratio", c.max_ratio},
                          {"samples", c.samples},
                          {"pass", c.pass}});
    }
    out["assumption_checks"] = checks;
    out["artifacts"] = artifacts;
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
}

void write_ledger_csv(const std::filesystem::path& path, const ConstantLedger& ledger) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "name,value,definition\n";
    for (const auto& row : ledger.rows()) {
        out << row.name << "," << format_double(row.value) << ",\"" << row.definition
            << "\"\n";
    }
}

void write_curves_csv(const std::filesystem::path& path, const ExperimentReport& rep) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "curve,x,value,stderr\n";
    for (const auto& c : rep.curves) {
        out << c.curve << "," << format_double(c.x) << "," << format_double(c.y) << ","
            << format_double(c.err) << "\n";
    }
}

} // namespace

void apply_overrides(RunManifest& m, const RunOverrides& o) {
    if (o.seed) {
        m.sizing.base_seed = *o.seed;
        m.normalized["noise"]["seed"] = *o.seed;
        m.normalized["seed_override"] = true;
    }
    if (o.workers) {
        // Worker count never enters the numerics, so it is excluded from the
        // content hash: reruns at any parallelism are byte-identical.
        m.sizing.workers = std::max(1, *o.workers);
    }
    if (o.snapshot_times) m.snapshot_times = *o.snapshot_times;
    m.sizing.force = o.force;
}

int run_manifest(const RunManifest& m, const std::filesystem::path& output_dir) {
    std::filesystem::create_directories(output_dir);
    const std::vector<std::string> artifacts{"manifest.json", "report.json", "curves.csv",
                                             "ledger.csv"};
    write_text(output_dir / "manifest.json", m.normalized.dump(2) + "\n");
    write_ledger_csv(output_dir / "ledger.csv", m.ledger);

    ExperimentReport rep;
    bool aborted = false;
    std::string reason;
    ExperimentInputs in{m.grid, m.params, m.symbol, m.ledger, m.sizing};
    try {
        if (m.kind == "check") {
            rep.kind = "check";
            rep.notes.push_back("parse + ledger only; no simulation");
        } else if (m.kind == "moment") {
            rep = moment_experiment(in, m.radius_sq);
        } else if (m.kind == "moment4") {
            rep = moment4_experiment(in, m.radius_4);
        } else if (m.kind == "regularity") {
            rep = regularity_experiment(in, m.radius_sq);
        } else if (m.kind == "stability") {
            rep = stability_experiment(in, m.stability);
        } else if (m.kind == "translation") {
            rep = translation_experiment(in, m.translation);
        } else if (m.kind == "absorbing") {
            rep = absorbing_experiment(in, m.absorbing);
        } else if (m.kind == "attractor") {
            rep = attractor_experiment(in, m.attractor);
        } else {
            throw ConfigError("unknown experiment kind: " + m.kind);
        }
    } catch (const NonDissipativeError& e) {
        write_text(output_dir / "report.json",
                   report_json(m, rep, artifacts, true, e.what()).dump(2) + "\n");
        write_curves_csv(output_dir / "curves.csv", rep);
        return exit_config_error;
    } catch (const SimError& e) {
        aborted = true;
        reason = std::string(e.what()) + " at step " + std::to_string(e.step);
        rep.notes.push_back("partial outputs: run aborted");
    }

    write_curves_csv(output_dir / "curves.csv", rep);
    write_text(output_dir / "report.json",
               report_json(m, rep, artifacts, aborted, reason).dump(2) + "\n");
    if (aborted) return exit_numeric_abort;
    return rep.pass() ? exit_ok : exit_assert_fail;
}

std::vector<std::string> emit_plots(const std::vector<std::filesystem::path>& report_files,
                                    const std::filesystem::path& output_dir) {
    std::filesystem::create_directories(output_dir);

    struct Row {
        std::string report, curve;
        double x, y, err;
    };
    std::vector<Row> moment, attraction, ladder, absorbing;

    for (const auto& rf : report_files) {
        std::ifstream in(rf);
        if (!in) throw ConfigError("missing report: " + rf.string());
        json rep;
        try {
            in >> rep;
        } catch (const json::exception& e) {
            throw ConfigError("unreadable report " + rf.string() + ": " + e.what());
        }
        const std::string tag =
            rep.value("kind", std::string("?")) + ":" + rep.value("content_hash", std::string());

        const auto curves_path = rf.parent_path() / "curves.csv";
        std::ifstream curves(curves_path);
        if (!curves) throw ConfigError("missing curves for report: " + curves_path.string());
        std::string line;
        std::getline(curves, line);  // header
        while (std::getline(curves, line)) {
            if (line.empty()) continue;
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 + 1);
            const auto c3 = line.find(',', c2 + 1);
            if (c1 == std::string::npos || c2 == std::string::npos || c3 == std::string::npos)
                throw ConfigError("malformed curves row in " + curves_path.string());
            Row row{tag, line.substr(0, c1), std::stod(line.substr(c1 + 1, c2 - c1 - 1)),
                    std::stod(line.substr(c2 + 1, c3 - c2 - 1)), std::stod(line.substr(c3 + 1))};
            const std::string& name = row.curve;
            if (name.rfind("absorb-", 0) == 0) {
                absorbing.push_back(row);
            } else if (name == "attraction" || name == "cauchy" || name == "floor" ||
                       name == "quasi-invariance") {
                attraction.push_back(row);
            } else if (name.rfind("stability", 0) == 0 || name.rfind("translation", 0) == 0) {
                ladder.push_back(row);
            } else {
                moment.push_back(row);
            }
        }
    }

    std::vector<std::string> written;
    auto emit = [&](const char* file, const char* header, const std::vector<Row>& rows) {
        if (rows.empty()) return;
        std::ofstream out(output_dir / file, std::ios::trunc);
        out << header << "\n";
        for (const auto& r : rows) {
            out << r.report << "," << r.curve << "," << format_double(r.x) << ","
                << format_double(r.y) << "," << format_double(r.err) << "\n";
        }
        written.push_back(file);
    };
    emit("moment_curves.csv", "report,curve,t,value,stderr", moment);
    emit("attraction_curves.csv", "report,curve,x,value,stderr", attraction);
    emit("stability_ladders.csv", "report,curve,level,value,stderr", ladder);
    emit("absorbing_curves.csv", "report,curve,t,value,stderr", absorbing);
    return written;
}

} // namespace mvns
