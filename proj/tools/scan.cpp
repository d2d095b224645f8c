// scan <config-path> [--out PATH] [--threads N] [--check-only]
#include "qplate/errors.hpp"
#include "qplate/scan.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

void print_report(const qplate::IdentityReport& r) {
    std::fprintf(stderr,
                 "identities over %zu points (%zu opaque skipped)\n"
                 "  row sums    max %.3e  mean %.3e\n"
                 "  cross term  max %.3e  mean %.3e\n"
                 "  unitarity   max %.3e  mean %.3e\n"
                 "  %s (threshold %.0e)\n",
                 r.points, r.skipped, r.max_row, r.mean_row, r.max_cross, r.mean_cross, r.max_unitarity,
                 r.mean_unitarity, r.passed ? "PASS" : "FAIL", qplate::kIdentityThreshold);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Input-output scans for dispersive, lossy multilayer plates"};
    std::string config_path, out_path;
    int threads = 1;
    bool check_only = false;
    app.add_option("config", config_path, "YAML scan configuration")->required();
    app.add_option("--out", out_path, "CSV output path (overrides 'output' in the config; '-' for stdout)");
    app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 1024));
    app.add_flag("--check-only", check_only, "validate the config and run the identity check only");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    qplate::ScanConfig cfg;
    try {
        cfg = qplate::load_config(config_path);
    } catch (const qplate::Error& e) {
        std::fprintf(stderr, "%s: %s\n", config_path.c_str(), e.what());
        return 1;
    }

    try {
        if (check_only) {
            const auto report = qplate::check_identities(cfg, threads);
            print_report(report);
            return report.passed ? 0 : 2;
        }
        const auto rows = qplate::run_scan(cfg, threads);
        if (out_path.empty()) out_path = cfg.output;
        if (out_path.empty() || out_path == "-") qplate::write_csv(std::cout, rows);
        else qplate::emit_csv(rows, out_path);
        if (cfg.scenario == qplate::Scenario::Identities) {
            const auto report = qplate::check_identities(cfg, threads);
            print_report(report);
            return report.passed ? 0 : 2;
        }
    } catch (const qplate::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
