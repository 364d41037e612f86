#pragma once

// Orchestration of configured runs: sweep expansion, a worker pool over
// independent scenarios, per-run CSV artifacts and an aggregated JSON summary
// merged in sweep order. Progress goes to stderr only.

#include <string>

#include "json.hpp"

#include "bhwave/config.hpp"

namespace bhwave {

struct ExecOptions {
    std::string out_dir;  // overrides config when non-empty
    bool refine = false;
    int workers = 1;
};

// Expanded scenario list in canonical sweep order (p, eps, s0, dx nested).
std::vector<Scenario> expand_sweep(const RunConfig& cfg);

// Runs everything, writes run_NNN.csv plus summary.json under the output
// directory, and returns the process exit status (0 ok, 2 internal error).
int execute(const RunConfig& cfg, const ExecOptions& opts);

// Single-scenario core shared by execute and the tests: run + enabled checks.
nlohmann::ordered_json run_scenario_with_checks(const Scenario& sc,
                                                const std::vector<std::string>& checks,
                                                bool refine,
                                                std::string* csv_out);

}  // namespace bhwave
