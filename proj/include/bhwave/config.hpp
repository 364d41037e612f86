#pragma once

// Line-oriented "key = value" run configuration with dotted sections, e.g.
//   scenario.p = 2.0
//   sweep.eps = 0.25, 0.5
// '#' starts a comment. Unknown keys and invariant violations are errors.

#include <string>
#include <vector>

#include "bhwave/wavesolver.hpp"

namespace bhwave {

struct SweepSpec {
    std::vector<double> p, eps, s0, dx;
    bool empty() const {
        return p.empty() && eps.empty() && s0.empty() && dx.empty();
    }
};

struct RunConfig {
    Scenario scenario;
    SweepSpec sweep;
    std::vector<std::string> checks;  // empty means "all"
    std::string out_dir;              // empty means CLI --out (or cwd)
    int schema_version = 1;
};

// All known check names, in canonical order.
const std::vector<std::string>& all_check_names();

// Throws std::invalid_argument with "line N:" context on parse errors and a
// named-invariant message on validation errors.
RunConfig parse_config(const std::string& text);

// Canonical serialization: fixed key order, 17 significant digits. Reparsing
// yields an equal RunConfig.
std::string canonical_text(const RunConfig& cfg);

bool operator==(const SweepSpec& a, const SweepSpec& b);
bool operator==(const RunConfig& a, const RunConfig& b);
bool operator==(const Scenario& a, const Scenario& b);

// FNV-1a over the canonical scenario text; keys diagnostics to their config.
std::uint64_t scenario_hash(const Scenario& sc);

}  // namespace bhwave
