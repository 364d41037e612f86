#include "bhwave/config.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace bhwave {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        if (!std::isfinite(x)) throw std::invalid_argument("not finite");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("line " + std::to_string(line) +
                                    ": expected a number, got '" + v + "'");
    }
}

bool parse_flag(const std::string& v, int line) {
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    throw std::invalid_argument("line " + std::to_string(line) +
                                ": expected a flag, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw std::invalid_argument("line " + std::to_string(line) +
                                        ": empty list entry");
        out.push_back(parse_number(item, line));
    }
    if (out.empty())
        throw std::invalid_argument("line " + std::to_string(line) +
                                    ": empty list");
    return out;
}

std::string sci17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

}  // namespace

const std::vector<std::string>& all_check_names() {
    static const std::vector<std::string> names{
        "f0_identity", "holder_chain", "f1_lower_bound", "bootstrap",
        "blowup_fit"};
    return names;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    cfg.scenario.dx = 0.0;  // filled by validate
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    bool saw_p = false, saw_eps = false, saw_s0 = false, saw_R = false;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(line) +
                                        ": expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (val.empty())
            throw std::invalid_argument("line " + std::to_string(line) +
                                        ": empty value for '" + key + "'");
        Scenario& sc = cfg.scenario;
        if (key == "scenario.p") {
            sc.p = parse_number(val, line);
            saw_p = true;
        } else if (key == "scenario.M") {
            sc.M = parse_number(val, line);
        } else if (key == "scenario.eps") {
            sc.eps = parse_number(val, line);
            saw_eps = true;
        } else if (key == "scenario.s0") {
            sc.s0 = parse_number(val, line);
            saw_s0 = true;
        } else if (key == "scenario.R") {
            sc.R = parse_number(val, line);
            saw_R = true;
        } else if (key == "scenario.dx") {
            sc.dx = parse_number(val, line);
        } else if (key == "scenario.cfl") {
            sc.cfl = parse_number(val, line);
        } else if (key == "scenario.t_max") {
            sc.t_max = parse_number(val, line);
        } else if (key == "scenario.blowup_threshold") {
            sc.blowup_threshold = parse_number(val, line);
        } else if (key == "scenario.nonlinearity") {
            sc.nonlinearity_enabled = parse_flag(val, line);
        } else if (key == "scenario.sample_every") {
            sc.sample_every = static_cast<int>(parse_number(val, line));
        } else if (key == "sweep.p") {
            cfg.sweep.p = parse_list(val, line);
        } else if (key == "sweep.eps") {
            cfg.sweep.eps = parse_list(val, line);
        } else if (key == "sweep.s0") {
            cfg.sweep.s0 = parse_list(val, line);
        } else if (key == "sweep.dx") {
            cfg.sweep.dx = parse_list(val, line);
        } else if (key == "output.dir") {
            cfg.out_dir = val;
        } else if (key == "checks") {
            std::stringstream ss(val);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                bool known = false;
                for (const auto& name : all_check_names()) known |= (name == item);
                if (!known)
                    throw std::invalid_argument("line " + std::to_string(line) +
                                                ": unknown check '" + item + "'");
                cfg.checks.push_back(item);
            }
        } else {
            throw std::invalid_argument("line " + std::to_string(line) +
                                        ": unknown key '" + key + "'");
        }
    }
    if (!saw_p || !saw_eps || !saw_s0 || !saw_R)
        throw std::invalid_argument(
            "config must set scenario.p, scenario.eps, scenario.s0 and scenario.R");
    cfg.scenario.validate_and_fill();  // names the violated invariant
    return cfg;
}

std::string canonical_text(const RunConfig& cfg) {
    std::ostringstream out;
    const Scenario& sc = cfg.scenario;
    out << "scenario.p = " << sci17(sc.p) << "\n";
    out << "scenario.M = " << sci17(sc.M) << "\n";
    out << "scenario.eps = " << sci17(sc.eps) << "\n";
    out << "scenario.s0 = " << sci17(sc.s0) << "\n";
    out << "scenario.R = " << sci17(sc.R) << "\n";
    out << "scenario.dx = " << sci17(sc.dx) << "\n";
    out << "scenario.cfl = " << sci17(sc.cfl) << "\n";
    out << "scenario.t_max = " << sci17(sc.t_max) << "\n";
    out << "scenario.blowup_threshold = " << sci17(sc.blowup_threshold) << "\n";
    out << "scenario.nonlinearity = " << (sc.nonlinearity_enabled ? "true" : "false") << "\n";
    out << "scenario.sample_every = " << sc.sample_every << "\n";
    auto list = [&](const char* key, const std::vector<double>& xs) {
        if (xs.empty()) return;
        out << key << " = ";
        for (std::size_t i = 0; i < xs.size(); ++i)
            out << (i ? ", " : "") << sci17(xs[i]);
        out << "\n";
    };
    list("sweep.p", cfg.sweep.p);
    list("sweep.eps", cfg.sweep.eps);
    list("sweep.s0", cfg.sweep.s0);
    list("sweep.dx", cfg.sweep.dx);
    if (!cfg.checks.empty()) {
        out << "checks = ";
        for (std::size_t i = 0; i < cfg.checks.size(); ++i)
            out << (i ? ", " : "") << cfg.checks[i];
        out << "\n";
    }
    if (!cfg.out_dir.empty()) out << "output.dir = " << cfg.out_dir << "\n";
    return out.str();
}

bool operator==(const Scenario& a, const Scenario& b) {
    return a.p == b.p && a.M == b.M && a.eps == b.eps && a.s0 == b.s0 &&
           a.R == b.R && a.dx == b.dx && a.cfl == b.cfl && a.t_max == b.t_max &&
           a.blowup_threshold == b.blowup_threshold &&
           a.nonlinearity_enabled == b.nonlinearity_enabled &&
           a.sample_every == b.sample_every;
}

bool operator==(const SweepSpec& a, const SweepSpec& b) {
    return a.p == b.p && a.eps == b.eps && a.s0 == b.s0 && a.dx == b.dx;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.scenario == b.scenario && a.sweep == b.sweep &&
           a.checks == b.checks && a.out_dir == b.out_dir &&
           a.schema_version == b.schema_version;
}

std::uint64_t scenario_hash(const Scenario& sc) {
    RunConfig tmp;
    tmp.scenario = sc;
    const std::string text = canonical_text(tmp);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace bhwave
