#include "bhwave/runner.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <thread>

#include "bhwave/diagnostics.hpp"
#include "bhwave/kato.hpp"
#include "bhwave/output.hpp"

namespace bhwave {

std::vector<Scenario> expand_sweep(const RunConfig& cfg) {
    const SweepSpec& sw = cfg.sweep;
    auto axis = [](const std::vector<double>& xs, double fallback) {
        return xs.empty() ? std::vector<double>{fallback} : xs;
    };
    const Scenario& base = cfg.scenario;
    std::vector<Scenario> out;
    for (double p : axis(sw.p, base.p))
        for (double eps : axis(sw.eps, base.eps))
            for (double s0 : axis(sw.s0, base.s0))
                for (double dx : axis(sw.dx, base.dx)) {
                    Scenario sc = base;
                    sc.p = p;
                    sc.eps = eps;
                    sc.s0 = s0;
                    sc.dx = dx;
                    out.push_back(sc);
                }
    return out;
}

nlohmann::ordered_json run_scenario_with_checks(
    const Scenario& sc_in, const std::vector<std::string>& checks, bool refine,
    std::string* csv_out) {
    Scenario sc = sc_in;
    sc.validate_and_fill();
    const std::vector<std::string>& enabled =
        checks.empty() ? all_check_names() : checks;
    auto on = [&](const char* name) {
        for (const auto& c : enabled)
            if (c == name) return true;
        return false;
    };

    const Background bg(sc.M, sc.domain_min() - 6.0, sc.domain_max() + 6.0);
    const AuxFunctions aux = build_aux(bg, sc.domain_min(), sc.domain_max() + 2.0 * sc.dx, sc.dx);
    RunResult res = run(sc, bg, aux);
    res.series.meta.scenario_hash = scenario_hash(sc);

    if (refine) {
        Scenario fine = sc;
        fine.dx = 0.5 * sc.dx;
        const AuxFunctions aux2 =
            build_aux(bg, fine.domain_min(), fine.domain_max() + 2.0 * fine.dx, fine.dx);
        const RunResult res2 = run(fine, bg, aux2);
        if (res2.report.detected)
            res.report.refinement_history.emplace_back(fine.dx, res2.report.T_est);
    }

    nlohmann::ordered_json entry;
    {
        entry["scenario_hash"] = res.series.meta.scenario_hash;
        entry["scenario"] = {
            {"p", sc.p},         {"M", sc.M},
            {"eps", sc.eps},     {"s0", sc.s0},
            {"R", sc.R},         {"dx", sc.dx},
            {"cfl", sc.cfl},     {"t_max", sc.t_max},
            {"blowup_threshold", sc.blowup_threshold},
            {"nonlinearity", sc.nonlinearity_enabled},
            {"sample_every", sc.sample_every}};
    }
    entry["blowup"] = to_json(res.report);
    entry["support_contained"] = res.series.meta.support_contained;

    nlohmann::ordered_json checks_json;
    if (on("f0_identity")) {
        try {
            // restrict to the resolved pre-blow-up window on detected runs
            const double t_hi =
                res.report.detected ? 0.85 * res.report.t_trigger : 1e300;
            checks_json["f0_identity"] =
                to_json(check_F0_identity(res.series, 2, 0.0, t_hi));
        } catch (const std::exception& e) {
            checks_json["f0_identity"] = {{"error", e.what()}};
        }
    }
    if (on("holder_chain")) {
        const std::size_t n = res.series.meta.n;
        const CoefficientTable coeff = CoefficientTable::from_background(
            bg, sc.p, res.series.meta.grid_s0, sc.dx, n);
        const AuxOnGrid ax = resample_aux(aux, res.series.meta.grid_s0, sc.dx, n);
        checks_json["holder_chain"] =
            to_json(check_holder_chain(res.series, coeff.view(), ax.psi0));
    }
    if (on("f1_lower_bound"))
        checks_json["f1_lower_bound"] = to_json(check_F1_lower_bound(res.series));
    if (on("bootstrap")) {
        try {
            checks_json["bootstrap"] = to_json(
                bootstrap_trace(res.series, 3.0 * (sc.p - 1.0), 4.0 - sc.p - 0.1));
        } catch (const std::exception& e) {
            checks_json["bootstrap"] = {{"error", e.what()}};
        }
    }
    if (on("blowup_fit") && res.report.detected) {
        try {
            checks_json["blowup_fit"] =
                to_json(fit_blowup_exponent(res.series.sup_history, sc.p));
        } catch (const std::exception& e) {
            checks_json["blowup_fit"] = {{"error", e.what()}};
        }
    }
    entry["checks"] = checks_json;
    if (csv_out) *csv_out = series_to_csv(res.series);
    return entry;
}

int execute(const RunConfig& cfg, const ExecOptions& opts) {
    namespace fs = std::filesystem;
    const std::string out_dir = !opts.out_dir.empty() ? opts.out_dir
                                : !cfg.out_dir.empty() ? cfg.out_dir
                                                       : std::string(".");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::fprintf(stderr, "error: cannot create output directory %s: %s\n",
                     out_dir.c_str(), ec.message().c_str());
        return 2;
    }
    const std::vector<Scenario> scenarios = expand_sweep(cfg);
    const std::size_t n_runs = scenarios.size();
    std::vector<std::string> csvs(n_runs);
    std::vector<nlohmann::ordered_json> entries(n_runs);
    std::vector<std::exception_ptr> errors(n_runs);

    std::atomic<std::size_t> cursor{0};
    const int workers =
        std::max(1, std::min<int>(opts.workers, static_cast<int>(n_runs)));
    auto worker = [&]() {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= n_runs) return;
            std::fprintf(stderr, "[bhwave] run %zu/%zu (p=%g eps=%g s0=%g dx=%g)\n",
                         i + 1, n_runs, scenarios[i].p, scenarios[i].eps,
                         scenarios[i].s0, scenarios[i].dx);
            try {
                entries[i] = run_scenario_with_checks(scenarios[i], cfg.checks,
                                                      opts.refine, &csvs[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    bool any_error = false;
    nlohmann::ordered_json summary;
    summary["schema_version"] = cfg.schema_version;
    auto runs = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < n_runs; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "run_%03zu.csv", i);
        if (errors[i]) {
            any_error = true;
            try {
                std::rethrow_exception(errors[i]);
            } catch (const std::exception& e) {
                std::fprintf(stderr, "error: run %zu failed: %s\n", i, e.what());
                runs.push_back({{"index", i}, {"error", e.what()}});
            }
            continue;
        }
        try {
            write_text_file((fs::path(out_dir) / name).string(), csvs[i]);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            any_error = true;
        }
        nlohmann::ordered_json entry;
        entry["index"] = i;
        entry["csv"] = name;
        for (auto& [key, value] : entries[i].items()) entry[key] = value;
        runs.push_back(entry);
    }
    summary["runs"] = runs;
    try {
        write_text_file((fs::path(out_dir) / "summary.json").string(),
                        summary.dump(2) + "\n");
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        any_error = true;
    }
    return any_error ? 2 : 0;
}

}  // namespace bhwave
