// bhwave: numerical laboratory for the reduced semilinear wave problem on a
// black-hole exterior. Subcommands: background, aux, run, sweep, kato.
// Standard output carries JSON (or nothing); progress goes to stderr.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "bhwave/auxode.hpp"
#include "bhwave/background.hpp"
#include "bhwave/config.hpp"
#include "bhwave/kato.hpp"
#include "bhwave/output.hpp"
#include "bhwave/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<bhwave::Interval> parse_ranges(const std::vector<std::string>& specs) {
    std::vector<bhwave::Interval> out;
    for (const std::string& s : specs) {
        const auto colon = s.find(':');
        if (colon == std::string::npos)
            throw std::runtime_error("range must look like lo:hi, got " + s);
        out.push_back({std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))});
    }
    return out;
}

int cmd_background(double M, double p, const std::vector<std::string>& ranges,
                   const std::string& out_path) {
    auto ivs = parse_ranges(ranges);
    double lo = -50.0, hi = 210.0;
    for (const auto& iv : ivs) {
        lo = std::min(lo, iv.lo - 1.0);
        hi = std::max(hi, iv.hi + 1.0);
    }
    const bhwave::Background bg(M, lo, hi);
    const bhwave::BandReport rep = bg.asymptotic_band_report(p, ivs);
    const std::string text = bhwave::to_json(rep).dump(2) + "\n";
    if (out_path.empty())
        std::fputs(text.c_str(), stdout);
    else
        bhwave::write_text_file(out_path, text);
    return 0;
}

int cmd_aux(double M, double smin, double smax, double ds, double A, double p,
            const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const bhwave::Background bg(M, smin - 6.0, smax + 6.0);
    const bhwave::AuxFunctions aux = bhwave::build_aux(bg, smin, smax, ds, A);
    bhwave::write_text_file(out_dir + "/aux_table.csv",
                            bhwave::aux_table_csv(aux, bg, p));
    bhwave::write_text_file(out_dir + "/aux_constants.json",
                            bhwave::aux_constants_json(aux).dump(2) + "\n");
    std::fprintf(stderr, "[bhwave] aux tables written to %s\n", out_dir.c_str());
    return 0;
}

int cmd_kato(double a0, double p, double q, int k, double C, double delta1,
             double M, double eps, double R, double C0, bool run_ode, double c,
             double V0, double V0p, double t_cap, double tol) {
    nlohmann::ordered_json j;
    auto crit = nlohmann::ordered_json::array();
    for (int n = 2; n <= 6; ++n)
        crit.push_back({{"n", n}, {"p0", bhwave::critical_exponent(n)}});
    j["critical_exponents"] = crit;
    const bhwave::RecurrenceResult rec = bhwave::exponent_recurrence(a0, p, q, k);
    j["recurrence"] = {{"a", rec.a}, {"p", rec.p}};
    bhwave::KatoParams kp;
    kp.p = p;
    kp.q = q;
    kp.a = a0;
    kp.R = R;
    kp.C = C;
    kp.delta1 = delta1;
    kp.eps = eps;
    kp.C0 = C0;
    kp.delta = p > 2.0 ? bhwave::delta_from(delta1, p, M) : 0.0;
    try {
        const bhwave::Schedule sch = bhwave::schedule(eps, p, M, R, C0, delta1);
        kp.T1 = sch.T1;
        j["schedule"] = {{"T1", sch.T1}, {"s0", sch.s0}};
    } catch (const std::exception& e) {
        j["schedule"] = {{"error", e.what()}};
    }
    const bhwave::Thresholds th = bhwave::thresholds(kp);
    j["thresholds"] = {{"x0", th.x0}, {"x0_T1", th.x0_T1}};
    j["divergence_condition"] = kp.divergence_condition();
    if (run_ode) {
        const bhwave::LifespanResult lr =
            bhwave::lifespan_ode(p, q, a0, R, c, V0, V0p, t_cap, tol);
        nlohmann::ordered_json lj;
        lj["blown_up"] = lr.blown_up;
        if (lr.blown_up) lj["T"] = lr.T;
        lj["t_end"] = lr.t_end;
        lj["V_end"] = lr.V_end;
        lj["steps"] = lr.steps;
        lj["growth_hypothesis_held"] = lr.growth_hypothesis_held;
        j["lifespan_ode"] = lj;
    }
    std::fputs((j.dump(2) + "\n").c_str(), stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for semilinear waves outside a black hole"};
    app.require_subcommand(1);

    // background
    auto* bgc = app.add_subcommand("background", "coefficient band report");
    double bg_M = 1.0, bg_p = 2.2;
    std::vector<std::string> bg_ranges{"10:200", "-40:-15"};
    std::string bg_out;
    bgc->add_option("--M", bg_M, "mass");
    bgc->add_option("--p", bg_p, "nonlinearity exponent for the f weight");
    bgc->add_option("--range", bg_ranges, "ranges lo:hi (repeatable)");
    bgc->add_option("--out", bg_out, "output JSON path (default stdout)");

    // aux
    auto* auxc = app.add_subcommand("aux", "auxiliary function tables");
    double ax_M = 1.0, ax_smin = -60.0, ax_smax = 60.0, ax_ds = 0.02,
           ax_A = -1.0, ax_p = 2.0;
    std::string ax_out = ".";
    auxc->add_option("--M", ax_M, "mass");
    auxc->add_option("--smin", ax_smin, "left end");
    auxc->add_option("--smax", ax_smax, "right end");
    auxc->add_option("--ds", ax_ds, "grid spacing");
    auxc->add_option("--A", ax_A, "exponential rate (default 1/2M)");
    auxc->add_option("--p", ax_p, "exponent for the f column");
    auxc->add_option("--out", ax_out, "output directory");

    // run / sweep
    auto add_run_opts = [&](CLI::App* cmd, std::string& cfg_path,
                            std::string& out_dir, bool& refine, int& workers) {
        cmd->add_option("--config", cfg_path, "config file")->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_flag("--refine", refine, "rerun at dx/2 for the refinement history");
        cmd->add_option("--workers", workers, "worker threads for sweeps");
    };
    auto* runc = app.add_subcommand("run", "single configured run");
    std::string run_cfg, run_out;
    bool run_refine = false;
    int run_workers = 1;
    add_run_opts(runc, run_cfg, run_out, run_refine, run_workers);
    auto* swc = app.add_subcommand("sweep", "sweep over configured lists");
    std::string sw_cfg, sw_out;
    bool sw_refine = false;
    int sw_workers = 1;
    add_run_opts(swc, sw_cfg, sw_out, sw_refine, sw_workers);

    // kato
    auto* kc = app.add_subcommand("kato", "exponent bookkeeping and thresholds");
    double k_a0 = 1.9, k_p = 2.0, k_q = 3.0, k_C = 1.0, k_delta1 = 0.5,
           k_M = 1.0, k_eps = 0.5, k_R = 1.0, k_C0 = 1.0;
    int k_k = 10;
    bool k_ode = false;
    double k_c = 1.0, k_V0 = 1.0, k_V0p = 0.0, k_tcap = 1e4, k_tol = 1e-8;
    kc->add_option("--a0", k_a0, "starting exponent a_0");
    kc->add_option("--p", k_p, "nonlinearity exponent");
    kc->add_option("--q", k_q, "weight exponent");
    kc->add_option("--k", k_k, "recurrence depth");
    kc->add_option("--C", k_C, "absorption constant");
    kc->add_option("--delta1", k_delta1, "schedule parameter in (0,1), < M");
    kc->add_option("--M", k_M, "mass");
    kc->add_option("--eps", k_eps, "data size");
    kc->add_option("--R", k_R, "data half width");
    kc->add_option("--C0", k_C0, "schedule constant");
    kc->add_flag("--ode", k_ode, "run the comparison ODE");
    kc->add_option("--c", k_c, "ODE coefficient");
    kc->add_option("--V0", k_V0, "ODE initial value");
    kc->add_option("--V0p", k_V0p, "ODE initial derivative");
    kc->add_option("--tcap", k_tcap, "ODE time cap");
    kc->add_option("--tol", k_tol, "ODE tolerance");

    try {
        app.parse(argc, argv);
        if (bgc->parsed()) return cmd_background(bg_M, bg_p, bg_ranges, bg_out);
        if (auxc->parsed()) return cmd_aux(ax_M, ax_smin, ax_smax, ax_ds, ax_A, ax_p, ax_out);
        if (kc->parsed())
            return cmd_kato(k_a0, k_p, k_q, k_k, k_C, k_delta1, k_M, k_eps, k_R,
                            k_C0, k_ode, k_c, k_V0, k_V0p, k_tcap, k_tol);
        const bool is_sweep = swc->parsed();
        const std::string cfg_path = is_sweep ? sw_cfg : run_cfg;
        const bhwave::RunConfig cfg = bhwave::parse_config(read_file(cfg_path));
        if (is_sweep && cfg.sweep.empty())
            throw std::runtime_error("sweep subcommand needs sweep.* lists in the config");
        if (!is_sweep && !cfg.sweep.empty())
            throw std::runtime_error("run subcommand takes a sweep-free config (use sweep)");
        bhwave::ExecOptions opts;
        opts.out_dir = is_sweep ? sw_out : run_out;
        opts.refine = is_sweep ? sw_refine : run_refine;
        opts.workers = is_sweep ? sw_workers : run_workers;
        return bhwave::execute(cfg, opts);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
