#include "bhwave/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bhwave {

std::string format_sci17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

std::string series_to_csv(const DiagnosticsSeries& series) {
    std::ostringstream out;
    out << "t,F0,F1,U,l2_norm,sup_norm,linear_energy\n";
    for (const DiagnosticsSample& s : series.samples) {
        out << format_sci17(s.t) << ',' << format_sci17(s.F0) << ','
            << format_sci17(s.F1) << ',' << format_sci17(s.U) << ','
            << format_sci17(s.l2_norm) << ',' << format_sci17(s.sup_norm) << ','
            << format_sci17(s.linear_energy) << '\n';
    }
    return out.str();
}

nlohmann::ordered_json to_json(const BlowupReport& rep) {
    nlohmann::ordered_json j;
    j["detected"] = rep.detected;
    if (rep.detected) {
        j["T_est"] = rep.T_est;
        j["t_trigger"] = rep.t_trigger;
    } else {
        j["T_est"] = nullptr;
        j["t_trigger"] = nullptr;
    }
    j["trigger"] = to_string(rep.trigger);
    auto hist = nlohmann::ordered_json::array();
    for (const auto& [dx, T] : rep.refinement_history)
        hist.push_back({{"dx", dx}, {"T_est", T}});
    j["refinement_history"] = hist;
    return j;
}

nlohmann::ordered_json to_json(const BandReport& rep) {
    nlohmann::ordered_json j;
    j["M"] = rep.M;
    j["p"] = rep.p;
    auto ranges = nlohmann::ordered_json::array();
    for (const auto& rr : rep.ranges) {
        nlohmann::ordered_json e;
        e["range"] = {rr.range.lo, rr.range.hi};
        auto bands = nlohmann::ordered_json::array();
        for (const auto& b : rr.bands)
            bands.push_back({{"quantity", b.quantity}, {"min", b.lo}, {"max", b.hi}});
        e["bands"] = bands;
        auto slopes = nlohmann::ordered_json::array();
        for (const auto& s : rr.slopes)
            slopes.push_back({{"quantity", s.quantity}, {"slope", s.slope}});
        e["slopes"] = slopes;
        ranges.push_back(e);
    }
    j["ranges"] = ranges;
    return j;
}

nlohmann::ordered_json to_json(const ResidualReport& rep) {
    return {{"rel_l2_residual", rep.rel_l2_residual},
            {"interior_samples", rep.interior_samples}};
}

nlohmann::ordered_json to_json(const HolderReport& rep) {
    nlohmann::ordered_json j;
    j["holds"] = rep.holds;
    j["worst_rel_violation"] = rep.worst_rel_violation;
    j["min_slack"] = rep.min_slack;
    return j;
}

nlohmann::ordered_json to_json(const F1BoundReport& rep) {
    nlohmann::ordered_json j;
    j["holds"] = rep.holds;
    j["floor"] = rep.floor;
    j["min_F1"] = rep.min_F1;
    if (rep.first_violation_t >= 0.0) j["first_violation_t"] = rep.first_violation_t;
    j["integral_form_holds"] = rep.integral_form_holds;
    j["integral_form_margin"] = rep.integral_form_margin;
    return j;
}

nlohmann::ordered_json to_json(const BlowupFit& fit) {
    return {{"T_fit", fit.T_fit},
            {"alpha_fit", fit.alpha_fit},
            {"expected_alpha", fit.expected_alpha}};
}

nlohmann::ordered_json to_json(const BootstrapReport& rep) {
    nlohmann::ordered_json j;
    auto stages = nlohmann::ordered_json::array();
    for (const auto& st : rep.stages)
        stages.push_back({{"k", st.k},
                          {"a_k", st.a_k},
                          {"p_k", st.p_k},
                          {"log_c_k", st.log_c_k},
                          {"positive", st.positive}});
    j["stages"] = stages;
    j["measured_slope"] = rep.measured_slope;
    j["slope_lower_bound"] = rep.slope_lower_bound;
    j["consistent"] = rep.consistent;
    return j;
}

nlohmann::ordered_json aux_constants_json(const AuxFunctions& aux) {
    nlohmann::ordered_json j;
    j["b"] = aux.b;
    j["D"] = aux.D;
    j["d_plus"] = aux.d_plus;
    j["d_minus"] = aux.d_minus;
    j["e_plus"] = aux.e_plus;
    j["e_minus"] = aux.e_minus;
    j["A"] = aux.A;
    j["M"] = aux.M;
    return j;
}

std::string aux_table_csv(const AuxFunctions& aux, const Background& bg,
                          double p) {
    std::ostringstream out;
    out << "s,phi0,psi0,phi1,W,f\n";
    for (std::size_t i = 0; i < aux.grid.size(); ++i) {
        const double s = aux.grid.at(i);
        const CoefficientSample c = bg.coefficients(s, p);
        out << format_sci17(s) << ',' << format_sci17(aux.phi0[i]) << ','
            << format_sci17(aux.psi0[i]) << ',' << format_sci17(aux.phi1[i])
            << ',' << format_sci17(c.W) << ',' << format_sci17(c.f) << '\n';
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace bhwave
