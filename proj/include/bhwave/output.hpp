#pragma once

// Machine-readable artifacts: the CSV time series (comma-separated, '.'
// decimal, scientific notation with 17 significant digits) and ordered-key
// JSON reports.

#include <string>

#include "json.hpp"

#include "bhwave/background.hpp"
#include "bhwave/diagnostics.hpp"
#include "bhwave/kato.hpp"
#include "bhwave/wavesolver.hpp"

namespace bhwave {

std::string format_sci17(double x);

// Header "t,F0,F1,U,l2_norm,sup_norm,linear_energy" plus one row per sample.
std::string series_to_csv(const DiagnosticsSeries& series);

nlohmann::ordered_json to_json(const BlowupReport& rep);
nlohmann::ordered_json to_json(const BandReport& rep);
nlohmann::ordered_json to_json(const ResidualReport& rep);
nlohmann::ordered_json to_json(const HolderReport& rep);
nlohmann::ordered_json to_json(const F1BoundReport& rep);
nlohmann::ordered_json to_json(const BlowupFit& fit);
nlohmann::ordered_json to_json(const BootstrapReport& rep);
nlohmann::ordered_json aux_constants_json(const AuxFunctions& aux);

// (s, phi0, psi0, phi1, W, f) table for the aux subcommand.
std::string aux_table_csv(const AuxFunctions& aux, const Background& bg,
                          double p);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace bhwave
