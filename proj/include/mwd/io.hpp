#pragma once

#include <json.hpp>

#include <string>

#include "mwd/design.hpp"
#include "mwd/exactla.hpp"
#include "mwd/optimality.hpp"

namespace mwd {

// ordered_json keeps insertion order, which is what makes every emitted
// document byte-deterministic.
using Json = nlohmann::ordered_json;

Json design_to_json(const Design& d);
Design design_from_json(const Json& j);

// Same schema as the design document with "block" in the treatment slot.
Json mep_to_json(const MainEffectPlan& plan);
MainEffectPlan mep_from_json(const Json& j);

// One row per unit, columns are the factor names plus "treatment".
std::string design_to_csv(const Design& d);

// Spectra serialize as {"value": "num/den", "multiplicity": k} lists; exact
// matrices as row-major arrays of "num/den" strings.
Json spectrum_to_json(const Spectrum& sp);
Spectrum spectrum_from_json(const Json& j);
Json matrix_to_json(const RMatrix& m);

Json report_to_json(const OptimalityReport& report);

std::string dump_json(const Json& j);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace mwd
