#pragma once

#include <json.hpp>

#include "nlsv/field.hpp"
#include "nlsv/potential.hpp"

namespace nlsv {

using json = nlohmann::json;

json freq_to_json(Freq n);
Freq freq_from_json(const json& j);

json to_json(const AmplitudeField& f);
AmplitudeField field_from_json(const json& j);

json to_json(const ConvPotential& v);
ConvPotential potential_from_json(const json& j);

// throws std::invalid_argument naming the first key not in `keys`
void only_keys(const json& j, std::initializer_list<const char*> keys, const char* what);

// %.17g, the CSV number format
std::string num(double x);

// "zero" | "sample" | "inverse_square" | full potential object
ConvPotential potential_from_spec(const json& j);

}  // namespace nlsv
