#pragma once

#include <string>

#include <json.hpp>

#include "scbf/field.hpp"

namespace scbf {

/// Field as {"domain":{...},"modes":[{"k":[...],"re":[...],"im":[...]},...]}.
/// Only modes with a nonzero coefficient are listed; doubles survive the
/// round trip bit-exactly.
nlohmann::json field_to_json(const SpectralField& u);

SpectralField field_from_json(const nlohmann::json& j);

void save_field(const SpectralField& u, const std::string& path);
SpectralField load_field(const std::string& path);

/// Fixed shortest-round-trip decimal formatting used by every CSV writer,
/// so identical runs produce identical bytes.
std::string format_double(double v);

}  // namespace scbf
