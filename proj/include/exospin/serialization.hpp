#pragma once

// JSON forms of presets and budgets. Keys are emitted in sorted order.

#include <string>
#include <string_view>

#include "exospin/optimizer.hpp"
#include "exospin/systematics.hpp"

namespace exospin {

std::string to_json(const GeometryPreset& p);
GeometryPreset preset_from_json(std::string_view text);

std::string to_json(const SystematicsBudget& b);
SystematicsBudget budget_from_json(std::string_view text);

}  // namespace exospin
