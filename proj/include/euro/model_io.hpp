#pragma once

#include <string>

#include "euro/ensemble.hpp"

namespace euro {

// Versioned JSON persistence.  Single-member models are stored as a
// combined model with a unit weight vector.  Loading a file whose
// format_version is newer than this build understands fails loudly.
inline constexpr int kModelFormatVersion = 1;

void save_model(const CombinedModel& model, const std::string& path,
                const std::string& note = "");
CombinedModel load_model(const std::string& path);

}  // namespace euro
