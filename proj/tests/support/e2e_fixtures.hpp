#pragma once

#include <filesystem>

#include "core/synthetic_video.hpp"

namespace vtb::testing {

// Writes the end-to-end fixture tree (config, taxonomy, search index,
// synthetic media and mock service tables) into `dir`.
void write_e2e_fixtures(const std::filesystem::path& dir);

// Ten noisy slide decks used to compare keyframe extractors.
std::vector<SyntheticVideo> noisy_slide_videos();

}  // namespace vtb::testing
