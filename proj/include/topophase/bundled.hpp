#pragma once

#include <string_view>
#include <vector>

namespace topophase {

// Configuration documents from presets/, embedded at build time.
std::string_view bundled_config(std::string_view name);
std::vector<std::string_view> bundled_config_names();

}  // namespace topophase
