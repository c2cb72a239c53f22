#pragma once

#include <span>
#include <string>
#include <vector>

#include "topophase/capability.hpp"
#include "topophase/mca.hpp"
#include "topophase/siteselect.hpp"
#include "topophase/topology.hpp"
#include "topophase/world.hpp"

namespace topophase {

// The full configuration document: world, weights, cost_constants,
// mca_model, product, presets.
struct Config {
  World world;
  WeightProfile weights;
  CostConstants cost_constants;
  McaModel mca_model;
  ProductSpec product;
  std::vector<IndustryPreset> presets;
};

// Parses and validates a document. Error messages name the offending
// section/region/field. Unknown keys and non-finite numbers are rejected.
Config load_config(const std::string& text);

// `--set key=value` style dotted-path overrides applied before validation.
Config load_config(const std::string& text, std::span<const std::string> overrides);

// Only the world section (still parses the whole document's syntax).
World load_world(const std::string& text);

// Canonical serialization: keys sorted, two-space indent, trailing newline.
// load -> serialize -> load round-trips to an identical configuration.
std::string serialize_config(const Config& cfg);

const IndustryPreset* find_preset(const Config& cfg, std::string_view name);

}  // namespace topophase
