#include "topophase/config.hpp"

#include <cmath>
#include <initializer_list>

#include "json.hpp"
#include "topophase/errors.hpp"

namespace topophase {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing");
  return *it;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& path) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (item.key() == a) {
        known = true;
        break;
      }
    }
    if (!known) fail(path, "unknown key '" + item.key() + "'");
  }
}

double get_number(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) fail(path + "." + key, "must be a finite number");
  return d;
}

int get_int(const json& j, const char* key, const std::string& path) {
  double d = get_number(j, key, path);
  if (d != std::floor(d)) fail(path + "." + key, "expected an integer");
  return static_cast<int>(d);
}

bool get_bool(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_boolean()) fail(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

std::string get_string(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

//---------------------------------------------------------------------------
// section parsers
//---------------------------------------------------------------------------

EnvironmentReading parse_environment(const json& j, const std::string& path) {
  check_keys(j, {"humidity", "dust", "thermal_cycling", "irradiance",
                 "precipitation_days"}, path);
  EnvironmentReading e;
  e.humidity = get_number(j, "humidity", path);
  e.dust = get_number(j, "dust", path);
  e.thermal_cycling = get_number(j, "thermal_cycling", path);
  e.irradiance = get_number(j, "irradiance", path);
  e.precipitation_days = get_number(j, "precipitation_days", path);
  return e;
}

FactorCosts parse_factors(const json& j, const std::string& path) {
  check_keys(j, {"labor", "logistics", "land", "energy", "market_distance",
                 "regulatory"}, path);
  FactorCosts f;
  f.labor = get_number(j, "labor", path);
  f.logistics = get_number(j, "logistics", path);
  f.land = get_number(j, "land", path);
  f.energy = get_number(j, "energy", path);
  f.market_distance = get_number(j, "market_distance", path);
  f.regulatory = get_number(j, "regulatory", path);
  return f;
}

Region parse_region(const json& j, const std::string& path) {
  check_keys(j, {"id", "name", "position", "factors", "environment", "habitable",
                 "energy_access", "demand"}, path);
  Region r;
  r.id = get_string(j, "id", path);
  r.name = get_string(j, "name", path);
  const json& pos = require(j, "position", path);
  if (!pos.is_array() || pos.size() != 2 || !pos[0].is_number() || !pos[1].is_number()) {
    fail(path + ".position", "expected [x_km, y_km]");
  }
  r.x_km = pos[0].get<double>();
  r.y_km = pos[1].get<double>();
  r.factors = parse_factors(require(j, "factors", path), path + ".factors");
  r.environment = parse_environment(require(j, "environment", path), path + ".environment");
  r.habitable = get_bool(j, "habitable", path);
  r.energy_access = get_bool(j, "energy_access", path);
  r.demand = get_number(j, "demand", path);
  return r;
}

World parse_world(const json& j, const std::string& path) {
  check_keys(j, {"regions", "transport_rate"}, path);
  World w;
  const json& regions = require(j, "regions", path);
  if (!regions.is_array()) fail(path + ".regions", "expected an array");
  int index = 0;
  for (const json& rj : regions) {
    w.regions.push_back(parse_region(rj, path + ".regions[" + std::to_string(index) + "]"));
    ++index;
  }
  w.transport_rate = get_number(j, "transport_rate", path);
  return w;
}

WeightProfile parse_weights(const json& j, const std::string& path) {
  check_keys(j, {"baseline", "w_phi"}, path);
  const json& base = require(j, "baseline", path);
  check_keys(base, {"labor", "logistics", "land", "energy", "market_distance",
                    "regulatory"}, path + ".baseline");
  WeightProfile p;
  for (int i = 0; i < kFactorCount; ++i) {
    p.baseline[static_cast<size_t>(i)] =
        get_number(base, kFactorNames[static_cast<size_t>(i)].data(), path + ".baseline");
  }
  p.w_phi = get_number(j, "w_phi", path);
  return p;
}

CostConstants parse_cost_constants(const json& j, const std::string& path) {
  check_keys(j, {"c_switch_0", "switch_exponent", "labor_baseline",
                 "supervision_baseline", "stations"}, path);
  CostConstants k;
  k.c_switch_0 = get_number(j, "c_switch_0", path);
  k.switch_exponent = get_number(j, "switch_exponent", path);
  k.labor_baseline = get_number(j, "labor_baseline", path);
  k.supervision_baseline = get_number(j, "supervision_baseline", path);
  k.stations = get_int(j, "stations", path);
  return k;
}

McaModel parse_mca_model(const json& j, const std::string& path) {
  check_keys(j, {"responses"}, path);
  const json& responses = require(j, "responses", path);
  if (!responses.is_array() || responses.size() != kEnvParameterCount) {
    fail(path + ".responses", "expected exactly one response per environmental parameter");
  }
  McaModel m;
  std::array<bool, kEnvParameterCount> seen{};
  int index = 0;
  for (const json& rj : responses) {
    std::string rpath = path + ".responses[" + std::to_string(index) + "]";
    check_keys(rj, {"parameter", "optimum", "scale", "sensitivity", "sidedness"}, rpath);
    EnvResponseSpec spec;
    spec.parameter = env_parameter_from(get_string(rj, "parameter", rpath));
    spec.optimum = get_number(rj, "optimum", rpath);
    spec.scale = get_number(rj, "scale", rpath);
    spec.sensitivity = get_number(rj, "sensitivity", rpath);
    spec.sidedness = sidedness_from(get_string(rj, "sidedness", rpath));
    int slot = static_cast<int>(spec.parameter);
    if (seen[static_cast<size_t>(slot)]) {
      fail(rpath, "duplicate response for parameter " + std::string(to_string(spec.parameter)));
    }
    seen[static_cast<size_t>(slot)] = true;
    m.responses[static_cast<size_t>(slot)] = spec;
    ++index;
  }
  return m;
}

ProductSpec parse_product(const json& j, const std::string& path) {
  check_keys(j, {"price", "variable_cost", "facility_fixed", "equipment_fixed",
                 "n_star_rule"}, path);
  ProductSpec prod;
  prod.price = get_number(j, "price", path);
  prod.variable_cost = get_number(j, "variable_cost", path);
  prod.facility_fixed = get_number(j, "facility_fixed", path);
  prod.equipment_fixed = get_number(j, "equipment_fixed", path);
  const json& rule = require(j, "n_star_rule", path);
  if (rule.is_string()) {
    if (rule.get<std::string>() != "min_metro_demand") {
      fail(path + ".n_star_rule", "expected a volume or \"min_metro_demand\"");
    }
    prod.n_star.reset();
  } else if (rule.is_number()) {
    prod.n_star = rule.get<double>();
  } else {
    fail(path + ".n_star_rule", "expected a volume or \"min_metro_demand\"");
  }
  return prod;
}

CapabilityVector parse_capability(const json& j, const std::string& path) {
  check_keys(j, {"delta", "gamma", "rho", "tau"}, path);
  CapabilityVector c;
  c.delta = get_number(j, "delta", path);
  c.gamma = get_number(j, "gamma", path);
  c.rho = get_number(j, "rho", path);
  c.tau = get_number(j, "tau", path);
  return c;
}

ThresholdTriple parse_triple(const json& j, const std::string& path) {
  check_keys(j, {"delta_min", "gamma_min", "rho_min"}, path);
  ThresholdTriple t;
  t.delta_min = get_number(j, "delta_min", path);
  t.gamma_min = get_number(j, "gamma_min", path);
  t.rho_min = get_number(j, "rho_min", path);
  return t;
}

SurfaceThresholds parse_thresholds(const json& j, const std::string& path) {
  check_keys(j, {"sigma_w", "sigma_n", "sigma_h"}, path);
  SurfaceThresholds t;
  t.sigma_w = parse_triple(require(j, "sigma_w", path), path + ".sigma_w");
  t.sigma_n = parse_triple(require(j, "sigma_n", path), path + ".sigma_n");
  const json& sh = require(j, "sigma_h", path);
  check_keys(sh, {"theta_h", "theta_g", "tau_min"}, path + ".sigma_h");
  t.sigma_h.theta_h = get_number(sh, "theta_h", path + ".sigma_h");
  t.sigma_h.theta_g = get_number(sh, "theta_g", path + ".sigma_h");
  t.sigma_h.tau_min = get_number(sh, "tau_min", path + ".sigma_h");
  return t;
}

IndustryPreset parse_preset(const json& j, const std::string& path) {
  check_keys(j, {"name", "current", "thresholds", "metadata"}, path);
  IndustryPreset preset;
  preset.name = get_string(j, "name", path);
  preset.current = parse_capability(require(j, "current", path), path + ".current");
  preset.thresholds =
      parse_thresholds(require(j, "thresholds", path), path + ".thresholds");
  preset.metadata = get_string(j, "metadata", path);
  return preset;
}

template <typename Fn>
void in_section(const char* section, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string(section) + ": " + e.what());
  }
}

Config config_from_json(const json& doc) {
  check_keys(doc, {"world", "weights", "cost_constants", "mca_model", "product",
                   "presets"}, "document");
  Config cfg;
  cfg.world = parse_world(require(doc, "world", "document"), "world");
  cfg.weights = parse_weights(require(doc, "weights", "document"), "weights");
  cfg.cost_constants =
      parse_cost_constants(require(doc, "cost_constants", "document"), "cost_constants");
  cfg.mca_model = parse_mca_model(require(doc, "mca_model", "document"), "mca_model");
  cfg.product = parse_product(require(doc, "product", "document"), "product");
  const json& presets = require(doc, "presets", "document");
  if (!presets.is_array()) fail("presets", "expected an array");
  int index = 0;
  for (const json& pj : presets) {
    cfg.presets.push_back(parse_preset(pj, "presets[" + std::to_string(index) + "]"));
    ++index;
  }

  // Semantic validation on top of the shape checks above.
  std::vector<ValidationIssue> issues = validate_world(cfg.world);
  if (!issues.empty()) {
    std::string msg = "world validation failed:";
    for (const ValidationIssue& issue : issues) {
      msg += " [region '" + issue.region_id + "' field '" + issue.field + "': " +
             issue.reason + "]";
    }
    throw ConfigError(msg);
  }
  in_section("weights", [&] { validate(cfg.weights); });
  in_section("cost_constants", [&] { validate(cfg.cost_constants); });
  in_section("mca_model", [&] { validate(cfg.mca_model); });
  in_section("product", [&] { validate(cfg.product); });
  for (const IndustryPreset& preset : cfg.presets) {
    in_section("presets", [&] {
      validate(preset.current);
      validate(preset.thresholds);
    });
  }
  return cfg;
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("document parse error: ") + e.what());
  }
}

//---------------------------------------------------------------------------
// overrides
//---------------------------------------------------------------------------

std::vector<std::string> split_path(const std::string& key) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : key) {
    if (c == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

void apply_override(json& doc, const std::string& entry) {
  auto eq = entry.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must be KEY=VALUE, got '" + entry + "'");
  }
  std::string key = entry.substr(0, eq);
  std::string raw = entry.substr(eq + 1);

  json* cursor = &doc;
  for (const std::string& part : split_path(key)) {
    if (cursor->is_object()) {
      auto it = cursor->find(part);
      if (it == cursor->end()) {
        throw ConfigError("override key '" + key + "' not found at segment '" + part + "'");
      }
      cursor = &*it;
    } else if (cursor->is_array()) {
      size_t index = 0;
      try {
        index = std::stoul(part);
      } catch (const std::exception&) {
        throw ConfigError("override key '" + key + "': '" + part + "' is not an array index");
      }
      if (index >= cursor->size()) {
        throw ConfigError("override key '" + key + "': index " + part + " out of range");
      }
      cursor = &(*cursor)[index];
    } else {
      throw ConfigError("override key '" + key + "' descends into a scalar at '" + part + "'");
    }
  }

  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;  // bare strings need no quotes

  bool compatible = (cursor->is_number() && value.is_number()) ||
                    (cursor->is_boolean() && value.is_boolean()) ||
                    (cursor->is_string() && value.is_string()) ||
                    (cursor->is_string() && value.is_number()) ||
                    (cursor->is_number() && value.is_string());
  if (!compatible) {
    throw ConfigError("override '" + entry + "' does not match the existing value type");
  }
  *cursor = value;
}

//---------------------------------------------------------------------------
// serialization
//---------------------------------------------------------------------------

json to_json(const World& w) {
  json regions = json::array();
  for (const Region& r : w.regions) {
    regions.push_back({
        {"id", r.id},
        {"name", r.name},
        {"position", {r.x_km, r.y_km}},
        {"factors",
         {{"labor", r.factors.labor},
          {"logistics", r.factors.logistics},
          {"land", r.factors.land},
          {"energy", r.factors.energy},
          {"market_distance", r.factors.market_distance},
          {"regulatory", r.factors.regulatory}}},
        {"environment",
         {{"humidity", r.environment.humidity},
          {"dust", r.environment.dust},
          {"thermal_cycling", r.environment.thermal_cycling},
          {"irradiance", r.environment.irradiance},
          {"precipitation_days", r.environment.precipitation_days}}},
        {"habitable", r.habitable},
        {"energy_access", r.energy_access},
        {"demand", r.demand},
    });
  }
  return {{"regions", regions}, {"transport_rate", w.transport_rate}};
}

json to_json(const SurfaceThresholds& t) {
  return {
      {"sigma_w",
       {{"delta_min", t.sigma_w.delta_min},
        {"gamma_min", t.sigma_w.gamma_min},
        {"rho_min", t.sigma_w.rho_min}}},
      {"sigma_n",
       {{"delta_min", t.sigma_n.delta_min},
        {"gamma_min", t.sigma_n.gamma_min},
        {"rho_min", t.sigma_n.rho_min}}},
      {"sigma_h",
       {{"theta_h", t.sigma_h.theta_h},
        {"theta_g", t.sigma_h.theta_g},
        {"tau_min", t.sigma_h.tau_min}}},
  };
}

json config_to_json(const Config& cfg) {
  json weights = {{"baseline", json::object()}, {"w_phi", cfg.weights.w_phi}};
  for (int i = 0; i < kFactorCount; ++i) {
    weights["baseline"][kFactorNames[static_cast<size_t>(i)].data()] =
        cfg.weights.baseline[static_cast<size_t>(i)];
  }

  json responses = json::array();
  for (const EnvResponseSpec& spec : cfg.mca_model.responses) {
    responses.push_back({
        {"parameter", std::string(to_string(spec.parameter))},
        {"optimum", spec.optimum},
        {"scale", spec.scale},
        {"sensitivity", spec.sensitivity},
        {"sidedness", std::string(to_string(spec.sidedness))},
    });
  }

  json product = {
      {"price", cfg.product.price},
      {"variable_cost", cfg.product.variable_cost},
      {"facility_fixed", cfg.product.facility_fixed},
      {"equipment_fixed", cfg.product.equipment_fixed},
  };
  if (cfg.product.n_star) {
    product["n_star_rule"] = *cfg.product.n_star;
  } else {
    product["n_star_rule"] = "min_metro_demand";
  }

  json presets = json::array();
  for (const IndustryPreset& preset : cfg.presets) {
    presets.push_back({
        {"name", preset.name},
        {"current",
         {{"delta", preset.current.delta},
          {"gamma", preset.current.gamma},
          {"rho", preset.current.rho},
          {"tau", preset.current.tau}}},
        {"thresholds", to_json(preset.thresholds)},
        {"metadata", preset.metadata},
    });
  }

  return {
      {"world", to_json(cfg.world)},
      {"weights", weights},
      {"cost_constants",
       {{"c_switch_0", cfg.cost_constants.c_switch_0},
        {"switch_exponent", cfg.cost_constants.switch_exponent},
        {"labor_baseline", cfg.cost_constants.labor_baseline},
        {"supervision_baseline", cfg.cost_constants.supervision_baseline},
        {"stations", cfg.cost_constants.stations}}},
      {"mca_model", {{"responses", responses}}},
      {"product", product},
      {"presets", presets},
  };
}

}  // namespace

Config load_config(const std::string& text) {
  return config_from_json(parse_document(text));
}

Config load_config(const std::string& text, std::span<const std::string> overrides) {
  json doc = parse_document(text);
  for (const std::string& entry : overrides) {
    apply_override(doc, entry);
  }
  return config_from_json(doc);
}

World load_world(const std::string& text) {
  return load_config(text).world;
}

std::string serialize_config(const Config& cfg) {
  return config_to_json(cfg).dump(2) + "\n";
}

const IndustryPreset* find_preset(const Config& cfg, std::string_view name) {
  for (const IndustryPreset& preset : cfg.presets) {
    if (preset.name == name) return &preset;
  }
  return nullptr;
}

}  // namespace topophase
