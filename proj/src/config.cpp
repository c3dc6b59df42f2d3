#include "sheetqv/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sheetqv {

namespace {

using nlohmann::json;

std::string type_error(const std::string& key, const char* expected) {
  return "config key '" + key + "' must be " + expected;
}

std::uint64_t as_u64(const std::string& key, const json& v) {
  if (!v.is_number_unsigned()) {
    throw ConfigError(type_error(key, "a nonnegative integer"));
  }
  return v.get<std::uint64_t>();
}

double as_real(const std::string& key, const json& v) {
  if (!v.is_number()) throw ConfigError(type_error(key, "a number"));
  return v.get<double>();
}

std::string as_string(const std::string& key, const json& v) {
  if (!v.is_string()) throw ConfigError(type_error(key, "a string"));
  return v.get<std::string>();
}

bool as_bool(const std::string& key, const json& v) {
  if (!v.is_boolean()) throw ConfigError(type_error(key, "true or false"));
  return v.get<bool>();
}

template <typename T, typename Convert>
std::vector<T> as_list(const std::string& key, const json& v, Convert convert) {
  if (!v.is_array()) throw ConfigError(type_error(key, "a list"));
  std::vector<T> out;
  for (const json& item : v) out.push_back(static_cast<T>(convert(key, item)));
  return out;
}

}  // namespace

Config parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  Config c;
  double point_s = 1.0;
  double point_t = 1.0;
  for (const auto& [key, v] : doc.items()) {
    if (key == "experiment") {
      try {
        c.spec.experiment = experiment_from_string(as_string(key, v));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config key 'experiment': ") + e.what());
      }
      c.has_experiment = true;
    } else if (key == "n_list") {
      c.spec.n_list = as_list<std::size_t>(key, v, as_u64);
      c.has_n_list = true;
    } else if (key == "refinement_r") {
      c.spec.refinement_r = as_u64(key, v);
    } else if (key == "N") {
      c.spec.replicates = as_u64(key, v);
      c.has_replicates = true;
    } else if (key == "sigma_name") {
      c.spec.sigma_name = as_string(key, v);
    } else if (key == "f_name") {
      c.spec.f_name = as_string(key, v);
    } else if (key == "drift_name") {
      c.spec.drift_name = as_string(key, v);
    } else if (key == "point_s") {
      point_s = as_real(key, v);
    } else if (key == "point_t") {
      point_t = as_real(key, v);
    } else if (key == "alpha") {
      c.spec.alpha = as_real(key, v);
    } else if (key == "master_seed") {
      c.spec.master_seed = as_u64(key, v);
    } else if (key == "gates") {
      c.spec.gates = as_bool(key, v);
    } else if (key == "deltas") {
      c.spec.deltas = as_list<double>(key, v, as_real);
    } else if (key == "eps_list") {
      c.spec.eps_list = as_list<double>(key, v, as_real);
    } else if (key == "workers") {
      c.workers = static_cast<unsigned>(as_u64(key, v));
    } else if (key == "summary_json") {
      c.summary_json = as_string(key, v);
    } else if (key == "reports_csv") {
      c.reports_csv = as_string(key, v);
    } else if (key == "grid_m") {
      c.grid_m = as_u64(key, v);
    } else if (key == "stream_index") {
      c.stream_index = as_u64(key, v);
    } else if (key == "sheet_role") {
      try {
        c.sheet_role = sheet_role_from_string(as_string(key, v));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config key 'sheet_role': ") + e.what());
      }
    } else if (key == "dump_path") {
      c.dump_path = as_string(key, v);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  try {
    c.spec.point = ParamPoint(point_s, point_t);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config keys 'point_s'/'point_t': ") +
                      e.what());
  }
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void Config::require_campaign(const FunctionRegistry& registry) const {
  if (!has_experiment) throw ConfigError("missing required key 'experiment'");
  if (!has_n_list) throw ConfigError("missing required key 'n_list'");
  if (!has_replicates) throw ConfigError("missing required key 'N'");
  if (uses_volatility(spec.experiment) && spec.sigma_name.empty()) {
    throw ConfigError("missing required key 'sigma_name'");
  }
  if (!uses_volatility(spec.experiment) && spec.f_name.empty()) {
    throw ConfigError("missing required key 'f_name'");
  }
  try {
    spec.validate(registry);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid campaign: ") + e.what());
  }
}

void Config::require_dump() const {
  if (!grid_m) throw ConfigError("missing required key 'grid_m'");
  if (*grid_m == 0) throw ConfigError("config key 'grid_m' must be >= 1");
  if (stream_index >> 63) {
    throw ConfigError("config key 'stream_index' must be below 2^63");
  }
}

SeedSpec Config::dump_seed() const {
  return derive_seed(spec.master_seed, stream_index, sheet_role);
}

}  // namespace sheetqv
