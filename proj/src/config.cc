#include "xcoref/config.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "xcoref/errors.h"
#include "xcoref/text.h"

namespace xcoref {

namespace {

using nlohmann::json;

double number(const json &j, const std::string &key) {
  if (!j.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return j.get<double>();
}

void check_open_closed(double v, double lo, double hi, const std::string &key) {
  if (!(v > lo && v <= hi)) {
    throw ConfigError("config key '" + key + "' = " + std::to_string(v) + " is outside (" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

std::string resolve(const std::string &base_dir, const json &j, const std::string &key) {
  if (!j.is_string()) throw ConfigError("config key '" + key + "' must be a path string");
  std::filesystem::path p(j.get<std::string>());
  if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
  return p.lexically_normal().string();
}

}  // namespace

std::string_view aggregation_name(Aggregation mode) {
  return mode == Aggregation::kPooled ? "pooled" : "macro";
}

Aggregation parse_aggregation(std::string_view name) {
  if (name == "pooled") return Aggregation::kPooled;
  if (name == "macro") return Aggregation::kMacro;
  throw ConfigError("aggregation must be 'pooled' or 'macro', got '" + std::string(name) + "'");
}

void PipelineConfig::validate() const {
  check_open_closed(t_nn, 0.0, 1.0, "t_nn");
  check_open_closed(t_gr, 0.0, 1.0, "t_gr");
  if (!(t_cl > 0.0 && t_cl < 2.0)) {
    throw ConfigError("config key 't_cl' = " + std::to_string(t_cl) + " is outside (0, 2)");
  }
  if (!(k > 0.0)) throw ConfigError("config key 'k' must be positive");
  check_open_closed(core.s_core, 0.0, 1.0, "s_core");
  check_open_closed(core.d_min, 0.0, 1.0, "d_min");
  check_open_closed(core.s_assign, 0.0, 1.0, "s_assign");
  if (vector_limit && *vector_limit == 0) throw ConfigError("config key 'vector_limit' must be positive");
}

PipelineConfig parse_config(const std::string &json_text, const std::string &base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  PipelineConfig cfg;
  for (const auto &[key, value] : doc.items()) {
    if (key == "t_nn") {
      cfg.t_nn = number(value, key);
    } else if (key == "t_gr") {
      cfg.t_gr = number(value, key);
    } else if (key == "t_cl") {
      cfg.t_cl = number(value, key);
    } else if (key == "k") {
      cfg.k = number(value, key);
    } else if (key == "s_core") {
      cfg.core.s_core = number(value, key);
    } else if (key == "d_min") {
      cfg.core.d_min = number(value, key);
    } else if (key == "s_assign") {
      cfg.core.s_assign = number(value, key);
    } else if (key == "oov_seed") {
      if (!value.is_number_unsigned()) throw ConfigError("config key 'oov_seed' must be a non-negative integer");
      cfg.oov_seed = value.get<std::uint64_t>();
    } else if (key == "vector_limit") {
      if (value.is_null()) {
        cfg.vector_limit.reset();
      } else if (value.is_number_unsigned()) {
        cfg.vector_limit = value.get<std::size_t>();
      } else {
        throw ConfigError("config key 'vector_limit' must be a positive integer or null");
      }
    } else if (key == "matrices") {
      if (!value.is_object()) throw ConfigError("config key 'matrices' must map sieve ids to paths");
      for (const auto &[sieve, path] : value.items()) {
        if (sieve.size() != 1 || sieve[0] < '1' || sieve[0] > '5') {
          throw ConfigError("matrix key '" + sieve + "' is not a sieve id 1..5");
        }
        const int id = sieve[0] - '0';
        try {
          cfg.matrices[id - 1] = ComparisonMatrix::load(resolve(base_dir, path, "matrices." + sieve), id);
        } catch (const ConfigError &) {
          throw;
        } catch (const Error &e) {
          throw ConfigError(e.what());
        }
      }
    } else if (key == "category_map") {
      try {
        cfg.categories = CategoryMap::load(resolve(base_dir, value, key));
      } catch (const ConfigError &) {
        throw;
      } catch (const Error &e) {
        throw ConfigError(e.what());
      }
    } else if (key == "stopwords") {
      if (!value.is_array()) throw ConfigError("config key 'stopwords' must be an array of strings");
      for (const json &w : value) {
        if (!w.is_string()) throw ConfigError("config key 'stopwords' must be an array of strings");
        cfg.stopwords.insert(to_lower(w.get<std::string>()));
      }
    } else if (key == "aggregate") {
      if (!value.is_string()) throw ConfigError("config key 'aggregate' must be a string");
      cfg.aggregate = parse_aggregation(value.get<std::string>());
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(buf.str(), dir.empty() ? "." : dir.string());
}

std::string describe(const PipelineConfig &config) {
  std::ostringstream out;
  out << "t_nn=" << config.t_nn << " t_gr=" << config.t_gr << " t_cl=" << config.t_cl
      << " k=" << config.k << " s_core=" << config.core.s_core << " d_min=" << config.core.d_min
      << " s_assign=" << config.core.s_assign << " oov_seed=" << config.oov_seed
      << " aggregate=" << aggregation_name(config.aggregate);
  return out.str();
}

}  // namespace xcoref
