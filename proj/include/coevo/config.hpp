#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coevo/coevolution.hpp"
#include "coevo/games.hpp"

// Experiment configuration: a strict JSON schema with every value
// defaulted to the reference study setup (subpopulations of 50, 100
// generations, distribution indices 20, local search probability 0.2,
// 20 runs per cell). Unknown keys are rejected with their field path.

namespace coevo {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Algorithm { Canonical, Memetic };

inline std::string_view algorithm_name(Algorithm a) {
  return a == Algorithm::Canonical ? "canonical" : "memetic";
}

inline Algorithm parse_algorithm(std::string_view name) {
  if (name == "canonical") return Algorithm::Canonical;
  if (name == "memetic") return Algorithm::Memetic;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) +
                              "' (valid: canonical, memetic)");
}

/// The nine variants with embedded synthetic functions (every variant
/// except Base), in benchmark order.
inline std::vector<Variant> extended_variants() {
  std::vector<Variant> v;
  for (Variant variant : all_variants())
    if (variant != Variant::Base) v.push_back(variant);
  return v;
}

struct ExperimentConfig {
  std::vector<Variant> variants = extended_variants();
  std::vector<Algorithm> algorithms{Algorithm::Canonical, Algorithm::Memetic};
  int runs = 20;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "reports";
  int workers = 0;  // 0 selects the hardware concurrency
  std::vector<int> scatter_generations{1, 10, 15, 20, 25, 50};
  CoevoConfig coevo;

  void validate() const {
    if (runs < 1) throw ConfigError("config error at runs: must be >= 1");
    if (variants.empty()) throw ConfigError("config error at variants: must not be empty");
    if (algorithms.empty()) throw ConfigError("config error at algorithms: must not be empty");
    for (std::size_t i = 0; i < variants.size(); ++i)
      for (std::size_t j = i + 1; j < variants.size(); ++j)
        if (variants[i] == variants[j])
          throw ConfigError(std::string("config error at variants: duplicate entry '") +
                            std::string(variant_name(variants[i])) + "'");
    for (std::size_t i = 0; i < algorithms.size(); ++i)
      for (std::size_t j = i + 1; j < algorithms.size(); ++j)
        if (algorithms[i] == algorithms[j])
          throw ConfigError(std::string("config error at algorithms: duplicate entry '") +
                            std::string(algorithm_name(algorithms[i])) + "'");
    if (workers < 0) throw ConfigError("config error at workers: must be >= 0");
    for (int g : scatter_generations)
      if (g < 1) throw ConfigError("config error at scatter_generations: entries must be >= 1");
    try {
      coevo.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config error: ") + e.what());
    }
  }
};

namespace detail {

[[noreturn]] inline void config_fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at " + path + ": " + what);
}

inline void check_keys(const nlohmann::json& obj, const std::string& path,
                       std::initializer_list<const char*> known) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : known)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok) {
      std::string names;
      for (const char* k : known) {
        if (!names.empty()) names += ", ";
        names += k;
      }
      config_fail(path.empty() ? item.key() : path + "." + item.key(),
                  "unknown key (known keys: " + names + ")");
    }
  }
}

inline std::string join_path(const std::string& path, const char* key) {
  return path.empty() ? key : path + "." + key;
}

inline int get_int(const nlohmann::json& obj, const std::string& path, const char* key,
                   int fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) config_fail(join_path(path, key), "expected an integer");
  return v.get<int>();
}

inline std::uint64_t get_uint64(const nlohmann::json& obj, const std::string& path,
                                const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0))
    config_fail(join_path(path, key), "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

inline double get_double(const nlohmann::json& obj, const std::string& path, const char* key,
                         double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) config_fail(join_path(path, key), "expected a number");
  return v.get<double>();
}

inline std::string get_string(const nlohmann::json& obj, const std::string& path,
                              const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) config_fail(join_path(path, key), "expected a string");
  return v.get<std::string>();
}

}  // namespace detail

/// Builds a validated configuration from a parsed JSON object, filling
/// every absent field with its default.
inline ExperimentConfig parse_config(const nlohmann::json& j) {
  using detail::config_fail;
  if (!j.is_object()) throw ConfigError("config error: top level must be a JSON object");
  detail::check_keys(j, "",
                     {"variants", "algorithms", "runs", "seed", "out_dir", "workers",
                      "reference_resolution", "scatter_generations", "population",
                      "generations", "p_ls", "variation", "surrogate", "local_search"});

  ExperimentConfig config;
  if (j.contains("variants")) {
    const auto& v = j.at("variants");
    if (!v.is_array()) config_fail("variants", "expected an array of variant names");
    config.variants.clear();
    for (const auto& item : v) {
      if (!item.is_string()) config_fail("variants", "expected an array of variant names");
      try {
        config.variants.push_back(parse_variant(item.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        config_fail("variants", e.what());
      }
    }
  }
  if (j.contains("algorithms")) {
    const auto& v = j.at("algorithms");
    if (!v.is_array()) config_fail("algorithms", "expected an array of algorithm names");
    config.algorithms.clear();
    for (const auto& item : v) {
      if (!item.is_string()) config_fail("algorithms", "expected an array of algorithm names");
      try {
        config.algorithms.push_back(parse_algorithm(item.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        config_fail("algorithms", e.what());
      }
    }
  }
  config.runs = detail::get_int(j, "", "runs", config.runs);
  config.seed = detail::get_uint64(j, "", "seed", config.seed);
  config.out_dir = detail::get_string(j, "", "out_dir", config.out_dir.string());
  config.workers = detail::get_int(j, "", "workers", config.workers);
  config.coevo.reference_resolution =
      detail::get_int(j, "", "reference_resolution", config.coevo.reference_resolution);
  if (j.contains("scatter_generations")) {
    const auto& v = j.at("scatter_generations");
    if (!v.is_array()) config_fail("scatter_generations", "expected an array of integers");
    config.scatter_generations.clear();
    for (const auto& item : v) {
      if (!item.is_number_integer())
        config_fail("scatter_generations", "expected an array of integers");
      config.scatter_generations.push_back(item.get<int>());
    }
  }
  config.coevo.population = detail::get_int(j, "", "population", config.coevo.population);
  config.coevo.generations = detail::get_int(j, "", "generations", config.coevo.generations);
  config.coevo.p_ls = detail::get_double(j, "", "p_ls", config.coevo.p_ls);

  if (j.contains("variation")) {
    const auto& v = j.at("variation");
    if (!v.is_object()) config_fail("variation", "expected an object");
    detail::check_keys(v, "variation",
                       {"eta_crossover", "eta_mutation", "p_crossover",
                        "p_mutation_per_variable"});
    VariationParams& params = config.coevo.variation;
    params.eta_crossover = detail::get_double(v, "variation", "eta_crossover",
                                              params.eta_crossover);
    params.eta_mutation = detail::get_double(v, "variation", "eta_mutation",
                                             params.eta_mutation);
    params.p_crossover = detail::get_double(v, "variation", "p_crossover", params.p_crossover);
    if (v.contains("p_mutation_per_variable"))
      params.p_mutation_per_variable =
          detail::get_double(v, "variation", "p_mutation_per_variable", 0.0);
  }
  if (j.contains("surrogate")) {
    const auto& v = j.at("surrogate");
    if (!v.is_object()) config_fail("surrogate", "expected an object");
    detail::check_keys(v, "surrogate",
                       {"hidden_units", "epochs", "learning_rate", "init_weight_range"});
    SurrogateTrainingParams& params = config.coevo.surrogate;
    params.hidden_units = detail::get_int(v, "surrogate", "hidden_units", params.hidden_units);
    params.epochs = detail::get_int(v, "surrogate", "epochs", params.epochs);
    params.learning_rate = detail::get_double(v, "surrogate", "learning_rate",
                                              params.learning_rate);
    params.init_weight_range = detail::get_double(v, "surrogate", "init_weight_range",
                                                  params.init_weight_range);
  }
  if (j.contains("local_search")) {
    const auto& v = j.at("local_search");
    if (!v.is_object()) config_fail("local_search", "expected an object");
    detail::check_keys(v, "local_search",
                       {"initial_step", "max_iterations", "tolerance", "point_tolerance",
                        "trust_radius", "reflection", "expansion", "contraction", "shrink"});
    NelderMeadParams& params = config.coevo.local_search;
    params.initial_step = detail::get_double(v, "local_search", "initial_step",
                                             params.initial_step);
    params.max_iterations = detail::get_int(v, "local_search", "max_iterations",
                                            params.max_iterations);
    params.tolerance = detail::get_double(v, "local_search", "tolerance", params.tolerance);
    params.point_tolerance = detail::get_double(v, "local_search", "point_tolerance",
                                                params.point_tolerance);
    params.trust_radius = detail::get_double(v, "local_search", "trust_radius",
                                             params.trust_radius);
    params.reflection = detail::get_double(v, "local_search", "reflection", params.reflection);
    params.expansion = detail::get_double(v, "local_search", "expansion", params.expansion);
    params.contraction = detail::get_double(v, "local_search", "contraction",
                                            params.contraction);
    params.shrink = detail::get_double(v, "local_search", "shrink", params.shrink);
  }

  config.validate();
  return config;
}

/// Reads and validates a JSON configuration file.
inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace coevo
