#include "loadshift/config.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace loadshift {

namespace {

std::string resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return p;
  std::filesystem::path path(p);
  if (path.is_absolute()) return path.lexically_normal().string();
  return (base / path).lexically_normal().string();
}

nlohmann::ordered_json config_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["family"] = to_string(c.family);
  j["paths"] = {{"consumption", c.paths.consumption},
                {"price", c.paths.price},
                {"carbon", c.paths.carbon},
                {"mapping", c.paths.mapping},
                {"catalog", c.paths.catalog},
                {"hourly", c.paths.hourly},
                {"model_store", c.paths.model_store},
                {"out_dir", c.paths.out_dir}};
  j["schedule"] = {{"headstart_days", c.schedule.headstart_days},
                   {"retune_interval_days", c.schedule.retune_interval_days},
                   {"training_window_days", c.schedule.training_window_days}};
  j["recommend"] = {{"aval_off", c.recommend.aval_off},
                    {"emissions_ratio", c.recommend.emissions_ratio},
                    {"availability_threshold", c.recommend.availability_threshold},
                    {"activity_threshold", c.recommend.activity_threshold}};
  j["eval"] = {{"use_th", c.eval_th.use_th}, {"act_th", c.eval_th.act_th}};
  if (c.signal_year)
    j["signal_year"] = *c.signal_year;
  else
    j["signal_year"] = nullptr;
  if (c.price_url) j["price_url"] = *c.price_url;
  if (c.carbon_url) j["carbon_url"] = *c.carbon_url;
  j["parallel"] = c.parallel;
  return j;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UserError("invalid config JSON in " + path + ": " + e.what());
  }
  RunConfig c;
  try {
    if (!j.contains("seed")) throw UserError("config must set a seed: " + path);
    c.seed = j.at("seed").get<std::uint64_t>();
    c.family = family_from_string(j.value("family", "mlp"));
    const auto base = std::filesystem::path(path).parent_path();
    const auto& p = j.at("paths");
    c.paths.consumption = resolve(base, p.value("consumption", ""));
    c.paths.price = resolve(base, p.value("price", ""));
    c.paths.carbon = resolve(base, p.value("carbon", ""));
    c.paths.mapping = resolve(base, p.value("mapping", ""));
    c.paths.catalog = resolve(base, p.value("catalog", ""));
    c.paths.hourly = resolve(base, p.value("hourly", "out/hourly.csv"));
    c.paths.model_store = resolve(base, p.value("model_store", "out/models"));
    c.paths.out_dir = resolve(base, p.value("out_dir", "out"));
    if (j.contains("schedule")) {
      const auto& s = j["schedule"];
      c.schedule.headstart_days = s.value("headstart_days", 28);
      c.schedule.retune_interval_days = s.value("retune_interval_days", 120);
      c.schedule.training_window_days = s.value("training_window_days", 180);
    }
    if (j.contains("recommend")) {
      const auto& r = j["recommend"];
      c.recommend.aval_off = r.value("aval_off", true);
      c.recommend.emissions_ratio = r.value("emissions_ratio", 1.0);
      c.recommend.availability_threshold = r.value("availability_threshold", 0.15);
      c.recommend.activity_threshold = r.value("activity_threshold", 0.15);
    }
    if (j.contains("eval")) {
      c.eval_th.use_th = j["eval"].value("use_th", 0.5);
      c.eval_th.act_th = j["eval"].value("act_th", 0.5);
    }
    if (j.contains("signal_year") && !j["signal_year"].is_null())
      c.signal_year = j["signal_year"].get<int>();
    if (j.contains("price_url")) c.price_url = j["price_url"].get<std::string>();
    if (j.contains("carbon_url")) c.carbon_url = j["carbon_url"].get<std::string>();
    c.parallel = j.value("parallel", false);
  } catch (const nlohmann::json::exception& e) {
    throw UserError("invalid config JSON in " + path + ": " + e.what());
  }
  if (c.recommend.emissions_ratio < 0 || c.recommend.emissions_ratio > 1)
    throw UserError("emissions_ratio must lie in [0, 1]");
  if (c.schedule.headstart_days < 1 || c.schedule.retune_interval_days < 1 ||
      c.schedule.training_window_days < 1)
    throw UserError("schedule values must be positive");
  return c;
}

void save_run_config(const RunConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UserError("cannot write config file: " + path);
  out << config_json(config).dump(1) << "\n";
  if (!out) throw UserError("failed writing config file: " + path);
}

std::string run_config_json(const RunConfig& config) {
  return config_json(config).dump(1) + "\n";
}

std::string run_manifest(const std::string& command, const RunConfig& config,
                         const std::vector<std::string>& input_paths) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["inputs"] = nlohmann::ordered_json::object();
  for (const auto& p : input_paths) j["inputs"][p] = hex64(hash_file(p));
  j["config"] = config_json(config);
  return j.dump(1) + "\n";
}

}  // namespace loadshift
