#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "loadshift/activity.hpp"
#include "loadshift/config.hpp"
#include "loadshift/csv.hpp"
#include "loadshift/eval.hpp"
#include "loadshift/ingest.hpp"
#include "loadshift/models.hpp"
#include "loadshift/predictors.hpp"
#include "loadshift/recommend.hpp"
#include "loadshift/signals.hpp"
#include "loadshift/synth.hpp"

namespace fs = std::filesystem;
using namespace loadshift;

namespace {

void write_text(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw UserError("cannot write file: " + path);
  out << text;
  if (!out) throw UserError("failed writing file: " + path);
}

void write_manifest(const RunConfig& cfg, const std::string& command,
                    std::vector<std::string> inputs, const std::string& slug) {
  write_text((fs::path(cfg.paths.out_dir) / ("manifest_" + slug + ".json")).string(),
             run_manifest(command, cfg, std::move(inputs)));
}

HourlyDataset require_hourly(const RunConfig& cfg) {
  if (!fs::exists(cfg.paths.hourly))
    throw UserError("hourly dataset not found: " + cfg.paths.hourly +
                    " (run `loadshift ingest` first)");
  return load_hourly(cfg.paths.hourly);
}

int find_day(const HourlyDataset& ds, const CivilDate& date) {
  const int days = dataset_days(ds);
  for (int d = 0; d < days; ++d)
    if (civil_from_hour(ds.hour_at(day_begin_index(ds, d))).date == date) return d;
  throw UserError("date " + format_date(date) + " is not a full day of the hourly dataset");
}

std::unique_ptr<SignalSource> open_signal(SignalKind kind, const std::string& path,
                                          const std::optional<std::string>& url) {
  if (url) return make_remote_source(kind, *url);
  if (!path.empty()) {
    if (!fs::exists(path))
      throw UserError(std::string(to_string(kind)) + " fixture not found: " + path);
    return std::make_unique<FixtureSource>(kind, path);
  }
  throw UserError(std::string("no ") + to_string(kind) + " signal source configured");
}

/// Day-ahead values for a consumption day, optionally read from the mapped
/// calendar year but always stamped with the consumption horizon.
DayAheadSignal signal_for_day(const SignalSource& src, SignalKind kind, HourStamp horizon,
                              const std::optional<int>& signal_year) {
  HourStamp lookup = horizon;
  if (signal_year)
    lookup = hour_from_civil(align_date(civil_from_hour(horizon).date, *signal_year), 0);
  DayAheadSignal sig = fetch_signal(src, kind, lookup);
  sig.horizon_start = horizon;
  return sig;
}

std::string model_path(const RunConfig& cfg, const std::string& target) {
  const std::string file = target == "availability" ? "availability.json" : "usage_" + target + ".json";
  return (fs::path(cfg.paths.model_store) / file).string();
}

TrainedModel require_model(const RunConfig& cfg, const std::string& target,
                           HourStamp day_start, const std::string& date_text) {
  const std::string path = model_path(cfg, target);
  if (!fs::exists(path))
    throw UserError("model not found: " + path + " (run `loadshift train --date " + date_text +
                    "` first)");
  TrainedModel model = load_model(path);
  if (model.trained_through != day_start)
    throw UserError("model " + path + " was trained for a different day (run `loadshift train "
                    "--date " + date_text + "`)");
  return model;
}

struct Overrides {
  CLI::App* sub = nullptr;
  bool has_recommend = false;
  std::uint64_t seed = 0;
  std::string family;
  bool parallel = false;
  double ratio = 1.0;
  bool aval_off = true;
  double avail_th = 0.15;
  double act_th = 0.15;

  void add_common(CLI::App* s) {
    sub = s;
    s->add_option("--seed", seed, "override the config seed");
    s->add_option("--family", family, "model family: logreg|forest|mlp")
        ->check(CLI::IsMember({"logreg", "forest", "mlp"}));
    s->add_flag("--parallel", parallel, "run day loops on all cores");
  }
  void add_recommend(CLI::App* s) {
    has_recommend = true;
    s->add_option("--ratio", ratio, "emissions weight r in [0,1]")
        ->check(CLI::Range(0.0, 1.0));
    s->add_option("--aval-off", aval_off,
                  "let flexible activities ignore predicted availability");
    s->add_option("--avail-th", avail_th, "availability probability threshold");
    s->add_option("--act-th", act_th, "activity probability threshold");
  }
  void apply(RunConfig& cfg) const {
    if (sub->count("--seed")) cfg.seed = seed;
    if (sub->count("--family")) cfg.family = family_from_string(family);
    if (sub->count("--parallel")) cfg.parallel = true;
    if (!has_recommend) return;
    if (sub->count("--ratio")) cfg.recommend.emissions_ratio = ratio;
    if (sub->count("--aval-off")) cfg.recommend.aval_off = aval_off;
    if (sub->count("--avail-th")) cfg.recommend.availability_threshold = avail_th;
    if (sub->count("--act-th")) cfg.recommend.activity_threshold = act_th;
  }
};

nlohmann::ordered_json auc_json(const AucSummary& s) {
  return {{"mean", s.mean}, {"skipped_days", s.skipped_days}, {"per_day", s.per_day}};
}

nlohmann::ordered_json savings_json(const SavingsReport& r) {
  return {{"recommendations", r.recommendations_per_year},
          {"recommendations_per_day", r.recommendations_per_day},
          {"total_emissions_saving", r.total_emissions_saving},
          {"relative_emissions_saving", r.relative_emissions_saving},
          {"total_price_saving", r.total_price_saving},
          {"relative_price_saving", r.relative_price_saving},
          {"days_evaluated", r.days_evaluated}};
}

nlohmann::ordered_json recommend_config_json(const RecommendationConfig& c) {
  return {{"aval_off", c.aval_off},
          {"emissions_ratio", c.emissions_ratio},
          {"availability_threshold", c.availability_threshold},
          {"activity_threshold", c.activity_threshold}};
}

void cmd_demo_data(const std::string& out_dir, int days, std::uint64_t seed) {
  SynthSpec spec;
  spec.days = days;
  spec.seed = seed;
  write_demo(out_dir, spec);
  const RunConfig cfg = load_run_config((fs::path(out_dir) / "config.json").string());
  write_manifest(cfg, "demo-data", {cfg.paths.consumption, cfg.paths.price, cfg.paths.carbon,
                                    cfg.paths.mapping, cfg.paths.catalog},
                 "demo-data");
  std::cout << "demo household written to " << out_dir << " (" << days << " days, seed "
            << seed << ")\n";
}

void cmd_ingest(RunConfig cfg) {
  if (cfg.paths.consumption.empty())
    throw UserError("config sets no consumption path");
  const LoadResult raw = load_readings(cfg.paths.consumption);
  const DeviceCatalog catalog = load_catalog(cfg.paths.catalog);
  const HourlyDataset ds = engineer_features(resample_hourly(raw.devices), catalog);
  const fs::path hourly(cfg.paths.hourly);
  if (hourly.has_parent_path()) fs::create_directories(hourly.parent_path());
  save_hourly(ds, cfg.paths.hourly);
  write_manifest(cfg, "ingest", {cfg.paths.consumption, cfg.paths.catalog}, "ingest");
  std::cout << "ingested " << cfg.paths.consumption << ": " << ds.n_devices() << " devices, "
            << ds.n_hours() << " hours (" << dataset_days(ds) << " full days), "
            << raw.malformed_rows << " malformed rows\n"
            << "hourly dataset -> " << cfg.paths.hourly << "\n";
}

void cmd_train(RunConfig cfg, const std::string& date_text) {
  const CivilDate date = parse_date(date_text);
  const HourlyDataset ds = require_hourly(cfg);
  const DeviceCatalog catalog = load_catalog(cfg.paths.catalog);
  const int day = find_day(ds, date);
  fs::create_directories(cfg.paths.model_store);

  std::vector<TargetColumn> targets = {TargetColumn{true, -1}};
  for (int d : forecastable_devices(ds, catalog)) targets.push_back(TargetColumn{false, d});
  for (const auto& target : targets) {
    const TrainedModel model =
        fit_for_day(ds, target, cfg.family, cfg.schedule, day, cfg.seed);
    const std::string path = model_path(cfg, target.name(ds));
    save_model(model, path);
    std::cout << "trained " << target.name(ds) << " [" << to_string(model.family)
              << (model.degenerate ? ", degenerate" : "") << "] -> " << path << "\n";
  }
  write_manifest(cfg, "train --date " + date_text, {cfg.paths.hourly, cfg.paths.catalog},
                 "train");
}

void cmd_recommend(RunConfig cfg, const std::string& date_text) {
  const CivilDate date = parse_date(date_text);
  const HourlyDataset ds = require_hourly(cfg);
  const DeviceCatalog catalog = load_catalog(cfg.paths.catalog);
  const ActivityMapping mapping = load_mapping(cfg.paths.mapping);
  const int day = find_day(ds, date);
  const HourStamp day_start = ds.hour_at(day_begin_index(ds, day));

  std::vector<std::string> inputs = {cfg.paths.hourly, cfg.paths.catalog, cfg.paths.mapping};

  const TrainedModel avail_model = require_model(cfg, "availability", day_start, date_text);
  inputs.push_back(model_path(cfg, "availability"));
  AvailabilityForecast av;
  av.horizon_start = day_start;
  av.probs = predict_proba(avail_model, day_features(ds, TargetColumn{true, -1}, day),
                           avail_model.feature_schema);

  std::vector<std::vector<double>> usage_probs(24,
                                               std::vector<double>(mapping.device_ids.size()));
  std::vector<double> device_avg_kwh(mapping.device_ids.size());
  for (std::size_t j = 0; j < mapping.device_ids.size(); ++j) {
    const std::string& id = mapping.device_ids[j];
    const int col = ds.device_index(id);
    if (col < 0) throw UserError("mapping device missing from hourly dataset: " + id);
    const TrainedModel model = require_model(cfg, id, day_start, date_text);
    inputs.push_back(model_path(cfg, id));
    const auto probs = predict_proba(model, day_features(ds, TargetColumn{false, col}, day),
                                     model.feature_schema);
    for (int h = 0; h < 24; ++h) usage_probs[h][j] = probs[h];
    device_avg_kwh[j] = avg_hourly_kwh(ds, catalog, col);
  }

  const auto carbon_src = open_signal(SignalKind::carbon, cfg.paths.carbon, cfg.carbon_url);
  const auto price_src = open_signal(SignalKind::price, cfg.paths.price, cfg.price_url);
  const DayAheadSignal carbon =
      signal_for_day(*carbon_src, SignalKind::carbon, day_start, cfg.signal_year);
  const DayAheadSignal price =
      signal_for_day(*price_src, SignalKind::price, day_start, cfg.signal_year);
  if (!cfg.carbon_url) inputs.push_back(cfg.paths.carbon);
  if (!cfg.price_url) inputs.push_back(cfg.paths.price);

  const ScheduleInputs sched_in{av, usage_probs, carbon, price, mapping, device_avg_kwh};
  const ScheduleReport report = build_schedule(sched_in, cfg.recommend);

  const std::string text = render_schedule(report);
  write_text((fs::path(cfg.paths.out_dir) / "report.txt").string(), text);
  write_text((fs::path(cfg.paths.out_dir) / "report.json").string(),
             schedule_to_json(report));
  write_manifest(cfg, "recommend --date " + date_text, inputs, "recommend");
  std::cout << text;
}

void cmd_evaluate_agents(RunConfig cfg) {
  const HourlyDataset ds = require_hourly(cfg);
  const DeviceCatalog catalog = load_catalog(cfg.paths.catalog);
  const ActivityMapping mapping = load_mapping(cfg.paths.mapping);
  const ForecastTable table =
      build_forecast_table(ds, catalog, cfg.family, cfg.schedule, cfg.seed, cfg.parallel);
  const AgentScores scores = score_agents(ds, table, mapping, cfg.eval_th);

  nlohmann::ordered_json j;
  j["family"] = to_string(cfg.family);
  j["days_scored"] = table.n_days();
  j["availability"] = auc_json(scores.availability);
  j["usage"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < scores.usage.size(); ++k)
    j["usage"].push_back({{"device", scores.device_id[k]}, {"auc", auc_json(scores.usage[k])}});
  j["equal"] = {{"mean", scores.equal_mean},
                {"per_day", scores.equal_per_day},
                {"use_th", scores.thresholds.use_th},
                {"act_th", scores.thresholds.act_th}};
  write_text((fs::path(cfg.paths.out_dir) / "eval_agents.json").string(), j.dump(1) + "\n");
  write_manifest(cfg, "evaluate agents",
                 {cfg.paths.hourly, cfg.paths.catalog, cfg.paths.mapping}, "evaluate_agents");

  std::cout << "availability AUC: " << scores.availability.mean << " ("
            << scores.availability.per_day.size() << " days, "
            << scores.availability.skipped_days << " skipped)\n";
  for (std::size_t k = 0; k < scores.usage.size(); ++k)
    std::cout << "usage AUC " << scores.device_id[k] << ": " << scores.usage[k].mean << " ("
              << scores.usage[k].per_day.size() << " days, " << scores.usage[k].skipped_days
              << " skipped)\n";
  std::cout << "activity EQUAL: " << scores.equal_mean << "\n"
            << "report -> " << (fs::path(cfg.paths.out_dir) / "eval_agents.json").string()
            << "\n";
}

void cmd_evaluate_coldstart(RunConfig cfg, const std::string& agent_text,
                            const std::string& device, double threshold, int test_days,
                            int step_days) {
  const HourlyDataset ds = require_hourly(cfg);
  const DeviceCatalog catalog = load_catalog(cfg.paths.catalog);
  const ActivityMapping mapping = load_mapping(cfg.paths.mapping);

  ColdStartSpec spec;
  if (agent_text == "availability") {
    spec.agent = ColdStartAgent::availability;
  } else if (agent_text == "usage") {
    if (device.empty()) throw UserError("--device is required for the usage agent");
    spec.agent = ColdStartAgent::usage;
    spec.device_id = device;
  } else {
    spec.agent = ColdStartAgent::activity;
  }
  spec.family = cfg.family;
  spec.threshold = threshold;
  spec.test_days = test_days;
  spec.step_days = step_days;
  spec.eval_th = cfg.eval_th;

  const ColdStartResult r = cold_start(ds, mapping, catalog, spec, cfg.seed, cfg.parallel);

  nlohmann::ordered_json j;
  j["agent"] = agent_text;
  if (!device.empty()) j["device"] = device;
  j["family"] = to_string(cfg.family);
  j["metric"] = spec.agent == ColdStartAgent::activity ? "equal" : "auc";
  j["threshold"] = threshold;
  j["test_days"] = test_days;
  j["test_set_hash"] = hex64(r.test_set_hash);
  j["training_days"] = r.training_days;
  j["scores"] = r.scores;
  if (r.days_to_threshold)
    j["days_to_threshold"] = *r.days_to_threshold;
  else
    j["days_to_threshold"] = nullptr;
  write_text((fs::path(cfg.paths.out_dir) / "eval_coldstart.json").string(), j.dump(1) + "\n");
  std::string curve = "training_days,score\n";
  for (std::size_t i = 0; i < r.training_days.size(); ++i)
    curve += std::to_string(r.training_days[i]) + "," + csv::format_exact(r.scores[i]) + "\n";
  write_text((fs::path(cfg.paths.out_dir) / "coldstart_curve.csv").string(), curve);
  write_manifest(cfg, "evaluate coldstart",
                 {cfg.paths.hourly, cfg.paths.catalog, cfg.paths.mapping},
                 "evaluate_coldstart");

  std::cout << "cold start (" << agent_text << (device.empty() ? "" : " " + device) << ", "
            << to_string(cfg.family) << "): " << r.training_days.size()
            << " curve points, test tail " << test_days << " days\n";
  if (r.days_to_threshold)
    std::cout << "threshold " << threshold << " first reached with " << *r.days_to_threshold
              << " training days\n";
  else
    std::cout << "threshold " << threshold << " never reached\n";
  std::cout << "report -> " << (fs::path(cfg.paths.out_dir) / "eval_coldstart.json").string()
            << "\n";
}

void cmd_evaluate_savings(RunConfig cfg) {
  const HourlyDataset ds = require_hourly(cfg);
  const DeviceCatalog catalog = load_catalog(cfg.paths.catalog);
  const ActivityMapping mapping = load_mapping(cfg.paths.mapping);
  const auto carbon_src = open_signal(SignalKind::carbon, cfg.paths.carbon, cfg.carbon_url);
  const auto price_src = open_signal(SignalKind::price, cfg.paths.price, cfg.price_url);
  const SignalPair signals{*carbon_src, *price_src, cfg.signal_year};

  const ForecastTable table =
      build_forecast_table(ds, catalog, cfg.family, cfg.schedule, cfg.seed, cfg.parallel);
  const SavingsReport r = simulate_savings(ds, signals, mapping, catalog, cfg.recommend,
                                           table, -1, -1, cfg.parallel);

  nlohmann::ordered_json j;
  j["family"] = to_string(cfg.family);
  j["config"] = recommend_config_json(cfg.recommend);
  j["report"] = savings_json(r);
  write_text((fs::path(cfg.paths.out_dir) / "eval_savings.json").string(), j.dump(1) + "\n");
  std::string hist = "hour,predicted,recommended\n";
  for (int h = 0; h < 24; ++h)
    hist += std::to_string(h) + "," + std::to_string(r.predicted_start_hist[h]) + "," +
            std::to_string(r.recommended_start_hist[h]) + "\n";
  write_text((fs::path(cfg.paths.out_dir) / "savings_hist.csv").string(), hist);
  std::vector<std::string> inputs = {cfg.paths.hourly, cfg.paths.catalog, cfg.paths.mapping};
  if (!cfg.carbon_url) inputs.push_back(cfg.paths.carbon);
  if (!cfg.price_url) inputs.push_back(cfg.paths.price);
  write_manifest(cfg, "evaluate savings", inputs, "evaluate_savings");

  char line[256];
  std::snprintf(line, sizeof line,
                "%d accepted recommendations over %d days (%.2f/day)\n"
                "emissions saving: %.1f gCO2 (%.1f%%)\nprice saving: %.4f per-kWh units "
                "(%.1f%%)\n",
                r.recommendations_per_year, r.days_evaluated, r.recommendations_per_day,
                r.total_emissions_saving, 100.0 * r.relative_emissions_saving,
                r.total_price_saving, 100.0 * r.relative_price_saving);
  std::cout << line << "report -> "
            << (fs::path(cfg.paths.out_dir) / "eval_savings.json").string() << "\n";
}

void cmd_gridsearch(RunConfig cfg, const std::string& objective_text) {
  const HourlyDataset ds = require_hourly(cfg);
  const DeviceCatalog catalog = load_catalog(cfg.paths.catalog);
  const ActivityMapping mapping = load_mapping(cfg.paths.mapping);
  const auto carbon_src = open_signal(SignalKind::carbon, cfg.paths.carbon, cfg.carbon_url);
  const auto price_src = open_signal(SignalKind::price, cfg.paths.price, cfg.price_url);
  const SignalPair signals{*carbon_src, *price_src, cfg.signal_year};
  const Objective objective =
      objective_text == "price" ? Objective::price : Objective::emissions;

  const ForecastTable table =
      build_forecast_table(ds, catalog, cfg.family, cfg.schedule, cfg.seed, cfg.parallel);
  const GridSearchResult r = grid_search(ds, signals, mapping, catalog, cfg.recommend,
                                         Grids{}, objective, table, cfg.parallel);

  nlohmann::ordered_json j;
  j["objective"] = objective_text;
  j["family"] = to_string(cfg.family);
  j["best_index"] = r.best_index;
  j["table"] = nlohmann::ordered_json::array();
  for (const auto& point : r.table)
    j["table"].push_back(
        {{"config", recommend_config_json(point.config)}, {"report", savings_json(point.report)}});
  write_text((fs::path(cfg.paths.out_dir) / "gridsearch.json").string(), j.dump(1) + "\n");
  std::vector<std::string> inputs = {cfg.paths.hourly, cfg.paths.catalog, cfg.paths.mapping};
  if (!cfg.carbon_url) inputs.push_back(cfg.paths.carbon);
  if (!cfg.price_url) inputs.push_back(cfg.paths.price);
  write_manifest(cfg, "gridsearch --objective " + objective_text, inputs, "gridsearch");

  std::cout << "aval_off  avail_th  act_th  emissions    price      recs/day\n";
  for (std::size_t i = 0; i < r.table.size(); ++i) {
    const auto& p = r.table[i];
    char line[160];
    std::snprintf(line, sizeof line, "%-9s %-9.2f %-7.2f %-12.1f %-10.4f %-8.2f%s\n",
                  p.config.aval_off ? "on" : "off", p.config.availability_threshold,
                  p.config.activity_threshold, p.report.total_emissions_saving,
                  p.report.total_price_saving, p.report.recommendations_per_day,
                  i == r.best_index ? "  <- best" : "");
    std::cout << line;
  }
  std::cout << "report -> " << (fs::path(cfg.paths.out_dir) / "gridsearch.json").string()
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"household load-shifting pipeline: ingest, forecast, recommend, evaluate"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // demo-data
  auto* demo = app.add_subcommand("demo-data", "write a synthetic demo household");
  std::string demo_out = "demo";
  int demo_days = 120;
  std::uint64_t demo_seed = 42;
  demo->add_option("--out", demo_out, "output directory")->required();
  demo->add_option("--days", demo_days, "days of data")->check(CLI::PositiveNumber);
  demo->add_option("--seed", demo_seed, "generator seed");
  demo->callback([&] { cmd_demo_data(demo_out, demo_days, demo_seed); });

  const auto add_config = [](CLI::App* sub, std::string& path) {
    sub->add_option("--config", path, "run configuration file")->required();
  };

  // ingest
  auto* ingest = app.add_subcommand("ingest", "consumption CSV -> hourly feature table");
  std::string ingest_cfg_path;
  add_config(ingest, ingest_cfg_path);
  Overrides ingest_ov;
  ingest_ov.add_common(ingest);
  ingest->callback([&] {
    RunConfig cfg = load_run_config(ingest_cfg_path);
    ingest_ov.apply(cfg);
    cmd_ingest(std::move(cfg));
  });

  // train
  auto* train = app.add_subcommand("train", "fit and store the models for one target day");
  std::string train_cfg_path, train_date;
  add_config(train, train_cfg_path);
  train->add_option("--date", train_date, "target day (YYYY-MM-DD)")->required();
  Overrides train_ov;
  train_ov.add_common(train);
  train->callback([&] {
    RunConfig cfg = load_run_config(train_cfg_path);
    train_ov.apply(cfg);
    cmd_train(std::move(cfg), train_date);
  });

  // recommend
  auto* rec = app.add_subcommand("recommend", "daily shifting schedule from stored models");
  std::string rec_cfg_path, rec_date;
  add_config(rec, rec_cfg_path);
  rec->add_option("--date", rec_date, "target day (YYYY-MM-DD)")->required();
  Overrides rec_ov;
  rec_ov.add_common(rec);
  rec_ov.add_recommend(rec);
  rec->callback([&] {
    RunConfig cfg = load_run_config(rec_cfg_path);
    rec_ov.apply(cfg);
    cmd_recommend(std::move(cfg), rec_date);
  });

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "backtests over the hourly dataset");
  eval->require_subcommand(1);

  auto* agents = eval->add_subcommand("agents", "rolling AUC and EQUAL scores");
  std::string agents_cfg_path;
  add_config(agents, agents_cfg_path);
  Overrides agents_ov;
  agents_ov.add_common(agents);
  agents->callback([&] {
    RunConfig cfg = load_run_config(agents_cfg_path);
    agents_ov.apply(cfg);
    cmd_evaluate_agents(std::move(cfg));
  });

  auto* cold = eval->add_subcommand("coldstart", "score vs training history length");
  std::string cold_cfg_path, cold_agent = "availability", cold_device;
  double cold_threshold = 0.79;
  int cold_test_days = 20, cold_step = 1;
  add_config(cold, cold_cfg_path);
  cold->add_option("--agent", cold_agent, "availability|usage|activity")
      ->check(CLI::IsMember({"availability", "usage", "activity"}));
  cold->add_option("--device", cold_device, "device id (usage agent)");
  cold->add_option("--threshold", cold_threshold, "score that counts as solved");
  cold->add_option("--test-days", cold_test_days, "fixed test tail length")
      ->check(CLI::PositiveNumber);
  cold->add_option("--step", cold_step, "training-length stride")
      ->check(CLI::PositiveNumber);
  Overrides cold_ov;
  cold_ov.add_common(cold);
  cold->callback([&] {
    RunConfig cfg = load_run_config(cold_cfg_path);
    cold_ov.apply(cfg);
    cmd_evaluate_coldstart(std::move(cfg), cold_agent, cold_device, cold_threshold,
                           cold_test_days, cold_step);
  });

  auto* savings = eval->add_subcommand("savings", "replay the scheduler, price the savings");
  std::string savings_cfg_path;
  add_config(savings, savings_cfg_path);
  Overrides savings_ov;
  savings_ov.add_common(savings);
  savings_ov.add_recommend(savings);
  savings->callback([&] {
    RunConfig cfg = load_run_config(savings_cfg_path);
    savings_ov.apply(cfg);
    cmd_evaluate_savings(std::move(cfg));
  });

  // gridsearch
  auto* grid = app.add_subcommand("gridsearch", "threshold/aval_off sweep");
  std::string grid_cfg_path, grid_objective = "emissions";
  add_config(grid, grid_cfg_path);
  grid->add_option("--objective", grid_objective, "emissions|price")
      ->check(CLI::IsMember({"emissions", "price"}));
  Overrides grid_ov;
  grid_ov.add_common(grid);
  grid_ov.add_recommend(grid);
  grid->callback([&] {
    RunConfig cfg = load_run_config(grid_cfg_path);
    grid_ov.apply(cfg);
    cmd_gridsearch(std::move(cfg), grid_objective);
  });

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const UserError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
