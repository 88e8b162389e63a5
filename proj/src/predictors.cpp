#include "loadshift/predictors.hpp"

#include <fstream>

#include "loadshift/csv.hpp"

namespace loadshift {

std::vector<int> forecastable_devices(const HourlyDataset& ds, const DeviceCatalog& catalog) {
  std::vector<int> out;
  for (std::size_t d = 0; d < ds.n_devices(); ++d) {
    const CatalogDevice* dev = catalog.find(ds.device_ids[d]);
    if (dev && dev->shiftable) out.push_back(static_cast<int>(d));
  }
  return out;
}

TrainedModel fit_for_day(const HourlyDataset& ds, const TargetColumn& target,
                         ModelFamily family, const TrainingSchedule& schedule, int day,
                         std::uint64_t seed) {
  const int days = dataset_days(ds);
  if (day < schedule.headstart_days || day >= days)
    throw UserError("insufficient history: day " + std::to_string(day) +
                    " is outside the predictable range [" +
                    std::to_string(schedule.headstart_days) + ", " + std::to_string(days) + ")");

  Fnv1a h;
  h.update(target.name(ds));
  const std::uint64_t target_seed = mix_seed(seed, h.digest());
  const std::string schema = "time+lag:" + target.name(ds);
  const std::size_t window_hours =
      static_cast<std::size_t>(schedule.training_window_days) * 24;

  const int tune_day = schedule.headstart_days +
                       ((day - schedule.headstart_days) / schedule.retune_interval_days) *
                           schedule.retune_interval_days;
  const std::size_t tune_end = day_begin_index(ds, tune_day);
  const std::size_t tune_begin = tune_end > window_hours ? tune_end - window_hours : 0;
  auto tune_rows = training_rows(ds, target, tune_begin, tune_end);
  const std::size_t n_val = tune_rows.size() / 5;
  std::vector<TrainRow> train_split(tune_rows.begin(), tune_rows.end() - n_val);
  std::vector<TrainRow> val_split(tune_rows.end() - n_val, tune_rows.end());
  const auto grid = default_grid(family);
  HyperParams hp = grid.front();
  if (!train_split.empty() && !val_split.empty())
    hp = tune(family, train_split, val_split, grid, schema,
              mix_seed(target_seed, 1000003u + static_cast<std::uint64_t>(tune_day)))
             .best;

  const std::size_t end = day_begin_index(ds, day);
  const std::size_t begin = end > window_hours ? end - window_hours : 0;
  const auto rows = training_rows(ds, target, begin, end);
  TrainedModel model = train(family, rows, schema, hp, mix_seed(target_seed, day));
  model.trained_through = ds.hour_at(end);
  return model;
}

namespace {

/// Trains the day's model exactly like one rolling step and predicts it.
std::array<double, 24> one_day(const HourlyDataset& ds, const TargetColumn& target,
                               ModelFamily family, const TrainingSchedule& schedule, int day,
                               std::uint64_t seed) {
  const TrainedModel model = fit_for_day(ds, target, family, schedule, day, seed);
  return predict_proba(model, day_features(ds, target, day), model.feature_schema);
}

}  // namespace

AvailabilityForecast forecast_availability(const HourlyDataset& ds, ModelFamily family,
                                           const TrainingSchedule& schedule, int day,
                                           std::uint64_t seed) {
  AvailabilityForecast out;
  out.horizon_start = ds.hour_at(day_begin_index(ds, day < 0 ? 0 : day));
  out.probs = one_day(ds, TargetColumn{true, -1}, family, schedule, day, seed);
  return out;
}

UsageForecast forecast_usage(const HourlyDataset& ds, const std::string& device_id,
                             ModelFamily family, const TrainingSchedule& schedule, int day,
                             std::uint64_t seed) {
  const int d = ds.device_index(device_id);
  if (d < 0) throw UserError("unknown device: " + device_id);
  UsageForecast out;
  out.device_id = device_id;
  out.horizon_start = ds.hour_at(day_begin_index(ds, day < 0 ? 0 : day));
  out.probs = one_day(ds, TargetColumn{false, d}, family, schedule, day, seed);
  return out;
}

std::vector<std::vector<double>> ForecastTable::usage_matrix(int k) const {
  std::vector<std::vector<double>> m(24, std::vector<double>(usage.size(), 0.0));
  for (std::size_t j = 0; j < usage.size(); ++j)
    for (int h = 0; h < 24; ++h) m[h][j] = usage[j].days[k].probs[h];
  return m;
}

ForecastTable build_forecast_table(const HourlyDataset& ds, const DeviceCatalog& catalog,
                                   ModelFamily family, const TrainingSchedule& schedule,
                                   std::uint64_t seed, bool parallel) {
  ForecastTable table;
  table.schedule = schedule;
  table.availability =
      rolling_fit_predict(ds, TargetColumn{true, -1}, family, schedule, seed, parallel);
  for (int d : forecastable_devices(ds, catalog)) {
    table.device_index.push_back(d);
    table.device_id.push_back(ds.device_ids[d]);
    table.usage.push_back(
        rolling_fit_predict(ds, TargetColumn{false, d}, family, schedule, seed, parallel));
  }
  return table;
}

void save_forecasts(const RollingResult& r, const std::string& target,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UserError("cannot write forecast file: " + path);
  out << "target,day,hour,prob\n";
  for (const auto& day : r.days)
    for (int h = 0; h < 24; ++h)
      out << target << ',' << day.day << ',' << h << ',' << csv::format_exact(day.probs[h])
          << "\n";
  if (!out) throw UserError("failed writing forecast file: " + path);
}

}  // namespace loadshift
