#pragma once

#include <array>
#include <string>
#include <vector>

#include "loadshift/ingest.hpp"
#include "loadshift/models.hpp"

namespace loadshift {

struct AvailabilityForecast {
  HourStamp horizon_start = 0;
  std::array<double, 24> probs{};
};

struct UsageForecast {
  std::string device_id;
  HourStamp horizon_start = 0;
  std::array<double, 24> probs{};
};

/// Devices whose usage is forecast: catalog-shiftable only.
std::vector<int> forecastable_devices(const HourlyDataset& ds, const DeviceCatalog& catalog);

/// The model one rolling step would fit for `day`: tuned at the governing
/// retune day, trained on the window ending the evening before.
TrainedModel fit_for_day(const HourlyDataset& ds, const TargetColumn& target,
                         ModelFamily family, const TrainingSchedule& schedule, int day,
                         std::uint64_t seed);

AvailabilityForecast forecast_availability(const HourlyDataset& ds, ModelFamily family,
                                           const TrainingSchedule& schedule, int day,
                                           std::uint64_t seed);

UsageForecast forecast_usage(const HourlyDataset& ds, const std::string& device_id,
                             ModelFamily family, const TrainingSchedule& schedule, int day,
                             std::uint64_t seed);

/// All rolling forecasts for one dataset, computed once and reused by the
/// scheduler, the evaluation protocol and the grid search. Row k covers day
/// headstart + k.
struct ForecastTable {
  TrainingSchedule schedule;
  std::vector<int> device_index;       // dataset columns, forecastable only
  std::vector<std::string> device_id;  // aligned with device_index
  RollingResult availability;
  std::vector<RollingResult> usage;    // aligned with device_index

  int first_day() const { return schedule.headstart_days; }
  int n_days() const { return static_cast<int>(availability.days.size()); }
  /// usage_probs[h][j] over the table's device order, for table row k.
  std::vector<std::vector<double>> usage_matrix(int k) const;
};

ForecastTable build_forecast_table(const HourlyDataset& ds, const DeviceCatalog& catalog,
                                   ModelFamily family, const TrainingSchedule& schedule,
                                   std::uint64_t seed, bool parallel = false);

void save_forecasts(const RollingResult& r, const std::string& target,
                    const std::string& path);

}  // namespace loadshift
