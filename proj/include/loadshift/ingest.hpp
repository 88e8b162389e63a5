#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loadshift/common.hpp"

namespace loadshift {

struct Sample {
  std::int64_t t;  // unix seconds, UTC
  double watts;
};

struct RawReadings {
  std::string device_id;
  std::vector<Sample> samples;  // strictly increasing timestamps
};

struct LoadResult {
  std::vector<RawReadings> devices;
  std::size_t malformed_rows = 0;
};

struct CatalogDevice {
  std::string device_id;
  bool availability_indicating = false;
  bool shiftable = true;
  double usage_watt_threshold = 10.0;           // Wh per hour
  std::optional<double> avg_hourly_kwh;         // override; estimated when absent
};

struct DeviceCatalog {
  std::vector<CatalogDevice> devices;

  const CatalogDevice* find(const std::string& id) const;
};

/// Hourly energy series plus the engineered features the predictors consume.
/// Columns are indexed by device in the order of `device_ids`.
struct HourlyDataset {
  std::vector<std::string> device_ids;
  HourStamp first_hour = 0;                      // hours since epoch
  std::vector<std::vector<double>> energy;       // [hour][device], Wh
  std::vector<std::vector<std::uint8_t>> usage;  // [hour][device], 0/1
  std::vector<std::vector<std::uint8_t>> gap;    // [hour][device], 1 = no samples
  std::vector<std::uint8_t> availability;        // [hour]
  std::vector<std::uint8_t> avail_gap;           // any availability device gapped
  std::vector<std::uint8_t> avail_lag1, avail_lag168;
  std::vector<std::vector<std::uint8_t>> usage_lag1, usage_lag168;
  // per hour: month 1-12, day of week 0-6 (Monday=0), hour of day 0-23
  std::vector<std::uint8_t> month, dow, hod;

  std::size_t n_hours() const { return energy.size(); }
  std::size_t n_devices() const { return device_ids.size(); }
  HourStamp hour_at(std::size_t h) const { return first_hour + static_cast<HourStamp>(h); }
  int device_index(const std::string& id) const;  // -1 when absent
};

/// Parses a REFIT-layout CSV: header row, `Time` column (unix seconds or
/// ISO-8601) followed by one watts column per device. Rows out of order by
/// at most reorder_window_s seconds are sorted; larger violations are errors.
LoadResult load_readings(const std::string& path, std::int64_t reorder_window_s = 3600);

struct ResampleResult {
  std::vector<std::string> device_ids;
  HourStamp first_hour = 0;
  std::vector<std::vector<double>> energy;       // [hour][device], Wh
  std::vector<std::vector<std::uint8_t>> gap;    // [hour][device]
};

/// Buckets samples into UTC hours; energy[h][d] = mean watts in hour h × 1 h.
/// Hours without samples get 0 Wh and a gap flag.
ResampleResult resample_hourly(const std::vector<RawReadings>& readings);

/// Builds usage flags, availability, time features and the 1 h / 168 h lag
/// columns. Catalog devices missing from the data are errors; data devices
/// missing from the catalog are dropped.
HourlyDataset engineer_features(const ResampleResult& resampled, const DeviceCatalog& catalog);

/// Mean hourly energy (kWh) over hours where the device's usage flag is set;
/// 0 when never used. Catalog overrides take precedence over this estimate.
double estimate_avg_hourly_kwh(const HourlyDataset& ds, int device);

/// Effective average consumption: catalog override or the estimate above.
double avg_hourly_kwh(const HourlyDataset& ds, const DeviceCatalog& catalog, int device);

DeviceCatalog load_catalog(const std::string& path);

void save_hourly(const HourlyDataset& ds, const std::string& path);
HourlyDataset load_hourly(const std::string& path);

}  // namespace loadshift
