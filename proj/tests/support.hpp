#pragma once

// Shared fixture builders and oracles for the test suite.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "loadshift/ingest.hpp"

namespace loadshift::testsupport {

// Brute-force pairwise AUC: fraction of (positive, negative) pairs ranked
// correctly, ties worth half. Quadratic on purpose — it is the oracle.
// Returns -1 when one class is missing.
inline double auc_oracle(const std::vector<double>& scores,
                         const std::vector<std::uint8_t>& labels) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      ++pairs;
      if (scores[i] > scores[j])
        wins += 1.0;
      else if (scores[i] == scores[j])
        wins += 0.5;
    }
  }
  if (pairs == 0) return -1.0;
  return wins / static_cast<double>(pairs);
}

/// One synthetic device: on(day_index, hour_of_day) decides whether it draws
/// `watts` for that whole hour.
struct PatternDevice {
  std::string id;
  bool availability_indicating = false;
  bool shiftable = true;
  std::function<bool(int, int)> on;
  double watts = 100.0;
};

inline HourlyDataset pattern_dataset(int days, const CivilDate& start,
                                     const std::vector<PatternDevice>& devices,
                                     DeviceCatalog* catalog_out = nullptr) {
  ResampleResult res;
  res.first_hour = hour_from_civil(start, 0);
  for (const auto& dev : devices) res.device_ids.push_back(dev.id);
  res.energy.assign(static_cast<std::size_t>(days) * 24,
                    std::vector<double>(devices.size(), 0.0));
  res.gap.assign(res.energy.size(), std::vector<std::uint8_t>(devices.size(), 0));
  for (int d = 0; d < days; ++d)
    for (int h = 0; h < 24; ++h)
      for (std::size_t j = 0; j < devices.size(); ++j)
        if (devices[j].on(d, h))
          res.energy[static_cast<std::size_t>(d) * 24 + h][j] = devices[j].watts;

  DeviceCatalog cat;
  for (const auto& dev : devices)
    cat.devices.push_back({dev.id, dev.availability_indicating, dev.shiftable, 10.0,
                           std::nullopt});
  if (catalog_out) *catalog_out = cat;
  return engineer_features(res, cat);
}

/// Single availability-indicating "presence" device.
inline HourlyDataset pattern_dataset(int days, const CivilDate& start,
                                     const std::function<bool(int, int)>& on) {
  return pattern_dataset(days, start, {{"presence", true, true, on, 100.0}});
}

inline std::filesystem::path tmp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string write_file(const std::string& dir_name, const std::string& file_name,
                              const std::string& content) {
  auto path = tmp_dir(dir_name) / file_name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

}  // namespace loadshift::testsupport
