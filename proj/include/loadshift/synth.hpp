#pragma once

#include <string>
#include <vector>

#include "loadshift/common.hpp"
#include "loadshift/ingest.hpp"
#include "loadshift/signals.hpp"

namespace loadshift {

/// Deterministic demo household: six appliances with weekly routines, plus
/// matching day-ahead signal series. Same spec + seed => identical bytes.
struct SynthSpec {
  int days = 120;
  std::uint64_t seed = 42;
  CivilDate start{2015, 1, 1};
  double idle_dropout = 0.01;  // fraction of idle hours with no samples
  int samples_per_hour = 4;
};

/// Per-device power draw (watts) for one civil hour of the routine.
double synth_power(const std::string& device_id, int day_of_week_idx, int hour_of_day);

std::vector<double> synth_signal_values(SignalKind kind, const SynthSpec& spec);

DeviceCatalog synth_catalog();

/// Writes consumption.csv, price.csv, carbon.csv, catalog.json, mapping.json
/// and config.json into dir.
void write_demo(const std::string& dir, const SynthSpec& spec);

}  // namespace loadshift
