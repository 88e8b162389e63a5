#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "loadshift/activity.hpp"
#include "loadshift/ingest.hpp"
#include "loadshift/predictors.hpp"
#include "loadshift/signals.hpp"

namespace loadshift {

struct RecommendationConfig {
  bool aval_off = true;
  double emissions_ratio = 1.0;      // r: 1 = emissions only, 0 = price only
  double availability_threshold = 0.15;
  double activity_threshold = 0.15;
};

struct Recommendation {
  std::string activity_id;
  int predicted_start = 0;
  int duration = 1;
  int recommended_start = 0;
  double emissions_saving = 0.0;  // gCO2
  double price_saving = 0.0;      // currency units
  // set when a flexible instance lost its slot and stays at the predicted
  // start (no savings)
  bool fallback = false;
};

struct ScheduleReport {
  HourStamp horizon_start = 0;
  int greenest_hour = 0;
  int cheapest_hour = 0;
  std::vector<Recommendation> recommendations;
  double total_emissions_saving = 0.0;
  double total_price_saving = 0.0;
  // fractions of the emissions/cost of running everything at predicted starts
  double relative_emissions_saving = 0.0;
  double relative_price_saving = 0.0;
  RecommendationConfig config;
};

std::pair<int, int> greenest_cheapest(const DayAheadSignal& carbon, const DayAheadSignal& price);

std::set<int> availability_hours(const AvailabilityForecast& av, double th);

std::vector<int> candidate_starts(const ActivityInstance& instance, Flexibility flexibility,
                                  bool aval_off, const std::set<int>& avail_hours);

/// r * minmax(carbon) + (1-r) * minmax(price); a constant signal normalizes
/// to all-zero so it cannot dominate the blend.
std::array<double, 24> blended_score(const DayAheadSignal& carbon, const DayAheadSignal& price,
                                     double r);

/// argmin of the window sum over the candidates; ties go to the start closest
/// to the predicted one, then to the earliest.
int best_start(const ActivityInstance& instance, const std::vector<int>& candidates,
               const std::array<double, 24>& score);

struct SlotAssignment {
  int start = 0;
  bool fallback = false;  // kept the predicted start (slot lost or none left)
};

/// Greedy in predicted order; each instance excludes the starts earlier
/// instances took. An instance whose remaining options are all worse than
/// its predicted start keeps the predicted start with zero savings.
std::vector<SlotAssignment> assign_flexible_slots(const std::vector<ActivityInstance>& instances,
                                                  const std::vector<std::vector<int>>& candidates,
                                                  const std::array<double, 24>& score);

/// E = sum of avg hourly consumption (kWh) over the activity's devices whose
/// max usage probability inside the instance window exceeds the inclusion
/// threshold; savings = E * sum over the window of the signal difference.
std::pair<double, double> savings(const ActivityInstance& instance, int recommended_start,
                                  const DayAheadSignal& carbon, const DayAheadSignal& price,
                                  const ActivityMapping& mapping,
                                  const std::vector<double>& device_avg_kwh,
                                  const std::vector<std::vector<double>>& usage_probs,
                                  double inclusion_th);

struct ScheduleInputs {
  const AvailabilityForecast& availability;
  /// usage_probs[h][j] over mapping.device_ids order
  const std::vector<std::vector<double>>& usage_probs;
  const DayAheadSignal& carbon;
  const DayAheadSignal& price;
  const ActivityMapping& mapping;
  /// avg hourly kWh per mapping device
  const std::vector<double>& device_avg_kwh;
};

ScheduleReport build_schedule(const ScheduleInputs& in, const RecommendationConfig& config);

/// Plain-text schedule table (the shape the daily run prints).
std::string render_schedule(const ScheduleReport& report);
std::string schedule_to_json(const ScheduleReport& report);

}  // namespace loadshift
