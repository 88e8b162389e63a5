#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "loadshift/common.hpp"

namespace loadshift {

enum class Flexibility { flexible, slightly_flexible, inflexible };

Flexibility flexibility_from_string(const std::string& s);
const char* to_string(Flexibility f);

struct Activity {
  std::string activity_id;
  std::vector<std::uint8_t> row;  // relation to each device, over ActivityMapping::device_ids
  Flexibility flexibility = Flexibility::inflexible;
};

/// Binary activity × device relation. Every device belongs to exactly one
/// activity (exclusive identifying mapping); the validator rejects anything
/// else.
struct ActivityMapping {
  std::vector<std::string> device_ids;
  std::vector<Activity> activities;

  int activity_index(const std::string& id) const;  // -1 when absent
  void validate() const;                            // throws UserError
};

ActivityMapping load_mapping(const std::string& path);

struct ActivityInstance {
  int activity = 0;         // index into mapping.activities
  int predicted_start = 0;  // 0..23
  int duration = 1;         // hours, start + duration <= 24
};

struct ActivityForecast {
  int activity = 0;
  HourStamp horizon_start = 0;
  std::array<double, 24> probs{};
  std::vector<ActivityInstance> instances;
};

/// a may be all-zero (similarity 0); zero b is rejected by the mapping
/// validator before we ever get here.
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

/// Similarities of the hour's usage-probability vector against every
/// activity row, normalized by their sum. All-zero similarities stay zero.
std::vector<double> activity_probs(const std::vector<double>& usage_probs_hour,
                                   const ActivityMapping& mapping);

/// Maximal runs of hours with prob > act_th.
std::vector<ActivityInstance> extract_instances(const std::array<double, 24>& probs,
                                                double act_th, int activity);

/// Full Activity Agent step for one horizon: usage_probs[h][device] over the
/// mapping's device order.
std::vector<ActivityForecast> activity_forecasts(
    const std::vector<std::vector<double>>& usage_probs, const ActivityMapping& mapping,
    double act_th, HourStamp horizon_start);

}  // namespace loadshift
