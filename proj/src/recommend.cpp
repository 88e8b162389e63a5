#include "loadshift/recommend.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <json.hpp>

namespace loadshift {

std::pair<int, int> greenest_cheapest(const DayAheadSignal& carbon,
                                      const DayAheadSignal& price) {
  const auto green =
      std::min_element(carbon.values.begin(), carbon.values.end()) - carbon.values.begin();
  const auto cheap =
      std::min_element(price.values.begin(), price.values.end()) - price.values.begin();
  return {static_cast<int>(green), static_cast<int>(cheap)};
}

std::set<int> availability_hours(const AvailabilityForecast& av, double th) {
  std::set<int> out;
  for (int h = 0; h < 24; ++h)
    if (av.probs[h] >= th) out.insert(h);
  return out;
}

std::vector<int> candidate_starts(const ActivityInstance& instance, Flexibility flexibility,
                                  bool aval_off, const std::set<int>& avail_hours) {
  std::vector<int> out;
  const auto feasible = [&](int s) { return s >= 0 && s + instance.duration <= 24; };
  switch (flexibility) {
    case Flexibility::flexible:
      for (int s = 0; s < 24; ++s)
        if (feasible(s) && (aval_off || avail_hours.count(s))) out.push_back(s);
      break;
    case Flexibility::slightly_flexible:
      for (int s = instance.predicted_start - 1; s <= instance.predicted_start + 4; ++s)
        if (feasible(s)) out.push_back(s);
      break;
    case Flexibility::inflexible:
      for (int s = instance.predicted_start - 1; s <= instance.predicted_start + 2; ++s)
        if (feasible(s)) out.push_back(s);
      break;
  }
  return out;
}

std::array<double, 24> blended_score(const DayAheadSignal& carbon, const DayAheadSignal& price,
                                     double r) {
  const auto normalize = [](const std::array<double, 24>& v) {
    std::array<double, 24> out{};
    const double lo = *std::min_element(v.begin(), v.end());
    const double hi = *std::max_element(v.begin(), v.end());
    if (hi > lo)
      for (int h = 0; h < 24; ++h) out[h] = (v[h] - lo) / (hi - lo);
    return out;
  };
  const auto c = normalize(carbon.values);
  const auto p = normalize(price.values);
  std::array<double, 24> score;
  for (int h = 0; h < 24; ++h) score[h] = r * c[h] + (1.0 - r) * p[h];
  return score;
}

namespace {

double window_sum(const std::array<double, 24>& score, int start, int duration) {
  double sum = 0.0;
  for (int k = 0; k < duration; ++k) sum += score[start + k];
  return sum;
}

}  // namespace

int best_start(const ActivityInstance& instance, const std::vector<int>& candidates,
               const std::array<double, 24>& score) {
  if (candidates.empty()) throw std::invalid_argument("best_start: no candidates");
  int best = candidates.front();
  double best_sum = window_sum(score, best, instance.duration);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const int s = candidates[i];
    const double sum = window_sum(score, s, instance.duration);
    const bool closer = std::abs(s - instance.predicted_start) <
                        std::abs(best - instance.predicted_start);
    const bool equally_close = std::abs(s - instance.predicted_start) ==
                               std::abs(best - instance.predicted_start);
    if (sum < best_sum ||
        (sum == best_sum && (closer || (equally_close && s < best)))) {
      best = s;
      best_sum = sum;
    }
  }
  return best;
}

std::vector<SlotAssignment> assign_flexible_slots(
    const std::vector<ActivityInstance>& instances,
    const std::vector<std::vector<int>>& candidates, const std::array<double, 24>& score) {
  std::vector<SlotAssignment> out(instances.size());
  std::set<int> taken;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    std::vector<int> remaining;
    for (int s : candidates[i])
      if (!taken.count(s)) remaining.push_back(s);
    if (remaining.empty()) {
      out[i] = {instances[i].predicted_start, true};
      continue;
    }
    const int s = best_start(instances[i], remaining, score);
    // A slot an earlier instance took may leave only worse options; shifting
    // would then cost the user, so the instance stays where it was predicted.
    if (window_sum(score, s, instances[i].duration) >
        window_sum(score, instances[i].predicted_start, instances[i].duration)) {
      out[i] = {instances[i].predicted_start, true};
      continue;
    }
    taken.insert(s);
    out[i] = {s, false};
  }
  return out;
}

namespace {

struct SavingsDetail {
  double energy_kwh = 0.0;        // per hour of the running activity
  double emissions_saving = 0.0;  // gCO2
  double price_saving = 0.0;
  double emissions_baseline = 0.0;
  double price_baseline = 0.0;
};

SavingsDetail savings_detail(const ActivityInstance& instance, int recommended_start,
                             const DayAheadSignal& carbon, const DayAheadSignal& price,
                             const ActivityMapping& mapping,
                             const std::vector<double>& device_avg_kwh,
                             const std::vector<std::vector<double>>& usage_probs,
                             double inclusion_th) {
  SavingsDetail out;
  const auto& row = mapping.activities[instance.activity].row;
  for (std::size_t d = 0; d < row.size(); ++d) {
    if (!row[d]) continue;
    double peak = 0.0;
    for (int k = 0; k < instance.duration; ++k)
      peak = std::max(peak, usage_probs[instance.predicted_start + k][d]);
    if (peak > inclusion_th) out.energy_kwh += device_avg_kwh[d];
  }
  for (int k = 0; k < instance.duration; ++k) {
    const int from = instance.predicted_start + k;
    const int to = recommended_start + k;
    out.emissions_saving += out.energy_kwh * (carbon.values[from] - carbon.values[to]);
    out.price_saving += out.energy_kwh * (price.values[from] - price.values[to]) / 1000.0;
    out.emissions_baseline += out.energy_kwh * carbon.values[from];
    out.price_baseline += out.energy_kwh * price.values[from] / 1000.0;
  }
  return out;
}

}  // namespace

std::pair<double, double> savings(const ActivityInstance& instance, int recommended_start,
                                  const DayAheadSignal& carbon, const DayAheadSignal& price,
                                  const ActivityMapping& mapping,
                                  const std::vector<double>& device_avg_kwh,
                                  const std::vector<std::vector<double>>& usage_probs,
                                  double inclusion_th) {
  const auto detail = savings_detail(instance, recommended_start, carbon, price, mapping,
                                     device_avg_kwh, usage_probs, inclusion_th);
  return {detail.emissions_saving, detail.price_saving};
}

ScheduleReport build_schedule(const ScheduleInputs& in, const RecommendationConfig& config) {
  ScheduleReport report;
  report.horizon_start = in.carbon.horizon_start;
  report.config = config;
  std::tie(report.greenest_hour, report.cheapest_hour) = greenest_cheapest(in.carbon, in.price);

  const auto avail = availability_hours(in.availability, config.availability_threshold);
  const auto score = blended_score(in.carbon, in.price, config.emissions_ratio);
  const auto forecasts = activity_forecasts(in.usage_probs, in.mapping,
                                            config.activity_threshold, report.horizon_start);

  double emissions_baseline = 0.0, price_baseline = 0.0;
  for (const auto& forecast : forecasts) {
    const auto& activity = in.mapping.activities[forecast.activity];

    // Only instances whose predicted start falls into an availability hour
    // are scheduled; the probability-above-threshold half of the gate is
    // how the instances were extracted in the first place.
    std::vector<ActivityInstance> gated;
    for (const auto& inst : forecast.instances)
      if (avail.count(inst.predicted_start)) gated.push_back(inst);

    std::vector<std::vector<int>> cands;
    for (const auto& inst : gated)
      cands.push_back(candidate_starts(inst, activity.flexibility, config.aval_off, avail));

    std::vector<SlotAssignment> slots;
    if (activity.flexibility == Flexibility::flexible) {
      slots = assign_flexible_slots(gated, cands, score);
    } else {
      for (std::size_t i = 0; i < gated.size(); ++i) {
        if (cands[i].empty())
          slots.push_back({gated[i].predicted_start, true});
        else
          slots.push_back({best_start(gated[i], cands[i], score), false});
      }
    }

    for (std::size_t i = 0; i < gated.size(); ++i) {
      const auto detail =
          savings_detail(gated[i], slots[i].start, in.carbon, in.price, in.mapping,
                         in.device_avg_kwh, in.usage_probs, config.activity_threshold);
      Recommendation rec;
      rec.activity_id = activity.activity_id;
      rec.predicted_start = gated[i].predicted_start;
      rec.duration = gated[i].duration;
      rec.recommended_start = slots[i].start;
      rec.fallback = slots[i].fallback;
      rec.emissions_saving = detail.emissions_saving;
      rec.price_saving = detail.price_saving;
      report.recommendations.push_back(rec);
      report.total_emissions_saving += detail.emissions_saving;
      report.total_price_saving += detail.price_saving;
      emissions_baseline += detail.emissions_baseline;
      price_baseline += detail.price_baseline;
    }
  }
  if (emissions_baseline > 0)
    report.relative_emissions_saving = report.total_emissions_saving / emissions_baseline;
  if (price_baseline > 0)
    report.relative_price_saving = report.total_price_saving / price_baseline;
  return report;
}

std::string render_schedule(const ScheduleReport& report) {
  char buf[160];
  std::string out;
  out += "Schedule for " + format_date(civil_from_hour(report.horizon_start).date) + "\n";
  std::snprintf(buf, sizeof(buf), "Greenest hour of the day: %02d:00\n", report.greenest_hour);
  out += buf;
  std::snprintf(buf, sizeof(buf), "Cheapest hour of the day: %02d:00\n", report.cheapest_hour);
  out += buf;
  out += "\n";
  if (report.recommendations.empty()) {
    out += "No recommendations for this day.\n";
  } else {
    std::snprintf(buf, sizeof(buf), "%-18s %-10s %-9s %-20s\n", "Activity", "Predicted",
                  "Duration", "Best beginning hour");
    out += buf;
    for (const auto& r : report.recommendations) {
      std::snprintf(buf, sizeof(buf), "%-18s %02d:00      %d h       %02d:00%s\n",
                    r.activity_id.c_str(), r.predicted_start, r.duration, r.recommended_start,
                    r.fallback ? " (kept)" : "");
      out += buf;
    }
  }
  out += "\n";
  std::snprintf(buf, sizeof(buf), "Total emissions saving: %.1f gCO2 (%.1f%%)\n",
                report.total_emissions_saving, 100.0 * report.relative_emissions_saving);
  out += buf;
  std::snprintf(buf, sizeof(buf), "Total price saving:     %.4f per-kWh units (%.1f%%)\n",
                report.total_price_saving, 100.0 * report.relative_price_saving);
  out += buf;
  return out;
}

std::string schedule_to_json(const ScheduleReport& report) {
  nlohmann::ordered_json j;
  j["horizon_start"] = format_hour(report.horizon_start);
  j["greenest_hour"] = report.greenest_hour;
  j["cheapest_hour"] = report.cheapest_hour;
  j["config"] = {{"aval_off", report.config.aval_off},
                 {"emissions_ratio", report.config.emissions_ratio},
                 {"availability_threshold", report.config.availability_threshold},
                 {"activity_threshold", report.config.activity_threshold}};
  j["recommendations"] = nlohmann::ordered_json::array();
  for (const auto& r : report.recommendations)
    j["recommendations"].push_back({{"activity", r.activity_id},
                                    {"predicted_start", r.predicted_start},
                                    {"duration", r.duration},
                                    {"recommended_start", r.recommended_start},
                                    {"emissions_saving", r.emissions_saving},
                                    {"price_saving", r.price_saving},
                                    {"fallback", r.fallback}});
  j["total_emissions_saving"] = report.total_emissions_saving;
  j["total_price_saving"] = report.total_price_saving;
  j["relative_emissions_saving"] = report.relative_emissions_saving;
  j["relative_price_saving"] = report.relative_price_saving;
  return j.dump(1) + "\n";
}

}  // namespace loadshift
