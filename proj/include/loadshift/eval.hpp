#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "loadshift/activity.hpp"
#include "loadshift/ingest.hpp"
#include "loadshift/predictors.hpp"
#include "loadshift/recommend.hpp"
#include "loadshift/signals.hpp"

namespace loadshift {

struct AucSummary {
  std::vector<double> per_day;  // skipped days excluded
  double mean = 0.0;
  int skipped_days = 0;
};

/// Tie-corrected rank AUC; nullopt = single-class input (skip signal).
std::optional<double> auc(const std::vector<double>& scores,
                          const std::vector<std::uint8_t>& labels);

std::vector<std::set<int>> identifying_devices(const ActivityMapping& mapping);

std::set<int> target_activity_set(const std::vector<double>& usage_probs_hour, double use_th,
                                  const ActivityMapping& mapping);

std::set<int> predicted_activity_set(const std::vector<double>& activity_probs_hour,
                                     double act_th);

/// Fraction of the 24 hourly pairs whose sets are equal.
double equal_score(const std::vector<std::pair<std::set<int>, std::set<int>>>& day);

struct EvalThresholds {
  double use_th = 0.5;
  double act_th = 0.5;
};

struct AgentScores {
  AucSummary availability;
  std::vector<std::string> device_id;
  std::vector<AucSummary> usage;
  std::vector<double> equal_per_day;
  double equal_mean = 0.0;
  EvalThresholds thresholds;
};

/// Per-day AUC for the availability and usage agents plus the EQUAL score of
/// the activity agent, all from one forecast table.
AgentScores score_agents(const HourlyDataset& ds, const ForecastTable& table,
                         const ActivityMapping& mapping, const EvalThresholds& th);

enum class ColdStartAgent { availability, usage, activity };

struct ColdStartResult {
  std::vector<int> training_days;
  std::vector<double> scores;
  std::optional<int> days_to_threshold;  // nullopt = never reached
  std::uint64_t test_set_hash = 0;       // constant across curve points
};

struct ColdStartSpec {
  ColdStartAgent agent = ColdStartAgent::availability;
  std::string device_id;  // for usage
  ModelFamily family = ModelFamily::mlp;
  double threshold = 0.79;
  int test_days = 20;     // fixed tail of the dataset
  int step_days = 1;
  EvalThresholds eval_th;
};

ColdStartResult cold_start(const HourlyDataset& ds, const ActivityMapping& mapping,
                           const DeviceCatalog& catalog, const ColdStartSpec& spec,
                           std::uint64_t seed, bool parallel = false);

struct SavingsReport {
  int recommendations_per_year = 0;  // accepted recommendations in the period
  double recommendations_per_day = 0.0;
  double total_emissions_saving = 0.0;
  double relative_emissions_saving = 0.0;
  double total_price_saving = 0.0;
  double relative_price_saving = 0.0;
  int days_evaluated = 0;
  // timing histograms over accepted recommendations (plot-data export)
  std::array<int, 24> predicted_start_hist{};
  std::array<int, 24> recommended_start_hist{};
};

struct SignalPair {
  const SignalSource& carbon;
  const SignalSource& price;
  /// When set, signal lookups map each day onto this calendar year.
  std::optional<int> signal_year;
};

/// Replays the scheduler over the period, keeps recommendations that match
/// true availability at the predicted start and true usage of an identifying
/// device inside the instance window, and prices the savings with the true
/// per-device energy.
SavingsReport simulate_savings(const HourlyDataset& ds, const SignalPair& signals,
                               const ActivityMapping& mapping, const DeviceCatalog& catalog,
                               const RecommendationConfig& config, const ForecastTable& table,
                               int first_day = -1, int last_day = -1, bool parallel = false);

struct GridPoint {
  RecommendationConfig config;
  SavingsReport report;
};

struct GridSearchResult {
  std::vector<GridPoint> table;
  std::size_t best_index = 0;
};

enum class Objective { emissions, price };

struct Grids {
  std::vector<bool> aval_off{true, false};
  std::vector<double> avail_th{0.15, 0.3, 0.5};
  std::vector<double> act_th{0.15, 0.3, 0.5};
};

GridSearchResult grid_search(const HourlyDataset& ds, const SignalPair& signals,
                             const ActivityMapping& mapping, const DeviceCatalog& catalog,
                             const RecommendationConfig& base, const Grids& grids,
                             Objective objective, const ForecastTable& table,
                             bool parallel = false);

}  // namespace loadshift
