#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "loadshift/common.hpp"
#include "loadshift/ingest.hpp"

namespace loadshift {

enum class ModelFamily { logreg, forest, mlp };

ModelFamily family_from_string(const std::string& s);
const char* to_string(ModelFamily f);

// 45 binary columns: month one-hot (12) + day-of-week one-hot (7) +
// hour-of-day one-hot (24) + lag-1 flag + lag-168 flag.
constexpr int kFeatureDim = 45;
constexpr int kLag1Index = 43;
constexpr int kLag168Index = 44;

/// Compact row; columns materialize on demand (at most 5 are ever nonzero).
struct FeatureRow {
  std::uint8_t month = 1;  // 1..12
  std::uint8_t dow = 0;    // 0..6
  std::uint8_t hod = 0;    // 0..23
  std::uint8_t lag1 = 0;
  std::uint8_t lag168 = 0;
};

inline double feature_value(const FeatureRow& r, int j) {
  if (j < 12) return j == r.month - 1 ? 1.0 : 0.0;
  if (j < 19) return j - 12 == r.dow ? 1.0 : 0.0;
  if (j < 43) return j - 19 == r.hod ? 1.0 : 0.0;
  if (j == kLag1Index) return r.lag1;
  return r.lag168;
}

/// Indices of the nonzero columns (3 to 5 of them).
inline int active_indices(const FeatureRow& r, std::array<int, 5>& out) {
  int n = 0;
  out[n++] = r.month - 1;
  out[n++] = 12 + r.dow;
  out[n++] = 19 + r.hod;
  if (r.lag1) out[n++] = kLag1Index;
  if (r.lag168) out[n++] = kLag168Index;
  return n;
}

struct TrainRow {
  FeatureRow x;
  std::uint8_t y = 0;
};

struct HyperParams {
  // logreg
  double l2 = 1e-4;
  // mlp
  int hidden = 16;
  double learning_rate = 0.001;
  // forest
  int trees = 50;
  int max_depth = 6;

  bool operator==(const HyperParams&) const = default;
};

/// Smaller capacity wins ties in tuning: fewer hidden units / trees, larger
/// regularization.
double capacity(ModelFamily family, const HyperParams& hp);

std::vector<HyperParams> default_grid(ModelFamily family);

struct ForestNode {
  int feature = -1;  // -1 = leaf
  int left = -1, right = -1;
  double prob = 0.0;  // leaf positive fraction
};

struct LogRegState {
  std::array<double, kFeatureDim> w{};
  double b = 0.0;
};

struct MlpState {
  int hidden = 0;
  std::vector<double> w1;  // [hidden][kFeatureDim]
  std::vector<double> b1;  // [hidden]
  std::vector<double> w2;  // [hidden]
  double b2 = 0.0;
};

struct ForestState {
  std::vector<std::vector<ForestNode>> trees;
};

struct TrainedModel {
  ModelFamily family = ModelFamily::logreg;
  std::string feature_schema;  // e.g. "time+lag:availability"
  HyperParams hp;
  std::uint64_t seed = 0;
  HourStamp trained_through = 0;  // first hour NOT seen in training
  bool degenerate = false;
  double prior = 0.0;  // emitted when degenerate
  std::variant<LogRegState, MlpState, ForestState> state;

  double predict(const FeatureRow& x) const;
};

TrainedModel train(ModelFamily family, const std::vector<TrainRow>& rows,
                   const std::string& feature_schema, const HyperParams& hp,
                   std::uint64_t seed);

std::array<double, 24> predict_proba(const TrainedModel& model,
                                     const std::array<FeatureRow, 24>& horizon,
                                     const std::string& expected_schema);

struct TuneResult {
  HyperParams best;
  double best_auc = 0.0;  // 0.5 when the validation split is single-class
};

TuneResult tune(ModelFamily family, const std::vector<TrainRow>& train_rows,
                const std::vector<TrainRow>& val_rows, const std::vector<HyperParams>& grid,
                const std::string& feature_schema, std::uint64_t seed);

struct TrainingSchedule {
  int headstart_days = 28;
  int retune_interval_days = 120;
  int training_window_days = 180;
};

/// Which column of the dataset a model predicts.
struct TargetColumn {
  bool availability = true;
  int device = -1;  // used when !availability

  std::string name(const HourlyDataset& ds) const;
};

struct DayForecast {
  int day = 0;                 // 0-based day index into the dataset
  HourStamp horizon_start = 0;
  std::array<double, 24> probs{};
};

struct RollingResult {
  std::vector<DayForecast> days;
  std::vector<int> tune_days;           // day indices where tuning ran
  std::vector<HyperParams> tune_choices;
};

/// One freshly trained model per post-headstart day, each predicting that
/// day's 24 hours; hyperparameters re-tuned on the schedule's cadence.
/// Deterministic for any thread count: per-day seeds are position-derived
/// and tuning runs up front.
RollingResult rolling_fit_predict(const HourlyDataset& ds, const TargetColumn& target,
                                  ModelFamily family, const TrainingSchedule& schedule,
                                  std::uint64_t seed, bool parallel = false);

/// Rows of one dataset day (for prediction) and of an hour range (for
/// training, gap-flagged hours dropped).
std::array<FeatureRow, 24> day_features(const HourlyDataset& ds, const TargetColumn& target,
                                        int day);
std::vector<TrainRow> training_rows(const HourlyDataset& ds, const TargetColumn& target,
                                    std::size_t hour_begin, std::size_t hour_end);

/// Days are midnight-aligned, counted from the first midnight in the data;
/// leading partial hours still serve as training rows, trailing partial days
/// are never predicted.
int dataset_days(const HourlyDataset& ds);
std::size_t day_begin_index(const HourlyDataset& ds, int day);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace loadshift
