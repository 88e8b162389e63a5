#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "loadshift/csv.hpp"
#include "loadshift/predictors.hpp"
#include "support.hpp"

using namespace loadshift;
using testsupport::auc_oracle;
using testsupport::pattern_dataset;
using testsupport::PatternDevice;

namespace {

const auto kEvenings = [](int, int h) { return h >= 18 && h <= 22; };
const auto kNever = [](int, int) { return false; };

// Monday-started fixtures make day_index % 7 == 0 a Monday.
const CivilDate kMonday{2015, 3, 2};

HourlyDataset household(int days, DeviceCatalog* cat = nullptr) {
  return pattern_dataset(
      days, kMonday,
      {{"presence", true, false, kEvenings, 100.0},
       {"washer", false, true, [](int d, int h) { return d % 7 == 0 && h == 10; }, 2000.0},
       {"dishwasher", false, true, [](int d, int h) { return d % 7 == 3 && h == 20; }, 1800.0},
       {"idle", false, true, kNever, 0.0}},
      cat);
}

}  // namespace

TEST_CASE("availability forecast peaks over the nightly presence band") {
  HourlyDataset ds = pattern_dataset(40, kMonday, kEvenings);
  const AvailabilityForecast fc =
      forecast_availability(ds, ModelFamily::logreg, TrainingSchedule{}, 30, 42);
  CHECK(fc.horizon_start == ds.hour_at(day_begin_index(ds, 30)));

  double outside_max = 0.0;
  for (int h = 0; h < 24; ++h)
    if (h < 18 || h > 22) outside_max = std::max(outside_max, fc.probs[h]);
  for (int h = 18; h <= 22; ++h) {
    CHECK(fc.probs[h] > 0.5);
    CHECK(fc.probs[h] > outside_max);
  }
}

TEST_CASE("a never-present household forecasts availability near zero") {
  HourlyDataset ds = pattern_dataset(40, kMonday, kNever);
  const AvailabilityForecast fc =
      forecast_availability(ds, ModelFamily::logreg, TrainingSchedule{}, 30, 42);
  for (double p : fc.probs) CHECK(p < 0.1);
}

TEST_CASE("forecasts inside the headstart are refused") {
  HourlyDataset ds = pattern_dataset(40, kMonday, kEvenings);
  CHECK_THROWS_WITH_AS(forecast_availability(ds, ModelFamily::logreg, TrainingSchedule{}, 27, 42),
                       doctest::Contains("insufficient history"), UserError);
  CHECK_THROWS_AS(forecast_availability(ds, ModelFamily::logreg, TrainingSchedule{}, 40, 42),
                  UserError);  // past the data
  CHECK_NOTHROW(forecast_availability(ds, ModelFamily::logreg, TrainingSchedule{}, 28, 42));
}

TEST_CASE("weekly washer usage peaks at its Monday hour") {
  HourlyDataset ds = household(64);
  const int monday = 35;  // day 35 % 7 == 0
  const UsageForecast fc =
      forecast_usage(ds, "washer", ModelFamily::logreg, TrainingSchedule{}, monday, 42);
  CHECK(fc.device_id == "washer");
  for (int h = 0; h < 24; ++h)
    if (h != 10) CHECK(fc.probs[10] > fc.probs[h]);
}

TEST_CASE("a never-used device forecasts near zero") {
  HourlyDataset ds = household(64);
  const UsageForecast fc =
      forecast_usage(ds, "idle", ModelFamily::logreg, TrainingSchedule{}, 35, 42);
  for (double p : fc.probs) CHECK(p < 0.1);
}

TEST_CASE("devices with independent patterns get distinct forecasts") {
  HourlyDataset ds = household(64);
  const UsageForecast washer =
      forecast_usage(ds, "washer", ModelFamily::logreg, TrainingSchedule{}, 38, 42);
  const UsageForecast dishes =
      forecast_usage(ds, "dishwasher", ModelFamily::logreg, TrainingSchedule{}, 38, 42);
  CHECK(washer.probs != dishes.probs);
}

TEST_CASE("unknown devices are user errors") {
  HourlyDataset ds = household(40);
  CHECK_THROWS_AS(forecast_usage(ds, "sauna", ModelFamily::logreg, TrainingSchedule{}, 30, 42),
                  UserError);
}

TEST_CASE("each target reads its own lag columns and nobody else's") {
  HourlyDataset ds = household(40);
  const int washer_col = ds.device_index("washer");
  REQUIRE(washer_col >= 0);

  TargetColumn avail;
  TargetColumn washer{false, washer_col};
  for (int day : {5, 20, 30}) {
    const auto av_rows = day_features(ds, avail, day);
    const auto wm_rows = day_features(ds, washer, day);
    for (int h = 0; h < 24; ++h) {
      const std::size_t i = day_begin_index(ds, day) + h;
      CHECK(av_rows[h].lag1 == ds.avail_lag1[i]);
      CHECK(av_rows[h].lag168 == ds.avail_lag168[i]);
      CHECK(wm_rows[h].lag1 == ds.usage_lag1[i][washer_col]);
      CHECK(wm_rows[h].lag168 == ds.usage_lag168[i][washer_col]);
    }
  }

  // The schema stamp enforces the separation across save/load boundaries.
  const TrainedModel m = fit_for_day(ds, washer, ModelFamily::logreg, TrainingSchedule{}, 30, 42);
  CHECK(m.feature_schema == "time+lag:washer");
  CHECK_THROWS_AS(predict_proba(m, day_features(ds, avail, 30), "time+lag:availability"),
                  UserError);
}

TEST_CASE("forecast_availability is deterministic for a fixed seed") {
  HourlyDataset ds = pattern_dataset(40, kMonday, kEvenings);
  for (ModelFamily family : {ModelFamily::logreg, ModelFamily::mlp, ModelFamily::forest}) {
    const AvailabilityForecast a =
        forecast_availability(ds, family, TrainingSchedule{}, 32, 42);
    const AvailabilityForecast b =
        forecast_availability(ds, family, TrainingSchedule{}, 32, 42);
    CHECK(a.probs == b.probs);
  }
}

TEST_CASE("fit_for_day reproduces the rolling pipeline exactly") {
  HourlyDataset ds = household(45);
  TargetColumn target;
  const RollingResult rolled =
      rolling_fit_predict(ds, target, ModelFamily::logreg, TrainingSchedule{}, 42);
  for (int day : {28, 33, 44}) {
    const TrainedModel m =
        fit_for_day(ds, target, ModelFamily::logreg, TrainingSchedule{}, day, 42);
    CHECK(m.trained_through == ds.hour_at(day_begin_index(ds, day)));
    const auto probs = predict_proba(m, day_features(ds, target, day), m.feature_schema);
    CHECK(probs == rolled.days[static_cast<std::size_t>(day - 28)].probs);
  }
}

TEST_CASE("only catalog-shiftable devices are forecastable") {
  DeviceCatalog cat;
  HourlyDataset ds = household(40, &cat);
  const std::vector<int> devices = forecastable_devices(ds, cat);
  std::vector<std::string> names;
  for (int d : devices) names.push_back(ds.device_ids[static_cast<std::size_t>(d)]);
  CHECK(names == std::vector<std::string>{"washer", "dishwasher", "idle"});  // presence is not shiftable
}

TEST_CASE("the forecast table matches the per-target rolling runs") {
  DeviceCatalog cat;
  HourlyDataset ds = household(45, &cat);
  const ForecastTable table =
      build_forecast_table(ds, cat, ModelFamily::logreg, TrainingSchedule{}, 42, false);

  CHECK(table.first_day() == 28);
  CHECK(table.n_days() == 45 - 28);
  REQUIRE(table.device_id == std::vector<std::string>{"washer", "dishwasher", "idle"});

  TargetColumn avail;
  const RollingResult direct =
      rolling_fit_predict(ds, avail, ModelFamily::logreg, TrainingSchedule{}, 42);
  REQUIRE(direct.days.size() == table.availability.days.size());
  for (std::size_t k = 0; k < direct.days.size(); ++k)
    CHECK(direct.days[k].probs == table.availability.days[k].probs);

  TargetColumn washer{false, ds.device_index("washer")};
  const RollingResult washer_direct =
      rolling_fit_predict(ds, washer, ModelFamily::logreg, TrainingSchedule{}, 42);
  for (std::size_t k = 0; k < washer_direct.days.size(); ++k)
    CHECK(washer_direct.days[k].probs == table.usage[0].days[k].probs);

  const auto matrix = table.usage_matrix(3);
  REQUIRE(matrix.size() == 24);
  for (int h = 0; h < 24; ++h) {
    REQUIRE(matrix[h].size() == 3);
    CHECK(matrix[h][0] == table.usage[0].days[3].probs[h]);
    CHECK(matrix[h][2] == table.usage[2].days[3].probs[h]);
  }
}

TEST_CASE("parallel and serial table builds are bit-identical") {
  DeviceCatalog cat;
  HourlyDataset ds = household(42, &cat);
  const ForecastTable serial =
      build_forecast_table(ds, cat, ModelFamily::logreg, TrainingSchedule{}, 42, false);
  const ForecastTable threaded =
      build_forecast_table(ds, cat, ModelFamily::logreg, TrainingSchedule{}, 42, true);

  REQUIRE(serial.n_days() == threaded.n_days());
  for (int k = 0; k < serial.n_days(); ++k) {
    CHECK(serial.availability.days[k].probs == threaded.availability.days[k].probs);
    for (std::size_t j = 0; j < serial.usage.size(); ++j)
      CHECK(serial.usage[j].days[k].probs == threaded.usage[j].days[k].probs);
  }
}

TEST_CASE("periodic presence is learned well by the neural net") {
  HourlyDataset ds = pattern_dataset(60, kMonday, kEvenings);
  TargetColumn target;
  const RollingResult res =
      rolling_fit_predict(ds, target, ModelFamily::mlp, TrainingSchedule{}, 42);

  double auc_sum = 0.0;
  int scored = 0;
  for (const auto& day : res.days) {
    std::vector<double> scores(day.probs.begin(), day.probs.end());
    std::vector<std::uint8_t> labels;
    for (int h = 0; h < 24; ++h) labels.push_back(kEvenings(day.day, h) ? 1 : 0);
    const double auc = auc_oracle(scores, labels);
    REQUIRE(auc >= 0.0);
    auc_sum += auc;
    ++scored;
  }
  REQUIRE(scored == 32);
  CHECK(auc_sum / scored >= 0.9);
}

TEST_CASE("forecast export is an exact day,hour,prob table") {
  HourlyDataset ds = pattern_dataset(32, kMonday, kEvenings);
  TargetColumn target;
  const RollingResult res =
      rolling_fit_predict(ds, target, ModelFamily::logreg, TrainingSchedule{}, 42);
  const std::string path =
      (testsupport::tmp_dir("loadshift_test_predictors") / "forecasts.csv").string();
  save_forecasts(res, "availability", path);

  const auto lines = csv::read_lines(path);
  REQUIRE(lines.size() == 1 + res.days.size() * 24);
  CHECK(lines[0] == "target,day,hour,prob");
  const auto first = csv::split(lines[1]);
  REQUIRE(first.size() == 4);
  CHECK(first[0] == "availability");
  CHECK(first[1] == "28");
  CHECK(first[2] == "0");
  double prob = -1.0;
  REQUIRE(csv::parse_double(first[3], prob));
  CHECK(prob == res.days[0].probs[0]);  // format_exact round-trips exactly
}
