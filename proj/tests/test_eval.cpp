#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "loadshift/eval.hpp"
#include "support.hpp"

using namespace loadshift;
using loadshift::testsupport::auc_oracle;
using loadshift::testsupport::PatternDevice;
using loadshift::testsupport::pattern_dataset;

namespace {

const CivilDate kMonday{2015, 3, 2};

ActivityMapping small_mapping() {
  ActivityMapping m;
  m.device_ids = {"oven", "kettle", "washing_machine"};
  m.activities = {
      {"Cooking", {1, 1, 0}, Flexibility::inflexible},
      {"Laundering", {0, 0, 1}, Flexibility::flexible},
  };
  m.validate();
  return m;
}

/// Signal whose value depends only on the hour of day; unlimited coverage.
class HourShapeSource final : public SignalSource {
public:
  HourShapeSource(SignalKind kind, std::function<double(int)> value)
      : kind_(kind), value_(std::move(value)) {}
  SignalKind kind() const override { return kind_; }
  std::string describe() const override { return "test-shape"; }
  bool value_at(HourStamp hour, double& out) const override {
    out = value_(civil_from_hour(hour).hour);
    return true;
  }

private:
  SignalKind kind_;
  std::function<double(int)> value_;
};

/// Forecast table filled from (day, hour) functions instead of models, so
/// every downstream number has a pencil-and-paper oracle.
ForecastTable hand_table(const HourlyDataset& ds, int first_day, int n_days,
                         const std::vector<std::string>& ids,
                         const std::function<double(int, int)>& avail_prob,
                         const std::function<double(const std::string&, int, int)>& usage_prob) {
  ForecastTable t;
  t.schedule.headstart_days = first_day;
  for (const auto& id : ids) {
    const int col = ds.device_index(id);
    REQUIRE(col >= 0);
    t.device_id.push_back(id);
    t.device_index.push_back(col);
  }
  t.usage.resize(ids.size());
  for (int k = 0; k < n_days; ++k) {
    const int day = first_day + k;
    DayForecast av;
    av.day = day;
    av.horizon_start = ds.hour_at(day_begin_index(ds, day));
    for (int h = 0; h < 24; ++h) av.probs[h] = avail_prob(day, h);
    t.availability.days.push_back(av);
    for (std::size_t j = 0; j < ids.size(); ++j) {
      DayForecast u = av;
      for (int h = 0; h < 24; ++h) u.probs[h] = usage_prob(ids[j], day, h);
      t.usage[j].days.push_back(u);
    }
  }
  return t;
}

}  // namespace

TEST_CASE("rank AUC agrees with the published pairwise definition") {
  SUBCASE("perfect and inverted rankings") {
    CHECK(*auc({0, 1, 0, 1}, {0, 1, 0, 1}) == 1.0);
    CHECK(*auc({1, 0, 1, 0}, {0, 1, 0, 1}) == 0.0);
  }
  SUBCASE("four-sample hand example") {
    // pos-neg pairs: (0.35 vs 0.1) win, (0.35 vs 0.4) loss, (0.8 vs both) wins
    CHECK(*auc({0.1, 0.4, 0.35, 0.8}, {0, 0, 1, 1}) == doctest::Approx(0.75).epsilon(1e-12));
  }
  SUBCASE("all-tied scores land at one half") {
    CHECK(*auc({0.3, 0.3, 0.3, 0.3}, {0, 1, 0, 1}) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("single-class inputs signal a skip") {
    CHECK_FALSE(auc({0.2, 0.8}, {1, 1}).has_value());
    CHECK_FALSE(auc({0.2, 0.8}, {0, 0}).has_value());
    CHECK_FALSE(auc({}, {}).has_value());
  }
  SUBCASE("length mismatch is a caller bug") {
    CHECK_THROWS_AS(auc({0.1}, {0, 1}), std::invalid_argument);
  }
  SUBCASE("matches brute force on every labeling of up to 12 samples") {
    std::mt19937_64 rng(211);
    const double alphabet[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (int n = 1; n <= 12; ++n) {
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<double> scores(n);
        std::vector<std::uint8_t> labels(n);
        for (int i = 0; i < n; ++i) {
          scores[i] = alphabet[rng() % 5];  // few values so ties occur
          labels[i] = (mask >> i) & 1;
        }
        const double expect = auc_oracle(scores, labels);
        const auto got = auc(scores, labels);
        if (expect < 0) {
          CHECK_FALSE(got.has_value());
        } else {
          REQUIRE(got.has_value());
          CHECK(*got == doctest::Approx(expect).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("identifying devices partition the device set") {
  const ActivityMapping m = small_mapping();
  const auto ids = identifying_devices(m);
  REQUIRE(ids.size() == 2);
  CHECK(ids[0] == std::set<int>{0, 1});  // the multi-device activity
  CHECK(ids[1] == std::set<int>{2});

  std::set<int> all;
  std::size_t total = 0;
  for (const auto& s : ids) {
    total += s.size();
    all.insert(s.begin(), s.end());
  }
  CHECK(all.size() == m.device_ids.size());  // union covers every device
  CHECK(total == m.device_ids.size());       // with no overlaps
}

TEST_CASE("hourly target and predicted activity sets") {
  const ActivityMapping m = small_mapping();
  SUBCASE("all-zero usage maps to the empty set") {
    CHECK(target_activity_set({0, 0, 0}, 0.5, m).empty());
  }
  SUBCASE("one device above threshold names its activity") {
    CHECK(target_activity_set({0.1, 0.2, 0.9}, 0.5, m) == std::set<int>{1});
  }
  SUBCASE("devices of different activities union their activities") {
    CHECK(target_activity_set({0.8, 0.0, 0.9}, 0.5, m) == std::set<int>{0, 1});
  }
  SUBCASE("the threshold is strict") {
    CHECK(target_activity_set({0.5, 0.5, 0.5}, 0.5, m).empty());
    CHECK(predicted_activity_set({0.5, 0.5}, 0.5).empty());
  }
  SUBCASE("predicted set thresholds the activity probabilities directly") {
    CHECK(predicted_activity_set({0.6, 0.1}, 0.5) == std::set<int>{0});
    CHECK(predicted_activity_set({0.0, 0.0}, 0.5).empty());
  }
}

TEST_CASE("EQUAL is the fraction of matching hourly sets") {
  using Pairs = std::vector<std::pair<std::set<int>, std::set<int>>>;
  Pairs day(24);
  SUBCASE("all equal, including empty-vs-empty") {
    day[3] = {{0, 1}, {1, 0}};  // set semantics, insertion order irrelevant
    CHECK(equal_score(day) == 1.0);
  }
  SUBCASE("nineteen of twenty-four") {
    for (int h = 0; h < 5; ++h) day[h] = {{0}, {}};
    CHECK(equal_score(day) == doctest::Approx(19.0 / 24.0).epsilon(1e-12));
    CHECK(equal_score(day) == doctest::Approx(0.7917).epsilon(1e-4));
  }
  SUBCASE("eleven of twenty-four") {
    for (int h = 0; h < 13; ++h) day[h] = {{0}, {1}};
    CHECK(equal_score(day) == doctest::Approx(11.0 / 24.0).epsilon(1e-12));
    CHECK(equal_score(day) == doctest::Approx(0.4583).epsilon(1e-4));
  }
  SUBCASE("a day must have exactly 24 pairs") {
    day.pop_back();
    CHECK_THROWS_AS(equal_score(day), std::invalid_argument);
  }
}

TEST_CASE("agent scoring reproduces per-day oracles from a hand-built table") {
  // oven cooks at 10 daily except day 31; day 29 adds a two-activity hour.
  // presence is away nightly except day 30 (home around the clock).
  const int days = 33;
  const auto oven_on = [](int d, int h) {
    return (h == 10 && d != 31) || (d == 29 && h == 15);
  };
  const auto wm_on = [](int d, int h) { return d == 29 && h == 15; };
  const auto presence_on = [](int d, int h) { return d == 30 || (h >= 18 && h <= 22); };
  DeviceCatalog catalog;
  const HourlyDataset ds =
      pattern_dataset(days, kMonday,
                      {{"oven", false, true, oven_on, 1000.0},
                       {"kettle", false, true, [](int, int) { return false; }, 800.0},
                       {"washing_machine", false, true, wm_on, 2000.0},
                       {"presence", true, false, presence_on, 100.0}},
                      &catalog);
  const ActivityMapping m = small_mapping();

  // Forecasts that echo the ground truth exactly.
  const auto table = hand_table(
      ds, 28, 5, {"oven", "kettle", "washing_machine"},
      [&](int d, int h) {
        return static_cast<double>(ds.availability[day_begin_index(ds, d) + h]);
      },
      [&](const std::string& id, int d, int h) {
        return static_cast<double>(ds.usage[day_begin_index(ds, d) + h][ds.device_index(id)]);
      });

  const auto scores = score_agents(ds, table, m, EvalThresholds{0.5, 0.5});

  // Availability: echoing the labels scores 1.0; the all-home day is skipped.
  CHECK(scores.availability.per_day.size() == 4);
  CHECK(scores.availability.skipped_days == 1);
  for (double v : scores.availability.per_day) CHECK(v == 1.0);
  CHECK(scores.availability.mean == 1.0);

  // Cross-check each scored day against the brute-force oracle.
  {
    std::size_t next = 0;
    for (int k = 0; k < 5; ++k) {
      const std::size_t begin = day_begin_index(ds, 28 + k);
      std::vector<double> s;
      std::vector<std::uint8_t> l;
      for (int h = 0; h < 24; ++h) {
        s.push_back(table.availability.days[k].probs[h]);
        l.push_back(ds.availability[begin + h]);
      }
      const double expect = auc_oracle(s, l);
      if (expect < 0) continue;
      REQUIRE(next < scores.availability.per_day.size());
      CHECK(scores.availability.per_day[next++] == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  REQUIRE(scores.device_id == std::vector<std::string>{"oven", "kettle", "washing_machine"});
  CHECK(scores.usage[0].per_day.size() == 4);  // oven idle on day 31
  CHECK(scores.usage[0].skipped_days == 1);
  CHECK(scores.usage[0].mean == 1.0);
  CHECK(scores.usage[1].per_day.empty());  // kettle never runs
  CHECK(scores.usage[1].skipped_days == 5);
  CHECK(scores.usage[1].mean == 0.0);
  CHECK(scores.usage[2].per_day.size() == 1);  // washing machine runs once
  CHECK(scores.usage[2].skipped_days == 4);

  // EQUAL: 0/1 forecasts agree everywhere except the constructed hour where
  // two activities run at once and neither wins the vote.
  REQUIRE(scores.equal_per_day.size() == 5);
  CHECK(scores.equal_per_day[0] == 1.0);
  CHECK(scores.equal_per_day[1] == doctest::Approx(23.0 / 24.0).epsilon(1e-12));
  CHECK(scores.equal_per_day[2] == 1.0);
  CHECK(scores.equal_per_day[3] == 1.0);
  CHECK(scores.equal_per_day[4] == 1.0);
  CHECK(scores.equal_mean == doctest::Approx((4.0 + 23.0 / 24.0) / 5.0).epsilon(1e-12));

  // Longhand recomputation of every day's EQUAL from the table itself.
  for (int k = 0; k < 5; ++k) {
    std::vector<std::pair<std::set<int>, std::set<int>>> pairs;
    for (int h = 0; h < 24; ++h) {
      std::vector<double> usage(3);
      for (int j = 0; j < 3; ++j) usage[j] = table.usage[j].days[k].probs[h];
      pairs.emplace_back(target_activity_set(usage, 0.5, m),
                         predicted_activity_set(activity_probs(usage, m), 0.5));
    }
    CHECK(scores.equal_per_day[k] == doctest::Approx(equal_score(pairs)).epsilon(1e-12));
  }

  SUBCASE("mapping devices without forecasts are rejected") {
    const auto partial = hand_table(ds, 28, 5, {"oven", "kettle"},
                                    [](int, int) { return 0.0; },
                                    [](const std::string&, int, int) { return 0.0; });
    CHECK_THROWS_WITH_AS(score_agents(ds, partial, m, EvalThresholds{}),
                         doctest::Contains("without usage forecasts"), UserError);
  }
}

TEST_CASE("cold start walks growing training prefixes over one fixed test set") {
  // 55 days: evenings away-pattern presence, a separable oven, a coin-flip
  // device. 20 test days leave prefixes of 28..35 days.
  std::mt19937_64 noise_rng(997);
  std::vector<std::uint8_t> noise(55 * 24);
  for (auto& v : noise) v = noise_rng() % 10 < 3;
  DeviceCatalog catalog;
  const HourlyDataset ds = pattern_dataset(
      55, kMonday,
      {{"presence", true, false, [](int, int h) { return h >= 18 && h <= 22; }, 100.0},
       {"oven", false, true, [](int, int h) { return h == 10; }, 1000.0},
       {"tv", false, true, [](int, int h) { return h == 18; }, 200.0},
       {"coin", false, true, [&](int d, int h) { return noise[d * 24 + h] != 0; }, 500.0}},
      &catalog);

  ActivityMapping m;
  m.device_ids = {"oven", "tv"};
  m.activities = {{"Cooking", {1, 0}, Flexibility::inflexible},
                  {"Entertaining", {0, 1}, Flexibility::slightly_flexible}};
  m.validate();

  ColdStartSpec spec;
  spec.family = ModelFamily::logreg;

  SUBCASE("separable availability clears the bar at the first prefix") {
    const auto r = cold_start(ds, m, catalog, spec, 42);
    CHECK(r.training_days.front() == 28);
    CHECK(r.training_days.back() == 35);
    CHECK(r.training_days.size() == 8);
    for (double s : r.scores) {
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
    REQUIRE(r.days_to_threshold.has_value());
    CHECK(*r.days_to_threshold == 28);

    // Same inputs, different threshold: identical curve and test-set hash.
    ColdStartSpec relaxed = spec;
    relaxed.threshold = 0.0;
    const auto r2 = cold_start(ds, m, catalog, relaxed, 42);
    CHECK(r2.test_set_hash == r.test_set_hash);
    CHECK(r2.scores == r.scores);
    CHECK(*r2.days_to_threshold == 28);
  }
  SUBCASE("a coin-flip device never reaches the bar") {
    ColdStartSpec usage = spec;
    usage.agent = ColdStartAgent::usage;
    usage.device_id = "coin";
    const auto r = cold_start(ds, m, catalog, usage, 42);
    CHECK_FALSE(r.days_to_threshold.has_value());
    for (double s : r.scores) CHECK(s < 0.79);
    // distinct target, distinct test set identity
    CHECK(r.test_set_hash != cold_start(ds, m, catalog, spec, 42).test_set_hash);
  }
  SUBCASE("a separable usage target clears the bar immediately") {
    ColdStartSpec usage = spec;
    usage.agent = ColdStartAgent::usage;
    usage.device_id = "oven";
    usage.step_days = 3;
    const auto r = cold_start(ds, m, catalog, usage, 42);
    CHECK(r.training_days == std::vector<int>{28, 31, 34});
    REQUIRE(r.days_to_threshold.has_value());
    CHECK(*r.days_to_threshold == 28);
  }
  SUBCASE("the activity curve scores EQUAL instead of AUC") {
    ColdStartSpec act = spec;
    act.agent = ColdStartAgent::activity;
    act.threshold = 0.65;
    act.step_days = 7;
    const auto r = cold_start(ds, m, catalog, act, 42);
    CHECK(r.training_days == std::vector<int>{28, 35});
    for (double s : r.scores) {
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
    // the crossing point is calibration-dependent; the contract is that it is
    // the first curve point at or above the threshold
    std::optional<int> expect;
    for (std::size_t i = 0; i < r.scores.size(); ++i)
      if (r.scores[i] >= act.threshold) {
        expect = r.training_days[i];
        break;
      }
    CHECK(r.days_to_threshold == expect);
    REQUIRE(r.days_to_threshold.has_value());
    const auto r2 = cold_start(ds, m, catalog, act, 42);
    CHECK(r2.scores == r.scores);  // deterministic end to end
  }
  SUBCASE("error paths") {
    ColdStartSpec bad = spec;
    bad.agent = ColdStartAgent::usage;
    bad.device_id = "sauna";
    CHECK_THROWS_AS(cold_start(ds, m, catalog, bad, 42), UserError);

    DeviceCatalog cat2;
    const HourlyDataset short_ds = pattern_dataset(
        40, kMonday,
        {{"presence", true, false, [](int, int h) { return h >= 18 && h <= 22; }, 100.0}},
        &cat2);
    CHECK_THROWS_WITH_AS(cold_start(short_ds, m, cat2, spec, 42),
                         doctest::Contains("insufficient history"), UserError);
  }
}

TEST_CASE("savings simulation keeps only recommendations the household accepts") {
  // Oven cooks at 10 on even days; the household is home 9..12 except every
  // third day. Forecasts always propose the 10 o'clock cook.
  const int days = 34;
  DeviceCatalog catalog;
  const HourlyDataset ds = pattern_dataset(
      days, kMonday,
      {{"oven", false, true, [](int d, int h) { return h == 10 && d % 2 == 0; }, 1000.0},
       {"kettle", false, true, [](int, int) { return false; }, 800.0},
       {"washing_machine", false, true, [](int, int) { return false; }, 2000.0},
       {"presence", true, false,
        [](int d, int h) { return h >= 9 && h <= 12 && d % 3 != 0; }, 100.0}},
      &catalog);
  const ActivityMapping m = small_mapping();

  const auto table = hand_table(
      ds, 28, 6, {"oven", "kettle", "washing_machine"},
      [](int, int) { return 1.0; },
      [](const std::string& id, int, int h) { return id == "oven" && h == 10 ? 0.9 : 0.0; });

  const HourShapeSource carbon(SignalKind::carbon, [](int h) { return 200.0 + 10.0 * h; });
  const HourShapeSource price(SignalKind::price, [](int h) { return 100.0; });
  const SignalPair signals{carbon, price, std::nullopt};

  RecommendationConfig cfg;  // defaults: r = 1, thresholds 0.15

  SUBCASE("totals match the hand sum over accepted days") {
    const auto report = simulate_savings(ds, signals, m, catalog, cfg, table);
    // even day AND not a multiple of 3 within 28..33: days 28 and 32
    CHECK(report.days_evaluated == 6);
    CHECK(report.recommendations_per_year == 2);
    CHECK(report.recommendations_per_day == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
    // each accepted cook: 1 kWh shifted from carbon 300 to carbon 290
    CHECK(report.total_emissions_saving == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(report.relative_emissions_saving ==
          doctest::Approx(20.0 / 600.0).epsilon(1e-12));
    CHECK(report.total_price_saving == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(report.predicted_start_hist[10] == 2);
    CHECK(report.recommended_start_hist[9] == 2);
    for (int h = 0; h < 24; ++h) {
      if (h != 10) CHECK(report.predicted_start_hist[h] == 0);
      if (h != 9) CHECK(report.recommended_start_hist[h] == 0);
    }
  }
  SUBCASE("a sub-period counts only its own days") {
    const auto report = simulate_savings(ds, signals, m, catalog, cfg, table, 28, 30);
    CHECK(report.days_evaluated == 2);
    CHECK(report.recommendations_per_year == 1);  // day 29 is odd
    CHECK(report.total_emissions_saving == doctest::Approx(10.0).epsilon(1e-12));
  }
  SUBCASE("no acceptable recommendation means an all-zero report") {
    const auto report = simulate_savings(ds, signals, m, catalog, cfg, table, 29, 32);
    CHECK(report.days_evaluated == 3);  // odd, every-third, odd
    CHECK(report.recommendations_per_year == 0);
    CHECK(report.total_emissions_saving == 0.0);
    CHECK(report.relative_emissions_saving == 0.0);
    CHECK(report.relative_price_saving == 0.0);
  }
  SUBCASE("periods outside the forecast range are rejected") {
    CHECK_THROWS_WITH_AS(simulate_savings(ds, signals, m, catalog, cfg, table, 27, 30),
                         doctest::Contains("outside the forecast range"), UserError);
    CHECK_THROWS_AS(simulate_savings(ds, signals, m, catalog, cfg, table, 28, 35), UserError);
    CHECK_THROWS_AS(simulate_savings(ds, signals, m, catalog, cfg, table, 30, 30), UserError);
  }
  SUBCASE("parallel replay reproduces the serial report byte for byte") {
    const auto serial = simulate_savings(ds, signals, m, catalog, cfg, table, -1, -1, false);
    const auto par = simulate_savings(ds, signals, m, catalog, cfg, table, -1, -1, true);
    CHECK(par.recommendations_per_year == serial.recommendations_per_year);
    CHECK(par.total_emissions_saving == serial.total_emissions_saving);
    CHECK(par.total_price_saving == serial.total_price_saving);
    CHECK(par.relative_emissions_saving == serial.relative_emissions_saving);
    CHECK(par.relative_price_saving == serial.relative_price_saving);
    CHECK(par.predicted_start_hist == serial.predicted_start_hist);
    CHECK(par.recommended_start_hist == serial.recommended_start_hist);
  }
}

TEST_CASE("the emissions ratio trades emissions savings against price savings") {
  // A flexible evening wash, carbon cheapest at midnight, price cheapest at
  // hour 20: the two objectives pull the recommendation in opposite ways.
  const int days = 34;
  DeviceCatalog catalog;
  const HourlyDataset ds = pattern_dataset(
      days, kMonday,
      {{"washing_machine", false, true, [](int, int h) { return h == 18; }, 2000.0},
       {"oven", false, true, [](int, int) { return false; }, 1000.0},
       {"kettle", false, true, [](int, int) { return false; }, 800.0},
       {"presence", true, false, [](int, int h) { return h >= 17 && h <= 22; }, 100.0}},
      &catalog);
  const ActivityMapping m = small_mapping();

  const auto table = hand_table(
      ds, 28, 6, {"oven", "kettle", "washing_machine"},
      [](int, int) { return 1.0; },
      [](const std::string& id, int, int h) {
        return id == "washing_machine" && h == 18 ? 0.8 : 0.0;
      });

  const HourShapeSource carbon(SignalKind::carbon, [](int h) { return 200.0 + 10.0 * h; });
  const HourShapeSource price(SignalKind::price,
                              [](int h) { return 100.0 + 4.0 * std::abs(h - 20); });
  const SignalPair signals{carbon, price, std::nullopt};

  const auto run = [&](double r) {
    RecommendationConfig cfg;
    cfg.emissions_ratio = r;
    return simulate_savings(ds, signals, m, catalog, cfg, table);
  };
  const auto full = run(1.0), half = run(0.5), none = run(0.0);

  // all six days accept the wash; only the recommended hour moves with r
  CHECK(full.recommendations_per_year == 6);
  CHECK(half.recommendations_per_year == 6);
  CHECK(none.recommendations_per_year == 6);
  CHECK(full.recommended_start_hist[0] == 6);   // chase the carbon minimum
  CHECK(none.recommended_start_hist[20] == 6);  // chase the price minimum

  CHECK(full.total_emissions_saving >= half.total_emissions_saving - 1e-9);
  CHECK(half.total_emissions_saving >= none.total_emissions_saving - 1e-9);
  CHECK(none.total_price_saving >= half.total_price_saving - 1e-9);
  CHECK(half.total_price_saving >= full.total_price_saving - 1e-9);
  CHECK(full.total_emissions_saving > none.total_emissions_saving);
  CHECK(none.total_price_saving > full.total_price_saving);

  // chasing carbon costs money here, and the relative gap shows it
  CHECK(full.total_emissions_saving == doctest::Approx(6 * 2.0 * 180.0).epsilon(1e-9));
  CHECK(full.total_price_saving < 0.0);
  CHECK(full.relative_emissions_saving > full.relative_price_saving);
}

TEST_CASE("grid search sweeps the documented lattice and keeps the best point") {
  // Forecast probabilities sit at 0.4: between the low and high threshold
  // candidates, so the grid genuinely changes what gets scheduled.
  const int days = 34;
  DeviceCatalog catalog;
  const HourlyDataset ds = pattern_dataset(
      days, kMonday,
      {{"washing_machine", false, true, [](int, int h) { return h == 18; }, 2000.0},
       {"oven", false, true, [](int d, int h) { return h == 10; }, 1000.0},
       {"kettle", false, true, [](int, int) { return false; }, 800.0},
       {"tv", false, true, [](int, int) { return false; }, 200.0},
       {"presence", true, false, [](int, int h) { return h >= 9 && h <= 22; }, 100.0}},
      &catalog);
  ActivityMapping m;
  m.device_ids = {"oven", "kettle", "washing_machine", "tv"};
  m.activities = {{"Cooking", {1, 1, 0, 0}, Flexibility::inflexible},
                  {"Laundering", {0, 0, 1, 0}, Flexibility::flexible},
                  {"Entertaining", {0, 0, 0, 1}, Flexibility::slightly_flexible}};
  m.validate();

  // Hour 18 is contested between two single-device activities, so Laundering
  // and Entertaining each sit at activity probability exactly 0.5 — above the
  // low act_th, excluded by the high one. Hour 10 is uncontested (1.0).
  const auto table = hand_table(
      ds, 28, 6, {"oven", "kettle", "washing_machine", "tv"},
      [](int, int h) { return (h >= 9 && h <= 12) || (h >= 17 && h <= 19) ? 0.4 : 0.0; },
      [](const std::string& id, int, int h) {
        if (id == "oven" && h == 10) return 0.4;
        if ((id == "washing_machine" || id == "tv") && h == 18) return 0.4;
        return 0.0;
      });

  const HourShapeSource carbon(SignalKind::carbon, [](int h) { return 200.0 + 10.0 * h; });
  const HourShapeSource price(SignalKind::price, [](int h) { return 100.0; });
  const SignalPair signals{carbon, price, std::nullopt};
  RecommendationConfig base;

  SUBCASE("a one-point grid returns that point") {
    Grids g;
    g.aval_off = {false};
    g.avail_th = {0.3};
    g.act_th = {0.3};
    const auto r = grid_search(ds, signals, m, catalog, base, g, Objective::emissions, table);
    REQUIRE(r.table.size() == 1);
    CHECK(r.best_index == 0);
    CHECK(r.table[0].config.aval_off == false);
    CHECK(r.table[0].config.availability_threshold == 0.3);
  }
  SUBCASE("empty grids are rejected") {
    Grids g;
    g.act_th = {};
    CHECK_THROWS_WITH_AS(
        grid_search(ds, signals, m, catalog, base, g, Objective::emissions, table),
        doctest::Contains("empty grid"), UserError);
  }
  SUBCASE("the default lattice enumerates aval_off > avail_th > act_th") {
    const auto r =
        grid_search(ds, signals, m, catalog, base, Grids{}, Objective::emissions, table);
    REQUIRE(r.table.size() == 18);
    const Grids g;
    std::size_t i = 0;
    for (bool aval_off : g.aval_off)
      for (double avail_th : g.avail_th)
        for (double act_th : g.act_th) {
          CHECK(r.table[i].config.aval_off == aval_off);
          CHECK(r.table[i].config.availability_threshold == avail_th);
          CHECK(r.table[i].config.activity_threshold == act_th);
          ++i;
        }

    // low thresholds with aval_off on dominate this fixture; ties resolve to
    // the earliest grid point, which is exactly that corner
    CHECK(r.best_index == 0);
    CHECK(r.table[r.best_index].config.aval_off == true);
    CHECK(r.table[r.best_index].config.availability_threshold == 0.15);
    CHECK(r.table[r.best_index].config.activity_threshold == 0.15);

    const auto find = [&](bool aval_off, double avth, double acth) -> const SavingsReport& {
      for (const auto& p : r.table)
        if (p.config.aval_off == aval_off && p.config.availability_threshold == avth &&
            p.config.activity_threshold == acth)
          return p.report;
      FAIL("grid point not found");
      return r.table[0].report;
    };

    // raising act_th above the contested-hour probability drops the wash
    // (the idle tv never yields an acceptable recommendation either way);
    // the uncontested cook survives any threshold
    const auto& low = find(true, 0.15, 0.15);
    const auto& high_act = find(true, 0.15, 0.5);
    CHECK(low.recommendations_per_year == 12);  // 6 cooks + 6 washes
    CHECK(high_act.recommendations_per_year == 6);
    CHECK(low.total_emissions_saving > high_act.total_emissions_saving);

    // raising avail_th above the availability forecast closes the gate too
    const auto& high_avail = find(true, 0.5, 0.15);
    CHECK(high_avail.recommendations_per_year == 0);

    // freeing the flexible wash from availability hours buys more emissions
    const auto& gated = find(false, 0.15, 0.15);
    CHECK(low.total_emissions_saving > gated.total_emissions_saving);
    CHECK(low.relative_emissions_saving > gated.relative_emissions_saving);

    // argmax over the table under the chosen objective
    for (const auto& p : r.table)
      CHECK(r.table[r.best_index].report.total_emissions_saving >=
            p.report.total_emissions_saving);
  }
  SUBCASE("the price objective ranks by price savings instead") {
    Grids g;
    g.avail_th = {0.15};
    g.act_th = {0.15};
    const auto r = grid_search(ds, signals, m, catalog, base, g, Objective::price, table);
    REQUIRE(r.table.size() == 2);
    for (const auto& p : r.table)
      CHECK(r.table[r.best_index].report.total_price_saving >= p.report.total_price_saving);
  }
}
