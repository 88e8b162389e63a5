#include "loadshift/eval.hpp"

#include <algorithm>
#include <cmath>

#include "loadshift/metrics.hpp"
#include "loadshift/parallel.hpp"

namespace loadshift {

std::optional<double> auc(const std::vector<double>& scores,
                          const std::vector<std::uint8_t>& labels) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("auc: scores/labels length mismatch");
  const double v = rank_auc(scores, labels);
  if (v < 0) return std::nullopt;
  return v;
}

std::vector<std::set<int>> identifying_devices(const ActivityMapping& mapping) {
  std::vector<std::set<int>> out(mapping.activities.size());
  for (std::size_t a = 0; a < mapping.activities.size(); ++a)
    for (std::size_t d = 0; d < mapping.device_ids.size(); ++d)
      if (mapping.activities[a].row[d]) out[a].insert(static_cast<int>(d));
  return out;
}

std::set<int> target_activity_set(const std::vector<double>& usage_probs_hour, double use_th,
                                  const ActivityMapping& mapping) {
  std::set<int> out;
  for (std::size_t a = 0; a < mapping.activities.size(); ++a)
    for (std::size_t d = 0; d < mapping.device_ids.size(); ++d)
      if (mapping.activities[a].row[d] && usage_probs_hour[d] > use_th) {
        out.insert(static_cast<int>(a));
        break;
      }
  return out;
}

std::set<int> predicted_activity_set(const std::vector<double>& activity_probs_hour,
                                     double act_th) {
  std::set<int> out;
  for (std::size_t a = 0; a < activity_probs_hour.size(); ++a)
    if (activity_probs_hour[a] > act_th) out.insert(static_cast<int>(a));
  return out;
}

double equal_score(const std::vector<std::pair<std::set<int>, std::set<int>>>& day) {
  if (day.size() != 24) throw std::invalid_argument("equal_score: need 24 hourly pairs");
  int equal = 0;
  for (const auto& [target, predicted] : day)
    if (target == predicted) ++equal;
  return static_cast<double>(equal) / 24.0;
}

namespace {

/// mapping device order -> forecast-table column.
std::vector<int> mapping_to_table(const ActivityMapping& mapping, const ForecastTable& table) {
  std::vector<int> out;
  for (const auto& id : mapping.device_ids) {
    const auto it = std::find(table.device_id.begin(), table.device_id.end(), id);
    if (it == table.device_id.end())
      throw UserError("activity mapping references device without usage forecasts: " + id);
    out.push_back(static_cast<int>(it - table.device_id.begin()));
  }
  return out;
}

std::vector<std::vector<double>> mapped_usage_probs(const ForecastTable& table,
                                                    const std::vector<int>& remap, int k) {
  std::vector<std::vector<double>> out(24, std::vector<double>(remap.size(), 0.0));
  for (std::size_t md = 0; md < remap.size(); ++md)
    for (int h = 0; h < 24; ++h) out[h][md] = table.usage[remap[md]].days[k].probs[h];
  return out;
}

void finish_summary(AucSummary& s) {
  double sum = 0.0;
  for (double v : s.per_day) sum += v;
  s.mean = s.per_day.empty() ? 0.0 : sum / static_cast<double>(s.per_day.size());
}

}  // namespace

AgentScores score_agents(const HourlyDataset& ds, const ForecastTable& table,
                         const ActivityMapping& mapping, const EvalThresholds& th) {
  AgentScores out;
  out.thresholds = th;
  out.device_id = table.device_id;
  out.usage.resize(table.device_id.size());
  const auto remap = mapping_to_table(mapping, table);

  for (int k = 0; k < table.n_days(); ++k) {
    const int day = table.first_day() + k;
    const std::size_t begin = day_begin_index(ds, day);

    std::vector<double> scores;
    std::vector<std::uint8_t> labels;
    for (int h = 0; h < 24; ++h) {
      if (ds.avail_gap[begin + h]) continue;
      scores.push_back(table.availability.days[k].probs[h]);
      labels.push_back(ds.availability[begin + h]);
    }
    if (auto v = auc(scores, labels))
      out.availability.per_day.push_back(*v);
    else
      ++out.availability.skipped_days;

    for (std::size_t j = 0; j < table.usage.size(); ++j) {
      const int d = table.device_index[j];
      scores.clear();
      labels.clear();
      for (int h = 0; h < 24; ++h) {
        if (ds.gap[begin + h][d]) continue;
        scores.push_back(table.usage[j].days[k].probs[h]);
        labels.push_back(ds.usage[begin + h][d]);
      }
      if (auto v = auc(scores, labels))
        out.usage[j].per_day.push_back(*v);
      else
        ++out.usage[j].skipped_days;
    }

    const auto usage_probs = mapped_usage_probs(table, remap, k);
    std::vector<std::pair<std::set<int>, std::set<int>>> pairs;
    pairs.reserve(24);
    for (int h = 0; h < 24; ++h) {
      const auto act_probs = activity_probs(usage_probs[h], mapping);
      pairs.emplace_back(target_activity_set(usage_probs[h], th.use_th, mapping),
                         predicted_activity_set(act_probs, th.act_th));
    }
    out.equal_per_day.push_back(equal_score(pairs));
  }

  finish_summary(out.availability);
  for (auto& s : out.usage) finish_summary(s);
  double sum = 0.0;
  for (double v : out.equal_per_day) sum += v;
  out.equal_mean = out.equal_per_day.empty() ? 0.0 : sum / out.equal_per_day.size();
  return out;
}

ColdStartResult cold_start(const HourlyDataset& ds, const ActivityMapping& mapping,
                           const DeviceCatalog& catalog, const ColdStartSpec& spec,
                           std::uint64_t seed, bool parallel) {
  const int days = dataset_days(ds);
  const int max_train = days - spec.test_days;
  if (max_train < 28)
    throw UserError("insufficient history for a cold-start curve with " +
                    std::to_string(spec.test_days) + " test days");

  // One fixed test set for every curve point.
  std::vector<int> test_days;
  for (int d = max_train; d < days; ++d) test_days.push_back(d);

  std::vector<TargetColumn> targets;
  if (spec.agent == ColdStartAgent::availability) {
    targets.push_back(TargetColumn{true, -1});
  } else if (spec.agent == ColdStartAgent::usage) {
    const int d = ds.device_index(spec.device_id);
    if (d < 0) throw UserError("unknown device: " + spec.device_id);
    targets.push_back(TargetColumn{false, d});
  } else {
    // usage columns in mapping order, so the probability vectors line up
    // with the activity rows
    for (const auto& id : mapping.device_ids) {
      const int d = ds.device_index(id);
      if (d < 0) throw UserError("activity mapping references unknown device: " + id);
      const CatalogDevice* dev = catalog.find(id);
      if (!dev || !dev->shiftable)
        throw UserError("activity mapping references non-forecastable device: " + id);
      targets.push_back(TargetColumn{false, d});
    }
  }

  Fnv1a hash;
  for (int d : test_days) hash.update_pod(d);
  for (const auto& t : targets) hash.update(t.name(ds));
  if (spec.agent != ColdStartAgent::activity) {
    const auto& t = targets.front();
    for (int d : test_days) {
      const std::size_t begin = day_begin_index(ds, d);
      for (int h = 0; h < 24; ++h) {
        const bool gapped =
            t.availability ? ds.avail_gap[begin + h] != 0 : ds.gap[begin + h][t.device] != 0;
        if (gapped) continue;
        const std::uint8_t y =
            t.availability ? ds.availability[begin + h] : ds.usage[begin + h][t.device];
        hash.update_pod(y);
      }
    }
  }

  ColdStartResult result;
  result.test_set_hash = hash.digest();
  for (int len = 28; len <= max_train; len += spec.step_days)
    result.training_days.push_back(len);
  result.scores.assign(result.training_days.size(), 0.0);

  parallel_for(result.training_days.size(), parallel, [&](std::size_t li) {
    const int len = result.training_days[li];
    const std::size_t train_end = day_begin_index(ds, len);

    std::vector<TrainedModel> models;
    for (const auto& target : targets) {
      const auto rows = training_rows(ds, target, 0, train_end);
      Fnv1a h;
      h.update(target.name(ds));
      models.push_back(train(spec.family, rows, "time+lag:" + target.name(ds), HyperParams{},
                             mix_seed(mix_seed(seed, h.digest()), len)));
    }

    if (spec.agent != ColdStartAgent::activity) {
      const auto& target = targets.front();
      std::vector<double> scores;
      std::vector<std::uint8_t> labels;
      for (int d : test_days) {
        const auto feats = day_features(ds, target, d);
        const std::size_t begin = day_begin_index(ds, d);
        for (int h = 0; h < 24; ++h) {
          const bool gapped = target.availability ? ds.avail_gap[begin + h] != 0
                                                  : ds.gap[begin + h][target.device] != 0;
          if (gapped) continue;
          scores.push_back(models.front().predict(feats[h]));
          labels.push_back(target.availability ? ds.availability[begin + h]
                                               : ds.usage[begin + h][target.device]);
        }
      }
      const auto v = auc(scores, labels);
      if (!v) throw UserError("cold-start test set is single-class");
      result.scores[li] = *v;
    } else {
      // EQUAL of the activity agent, averaged over the test days.
      double sum = 0.0;
      for (int d : test_days) {
        std::vector<std::vector<double>> usage_probs(24,
                                                     std::vector<double>(targets.size(), 0.0));
        for (std::size_t j = 0; j < targets.size(); ++j) {
          const auto feats = day_features(ds, targets[j], d);
          for (int h = 0; h < 24; ++h) usage_probs[h][j] = models[j].predict(feats[h]);
        }
        std::vector<std::pair<std::set<int>, std::set<int>>> pairs;
        for (int h = 0; h < 24; ++h) {
          const auto act_probs = activity_probs(usage_probs[h], mapping);
          pairs.emplace_back(target_activity_set(usage_probs[h], spec.eval_th.use_th, mapping),
                             predicted_activity_set(act_probs, spec.eval_th.act_th));
        }
        sum += equal_score(pairs);
      }
      result.scores[li] = sum / static_cast<double>(test_days.size());
    }
  });

  for (std::size_t li = 0; li < result.scores.size(); ++li) {
    if (result.scores[li] >= spec.threshold) {
      result.days_to_threshold = result.training_days[li];
      break;
    }
  }
  return result;
}

namespace {

struct DayOutcome {
  int accepted = 0;
  double emissions_saving = 0.0;
  double price_saving = 0.0;
  double emissions_baseline = 0.0;
  double price_baseline = 0.0;
  std::array<int, 24> predicted_hist{};
  std::array<int, 24> recommended_hist{};
};

}  // namespace

SavingsReport simulate_savings(const HourlyDataset& ds, const SignalPair& signals,
                               const ActivityMapping& mapping, const DeviceCatalog& catalog,
                               const RecommendationConfig& config, const ForecastTable& table,
                               int first_day, int last_day, bool parallel) {
  const auto remap = mapping_to_table(mapping, table);
  const auto ident = identifying_devices(mapping);
  if (first_day < 0) first_day = table.first_day();
  if (last_day < 0) last_day = table.first_day() + table.n_days();
  if (first_day < table.first_day() || last_day > table.first_day() + table.n_days() ||
      first_day >= last_day)
    throw UserError("savings period outside the forecast range");

  std::vector<double> device_avg_kwh(mapping.device_ids.size(), 0.0);
  std::vector<int> ds_col(mapping.device_ids.size(), -1);
  for (std::size_t md = 0; md < mapping.device_ids.size(); ++md) {
    ds_col[md] = ds.device_index(mapping.device_ids[md]);
    if (ds_col[md] < 0)
      throw UserError("activity mapping references unknown device: " + mapping.device_ids[md]);
    device_avg_kwh[md] = avg_hourly_kwh(ds, catalog, ds_col[md]);
  }

  const int n_days = last_day - first_day;
  std::vector<DayOutcome> outcomes(n_days);
  parallel_for(static_cast<std::size_t>(n_days), parallel, [&](std::size_t i) {
    const int day = first_day + static_cast<int>(i);
    const int k = day - table.first_day();
    const std::size_t begin = day_begin_index(ds, day);

    HourStamp lookup = ds.hour_at(begin);
    if (signals.signal_year) {
      const CivilDate date = civil_from_hour(lookup).date;
      lookup = hour_from_civil(align_date(date, *signals.signal_year), 0);
    }
    const auto carbon = fetch_signal(signals.carbon, SignalKind::carbon, lookup);
    const auto price = fetch_signal(signals.price, SignalKind::price, lookup);

    AvailabilityForecast av;
    av.horizon_start = ds.hour_at(begin);
    av.probs = table.availability.days[k].probs;
    const auto usage_probs = mapped_usage_probs(table, remap, k);

    const ScheduleInputs inputs{av, usage_probs, carbon, price, mapping, device_avg_kwh};
    const ScheduleReport report = build_schedule(inputs, config);

    DayOutcome& out = outcomes[i];
    for (const auto& rec : report.recommendations) {
      if (!ds.availability[begin + rec.predicted_start]) continue;
      const int a = mapping.activity_index(rec.activity_id);
      std::vector<int> matched;
      for (int md : ident[a]) {
        bool used = false;
        for (int k2 = 0; k2 < rec.duration; ++k2)
          used = used || ds.usage[begin + rec.predicted_start + k2][ds_col[md]];
        if (used) matched.push_back(md);
      }
      if (matched.empty()) continue;

      ++out.accepted;
      ++out.predicted_hist[rec.predicted_start];
      ++out.recommended_hist[rec.recommended_start];
      for (int k2 = 0; k2 < rec.duration; ++k2) {
        double kwh = 0.0;
        for (int md : matched)
          kwh += ds.energy[begin + rec.predicted_start + k2][ds_col[md]] / 1000.0;
        const int from = rec.predicted_start + k2;
        const int to = rec.recommended_start + k2;
        out.emissions_saving += kwh * (carbon.values[from] - carbon.values[to]);
        out.price_saving += kwh * (price.values[from] - price.values[to]) / 1000.0;
        out.emissions_baseline += kwh * carbon.values[from];
        out.price_baseline += kwh * price.values[from] / 1000.0;
      }
    }
  });

  SavingsReport report;
  report.days_evaluated = n_days;
  double e_base = 0.0, p_base = 0.0;
  for (const auto& o : outcomes) {  // ordered reduction: byte-stable reports
    report.recommendations_per_year += o.accepted;
    report.total_emissions_saving += o.emissions_saving;
    report.total_price_saving += o.price_saving;
    e_base += o.emissions_baseline;
    p_base += o.price_baseline;
    for (int h = 0; h < 24; ++h) {
      report.predicted_start_hist[h] += o.predicted_hist[h];
      report.recommended_start_hist[h] += o.recommended_hist[h];
    }
  }
  report.recommendations_per_day =
      static_cast<double>(report.recommendations_per_year) / static_cast<double>(n_days);
  if (e_base > 0) report.relative_emissions_saving = report.total_emissions_saving / e_base;
  if (p_base > 0) report.relative_price_saving = report.total_price_saving / p_base;
  return report;
}

GridSearchResult grid_search(const HourlyDataset& ds, const SignalPair& signals,
                             const ActivityMapping& mapping, const DeviceCatalog& catalog,
                             const RecommendationConfig& base, const Grids& grids,
                             Objective objective, const ForecastTable& table, bool parallel) {
  if (grids.aval_off.empty() || grids.avail_th.empty() || grids.act_th.empty())
    throw UserError("empty grid");
  GridSearchResult result;
  for (bool aval_off : grids.aval_off)
    for (double avail_th : grids.avail_th)
      for (double act_th : grids.act_th) {
        RecommendationConfig config = base;
        config.aval_off = aval_off;
        config.availability_threshold = avail_th;
        config.activity_threshold = act_th;
        GridPoint point;
        point.config = config;
        point.report = simulate_savings(ds, signals, mapping, catalog, config, table, -1, -1,
                                        parallel);
        result.table.push_back(point);
      }
  for (std::size_t i = 1; i < result.table.size(); ++i) {
    const auto total = [&](const GridPoint& p) {
      return objective == Objective::emissions ? p.report.total_emissions_saving
                                               : p.report.total_price_saving;
    };
    if (total(result.table[i]) > total(result.table[result.best_index])) result.best_index = i;
  }
  return result;
}

}  // namespace loadshift
