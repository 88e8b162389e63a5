#include "loadshift/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <json.hpp>

#include "loadshift/metrics.hpp"
#include "loadshift/parallel.hpp"

namespace loadshift {

ModelFamily family_from_string(const std::string& s) {
  if (s == "logreg") return ModelFamily::logreg;
  if (s == "forest") return ModelFamily::forest;
  if (s == "mlp") return ModelFamily::mlp;
  throw UserError("unknown model family: " + s);
}

const char* to_string(ModelFamily f) {
  switch (f) {
    case ModelFamily::logreg: return "logreg";
    case ModelFamily::forest: return "forest";
    default: return "mlp";
  }
}

double capacity(ModelFamily family, const HyperParams& hp) {
  switch (family) {
    case ModelFamily::logreg: return 1.0 / hp.l2;
    case ModelFamily::forest: return static_cast<double>(hp.trees) * (1 << hp.max_depth);
    default: return hp.hidden;
  }
}

std::vector<HyperParams> default_grid(ModelFamily family) {
  std::vector<HyperParams> grid;
  HyperParams hp;
  switch (family) {
    case ModelFamily::logreg:
      grid.push_back(hp);
      break;
    case ModelFamily::forest:
      for (int trees : {50, 100})
        for (int depth : {6, 12}) {
          hp.trees = trees;
          hp.max_depth = depth;
          grid.push_back(hp);
        }
      break;
    case ModelFamily::mlp:
      for (int hidden : {8, 16, 32})
        for (double lr : {0.01, 0.001}) {
          hp.hidden = hidden;
          hp.learning_rate = lr;
          grid.push_back(hp);
        }
      break;
  }
  return grid;
}

namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// Active-index view of the rows; training loops touch only nonzero columns.
struct PackedRows {
  std::vector<std::array<int, 5>> idx;
  std::vector<int> n_idx;
  std::vector<std::uint8_t> y;

  explicit PackedRows(const std::vector<TrainRow>& rows) {
    idx.resize(rows.size());
    n_idx.resize(rows.size());
    y.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      n_idx[i] = active_indices(rows[i].x, idx[i]);
      y[i] = rows[i].y;
    }
  }
  std::size_t size() const { return y.size(); }
};

LogRegState train_logreg(const PackedRows& rows, const HyperParams& hp) {
  LogRegState st;
  const std::size_t n = rows.size();
  const double lr = 0.5;
  std::array<double, kFeatureDim> grad{};
  for (int epoch = 0; epoch < 500; ++epoch) {
    grad.fill(0.0);
    double grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double z = st.b;
      for (int k = 0; k < rows.n_idx[i]; ++k) z += st.w[rows.idx[i][k]];
      const double err = sigmoid(z) - rows.y[i];
      for (int k = 0; k < rows.n_idx[i]; ++k) grad[rows.idx[i][k]] += err;
      grad_b += err;
    }
    double norm_sq = 0.0;
    for (int j = 0; j < kFeatureDim; ++j) {
      grad[j] = grad[j] / static_cast<double>(n) + hp.l2 * st.w[j];
      norm_sq += grad[j] * grad[j];
    }
    grad_b /= static_cast<double>(n);
    norm_sq += grad_b * grad_b;
    if (std::sqrt(norm_sq) < 1e-6) break;
    for (int j = 0; j < kFeatureDim; ++j) st.w[j] -= lr * grad[j];
    st.b -= lr * grad_b;
  }
  return st;
}

double mlp_forward(const MlpState& st, const std::array<int, 5>& idx, int n_idx,
                   std::vector<double>& a1) {
  for (int j = 0; j < st.hidden; ++j) {
    double z = st.b1[j];
    const double* w1j = &st.w1[static_cast<std::size_t>(j) * kFeatureDim];
    for (int k = 0; k < n_idx; ++k) z += w1j[idx[k]];
    a1[j] = z > 0 ? z : 0.0;
  }
  double z2 = st.b2;
  for (int j = 0; j < st.hidden; ++j) z2 += st.w2[j] * a1[j];
  return sigmoid(z2);
}

double mlp_logloss(const MlpState& st, const PackedRows& rows) {
  std::vector<double> a1(st.hidden);
  double loss = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double p = mlp_forward(st, rows.idx[i], rows.n_idx[i], a1);
    const double clamped = std::min(1.0 - 1e-12, std::max(1e-12, p));
    loss += rows.y[i] ? -std::log(clamped) : -std::log(1.0 - clamped);
  }
  return loss / static_cast<double>(rows.size());
}

MlpState train_mlp(const PackedRows& rows, const HyperParams& hp, std::uint64_t seed) {
  MlpState st;
  st.hidden = hp.hidden;
  st.w1.assign(static_cast<std::size_t>(hp.hidden) * kFeatureDim, 0.0);
  st.b1.assign(hp.hidden, 0.0);
  st.w2.assign(hp.hidden, 0.0);

  std::mt19937_64 rng(seed);
  const double limit1 = std::sqrt(6.0 / (kFeatureDim + hp.hidden));
  const double limit2 = std::sqrt(6.0 / (hp.hidden + 1));
  std::uniform_real_distribution<double> u1(-limit1, limit1), u2(-limit2, limit2);
  for (auto& w : st.w1) w = u1(rng);
  for (auto& w : st.w2) w = u2(rng);

  // Chronological tail of the training rows serves as the early-stop split.
  const std::size_t n_val = rows.size() / 5;
  const std::size_t n_train = rows.size() - n_val;
  PackedRows val_rows({});
  val_rows.idx.assign(rows.idx.end() - n_val, rows.idx.end());
  val_rows.n_idx.assign(rows.n_idx.end() - n_val, rows.n_idx.end());
  val_rows.y.assign(rows.y.end() - n_val, rows.y.end());

  const int batch_size = 32;
  const double momentum = 0.9;
  std::vector<double> v_w1(st.w1.size(), 0.0), v_b1(hp.hidden, 0.0), v_w2(hp.hidden, 0.0);
  double v_b2 = 0.0;
  std::vector<double> g_w1(st.w1.size()), g_b1(hp.hidden), g_w2(hp.hidden);
  std::vector<double> a1(hp.hidden), dz1(hp.hidden);
  std::vector<std::size_t> order(n_train);

  MlpState best = st;
  double best_loss = n_val > 0 ? mlp_logloss(st, val_rows) : 0.0;
  int patience = 0;

  for (int epoch = 0; epoch < 200; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n_train; start += batch_size) {
      const std::size_t end = std::min(n_train, start + batch_size);
      std::fill(g_w1.begin(), g_w1.end(), 0.0);
      std::fill(g_b1.begin(), g_b1.end(), 0.0);
      std::fill(g_w2.begin(), g_w2.end(), 0.0);
      double g_b2 = 0.0;
      for (std::size_t bi = start; bi < end; ++bi) {
        const std::size_t i = order[bi];
        const double p = mlp_forward(st, rows.idx[i], rows.n_idx[i], a1);
        const double dz2 = p - rows.y[i];
        for (int j = 0; j < hp.hidden; ++j) {
          g_w2[j] += dz2 * a1[j];
          dz1[j] = a1[j] > 0 ? dz2 * st.w2[j] : 0.0;
          g_b1[j] += dz1[j];
          double* g_w1j = &g_w1[static_cast<std::size_t>(j) * kFeatureDim];
          for (int k = 0; k < rows.n_idx[i]; ++k) g_w1j[rows.idx[i][k]] += dz1[j];
        }
        g_b2 += dz2;
      }
      const double scale = hp.learning_rate / static_cast<double>(end - start);
      for (std::size_t j = 0; j < st.w1.size(); ++j) {
        v_w1[j] = momentum * v_w1[j] - scale * g_w1[j];
        st.w1[j] += v_w1[j];
      }
      for (int j = 0; j < hp.hidden; ++j) {
        v_b1[j] = momentum * v_b1[j] - scale * g_b1[j];
        st.b1[j] += v_b1[j];
        v_w2[j] = momentum * v_w2[j] - scale * g_w2[j];
        st.w2[j] += v_w2[j];
      }
      v_b2 = momentum * v_b2 - scale * g_b2;
      st.b2 += v_b2;
    }
    if (n_val > 0) {
      const double loss = mlp_logloss(st, val_rows);
      if (loss < best_loss - 1e-12) {
        best_loss = loss;
        best = st;
        patience = 0;
      } else if (++patience >= 10) {
        break;
      }
    }
  }
  return n_val > 0 ? best : st;
}

struct TreeBuilder {
  const PackedRows& rows;
  int max_depth;
  std::mt19937_64 rng;
  std::vector<ForestNode> nodes;

  double feature_of(std::size_t i, int f) const {
    for (int k = 0; k < rows.n_idx[i]; ++k)
      if (rows.idx[i][k] == f) return 1.0;
    return 0.0;
  }

  int build(std::vector<std::size_t>& members, int depth) {
    const int node_id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    std::size_t pos = 0;
    for (auto i : members) pos += rows.y[i];
    const double p = members.empty() ? 0.0 : static_cast<double>(pos) / members.size();
    nodes[node_id].prob = p;
    if (depth >= max_depth || members.size() < 2 || pos == 0 || pos == members.size())
      return node_id;

    // sqrt(d) feature subsample, drawn without replacement
    std::array<int, kFeatureDim> pool;
    std::iota(pool.begin(), pool.end(), 0);
    const int n_sub = 7;  // ceil(sqrt(45))
    for (int k = 0; k < n_sub; ++k) {
      std::uniform_int_distribution<int> pick(k, kFeatureDim - 1);
      std::swap(pool[k], pool[pick(rng)]);
    }

    const double parent_gini = 2.0 * p * (1.0 - p);
    double best_gain = 1e-12;
    int best_feature = -1;
    for (int k = 0; k < n_sub; ++k) {
      const int f = pool[k];
      std::size_t n1 = 0, pos1 = 0;
      for (auto i : members) {
        if (feature_of(i, f) > 0.5) {
          ++n1;
          pos1 += rows.y[i];
        }
      }
      const std::size_t n0 = members.size() - n1;
      if (n0 == 0 || n1 == 0) continue;
      const double p0 = static_cast<double>(pos - pos1) / n0;
      const double p1 = static_cast<double>(pos1) / n1;
      const double child_gini = (n0 * 2.0 * p0 * (1.0 - p0) + n1 * 2.0 * p1 * (1.0 - p1)) /
                                static_cast<double>(members.size());
      const double gain = parent_gini - child_gini;
      if (gain > best_gain) {
        best_gain = gain;
        best_feature = f;
      }
    }
    if (best_feature < 0) return node_id;

    std::vector<std::size_t> left, right;
    for (auto i : members)
      (feature_of(i, best_feature) > 0.5 ? right : left).push_back(i);
    members.clear();
    members.shrink_to_fit();
    nodes[node_id].feature = best_feature;
    const int l = build(left, depth + 1);
    nodes[node_id].left = l;
    const int r = build(right, depth + 1);
    nodes[node_id].right = r;
    return node_id;
  }
};

ForestState train_forest(const PackedRows& rows, const HyperParams& hp, std::uint64_t seed) {
  ForestState st;
  st.trees.resize(hp.trees);
  for (int t = 0; t < hp.trees; ++t) {
    TreeBuilder builder{rows, hp.max_depth, std::mt19937_64(mix_seed(seed, t)), {}};
    std::vector<std::size_t> members(rows.size());
    std::uniform_int_distribution<std::size_t> pick(0, rows.size() - 1);
    for (auto& m : members) m = pick(builder.rng);
    builder.build(members, 0);
    st.trees[t] = std::move(builder.nodes);
  }
  return st;
}

double predict_tree(const std::vector<ForestNode>& tree, const FeatureRow& x) {
  int node = 0;
  while (tree[node].feature >= 0)
    node = feature_value(x, tree[node].feature) > 0.5 ? tree[node].right : tree[node].left;
  return tree[node].prob;
}

}  // namespace

double TrainedModel::predict(const FeatureRow& x) const {
  if (degenerate) return prior;
  switch (family) {
    case ModelFamily::logreg: {
      const auto& st = std::get<LogRegState>(state);
      std::array<int, 5> idx;
      const int n = active_indices(x, idx);
      double z = st.b;
      for (int k = 0; k < n; ++k) z += st.w[idx[k]];
      return sigmoid(z);
    }
    case ModelFamily::mlp: {
      const auto& st = std::get<MlpState>(state);
      std::array<int, 5> idx;
      const int n = active_indices(x, idx);
      std::vector<double> a1(st.hidden);
      return mlp_forward(st, idx, n, a1);
    }
    default: {
      const auto& st = std::get<ForestState>(state);
      double sum = 0.0;
      for (const auto& tree : st.trees) sum += predict_tree(tree, x);
      return sum / static_cast<double>(st.trees.size());
    }
  }
}

TrainedModel train(ModelFamily family, const std::vector<TrainRow>& rows,
                   const std::string& feature_schema, const HyperParams& hp,
                   std::uint64_t seed) {
  TrainedModel model;
  model.family = family;
  model.feature_schema = feature_schema;
  model.hp = hp;
  model.seed = seed;

  std::size_t pos = 0;
  for (const auto& r : rows) pos += r.y;
  if (rows.empty() || pos == 0 || pos == rows.size()) {
    model.degenerate = true;
    model.prior = rows.empty() ? 0.0 : static_cast<double>(pos) / rows.size();
    model.state = LogRegState{};
    return model;
  }

  PackedRows packed(rows);
  switch (family) {
    case ModelFamily::logreg: model.state = train_logreg(packed, hp); break;
    case ModelFamily::mlp: model.state = train_mlp(packed, hp, seed); break;
    case ModelFamily::forest: model.state = train_forest(packed, hp, seed); break;
  }
  return model;
}

std::array<double, 24> predict_proba(const TrainedModel& model,
                                     const std::array<FeatureRow, 24>& horizon,
                                     const std::string& expected_schema) {
  if (model.feature_schema != expected_schema)
    throw UserError("feature schema mismatch: model has '" + model.feature_schema +
                    "', caller expects '" + expected_schema + "'");
  std::array<double, 24> out;
  for (int h = 0; h < 24; ++h) out[h] = model.predict(horizon[h]);
  return out;
}

TuneResult tune(ModelFamily family, const std::vector<TrainRow>& train_rows,
                const std::vector<TrainRow>& val_rows, const std::vector<HyperParams>& grid,
                const std::string& feature_schema, std::uint64_t seed) {
  if (grid.empty()) throw UserError("empty hyperparameter grid");
  TuneResult result;
  bool have = false;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const TrainedModel model = train(family, train_rows, feature_schema, grid[g],
                                     mix_seed(seed, g));
    std::vector<double> scores;
    std::vector<std::uint8_t> labels;
    scores.reserve(val_rows.size());
    for (const auto& r : val_rows) {
      scores.push_back(model.predict(r.x));
      labels.push_back(r.y);
    }
    double auc = rank_auc(scores, labels);
    if (auc < 0) auc = 0.5;  // single-class validation: nothing to rank
    const bool better =
        !have || auc > result.best_auc ||
        (auc == result.best_auc && capacity(family, grid[g]) < capacity(family, result.best));
    if (better) {
      result.best = grid[g];
      result.best_auc = auc;
      have = true;
    }
  }
  return result;
}

std::string TargetColumn::name(const HourlyDataset& ds) const {
  return availability ? "availability" : ds.device_ids[device];
}

int dataset_days(const HourlyDataset& ds) {
  const std::size_t offset = static_cast<std::size_t>(((-ds.first_hour % 24) + 24) % 24);
  if (offset >= ds.n_hours()) return 0;
  return static_cast<int>((ds.n_hours() - offset) / 24);
}

std::size_t day_begin_index(const HourlyDataset& ds, int day) {
  const std::size_t offset = static_cast<std::size_t>(((-ds.first_hour % 24) + 24) % 24);
  return offset + static_cast<std::size_t>(day) * 24;
}

std::array<FeatureRow, 24> day_features(const HourlyDataset& ds, const TargetColumn& target,
                                        int day) {
  std::array<FeatureRow, 24> out;
  const std::size_t begin = day_begin_index(ds, day);
  for (int h = 0; h < 24; ++h) {
    const std::size_t i = begin + h;
    FeatureRow& r = out[h];
    r.month = ds.month[i];
    r.dow = ds.dow[i];
    r.hod = ds.hod[i];
    if (target.availability) {
      r.lag1 = ds.avail_lag1[i];
      r.lag168 = ds.avail_lag168[i];
    } else {
      r.lag1 = ds.usage_lag1[i][target.device];
      r.lag168 = ds.usage_lag168[i][target.device];
    }
  }
  return out;
}

std::vector<TrainRow> training_rows(const HourlyDataset& ds, const TargetColumn& target,
                                    std::size_t hour_begin, std::size_t hour_end) {
  std::vector<TrainRow> rows;
  rows.reserve(hour_end - hour_begin);
  for (std::size_t i = hour_begin; i < hour_end; ++i) {
    const bool gapped = target.availability ? ds.avail_gap[i] != 0
                                            : ds.gap[i][target.device] != 0;
    if (gapped) continue;
    TrainRow r;
    r.x.month = ds.month[i];
    r.x.dow = ds.dow[i];
    r.x.hod = ds.hod[i];
    if (target.availability) {
      r.x.lag1 = ds.avail_lag1[i];
      r.x.lag168 = ds.avail_lag168[i];
      r.y = ds.availability[i];
    } else {
      r.x.lag1 = ds.usage_lag1[i][target.device];
      r.x.lag168 = ds.usage_lag168[i][target.device];
      r.y = ds.usage[i][target.device];
    }
    rows.push_back(r);
  }
  return rows;
}

RollingResult rolling_fit_predict(const HourlyDataset& ds, const TargetColumn& target,
                                  ModelFamily family, const TrainingSchedule& schedule,
                                  std::uint64_t seed, bool parallel) {
  const int days = dataset_days(ds);
  if (days <= schedule.headstart_days)
    throw UserError("insufficient history: need more than " +
                    std::to_string(schedule.headstart_days) + " days, have " +
                    std::to_string(days));

  Fnv1a h;
  h.update(target.name(ds));
  const std::uint64_t target_seed = mix_seed(seed, h.digest());
  const std::string schema = "time+lag:" + target.name(ds);
  const std::size_t window_hours =
      static_cast<std::size_t>(schedule.training_window_days) * 24;

  RollingResult result;
  const auto grid = default_grid(family);

  // Tuning runs up front so day-level fits can parallelize deterministically.
  for (int day = schedule.headstart_days; day < days; day += schedule.retune_interval_days) {
    const std::size_t end = day_begin_index(ds, day);
    const std::size_t begin = end > window_hours ? end - window_hours : 0;
    auto rows = training_rows(ds, target, begin, end);
    const std::size_t n_val = rows.size() / 5;
    std::vector<TrainRow> train_split(rows.begin(), rows.end() - n_val);
    std::vector<TrainRow> val_split(rows.end() - n_val, rows.end());
    HyperParams choice = grid.front();
    if (!train_split.empty() && !val_split.empty())
      choice = tune(family, train_split, val_split, grid, schema,
                    mix_seed(target_seed, 1000003u + static_cast<std::uint64_t>(day)))
                   .best;
    result.tune_days.push_back(day);
    result.tune_choices.push_back(choice);
  }

  const int n_predict = days - schedule.headstart_days;
  result.days.resize(n_predict);
  parallel_for(static_cast<std::size_t>(n_predict), parallel, [&](std::size_t k) {
    const int day = schedule.headstart_days + static_cast<int>(k);
    const int tune_slot =
        (day - schedule.headstart_days) / schedule.retune_interval_days;
    const HyperParams& hp = result.tune_choices[tune_slot];
    const std::size_t end = day_begin_index(ds, day);
    const std::size_t begin = end > window_hours ? end - window_hours : 0;
    const auto rows = training_rows(ds, target, begin, end);
    const TrainedModel model =
        train(family, rows, schema, hp, mix_seed(target_seed, day));
    DayForecast& out = result.days[k];
    out.day = day;
    out.horizon_start = ds.hour_at(day_begin_index(ds, day));
    out.probs = predict_proba(model, day_features(ds, target, day), schema);
  });
  return result;
}

namespace {

nlohmann::json hp_to_json(const HyperParams& hp) {
  return {{"l2", hp.l2},
          {"hidden", hp.hidden},
          {"learning_rate", hp.learning_rate},
          {"trees", hp.trees},
          {"max_depth", hp.max_depth}};
}

HyperParams hp_from_json(const nlohmann::json& j) {
  HyperParams hp;
  hp.l2 = j.at("l2").get<double>();
  hp.hidden = j.at("hidden").get<int>();
  hp.learning_rate = j.at("learning_rate").get<double>();
  hp.trees = j.at("trees").get<int>();
  hp.max_depth = j.at("max_depth").get<int>();
  return hp;
}

}  // namespace

void save_model(const TrainedModel& model, const std::string& path) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["family"] = to_string(model.family);
  j["feature_schema"] = model.feature_schema;
  j["hyperparams"] = hp_to_json(model.hp);
  j["seed"] = model.seed;
  j["trained_through"] = model.trained_through;
  j["degenerate"] = model.degenerate;
  j["prior"] = model.prior;
  if (model.family == ModelFamily::logreg) {
    const auto& st = std::get<LogRegState>(model.state);
    j["weights"] = std::vector<double>(st.w.begin(), st.w.end());
    j["bias"] = st.b;
  } else if (model.family == ModelFamily::mlp) {
    const auto& st = std::get<MlpState>(model.state);
    j["hidden"] = st.hidden;
    j["w1"] = st.w1;
    j["b1"] = st.b1;
    j["w2"] = st.w2;
    j["b2"] = st.b2;
  } else {
    const auto& st = std::get<ForestState>(model.state);
    nlohmann::ordered_json trees = nlohmann::ordered_json::array();
    for (const auto& tree : st.trees) {
      nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
      for (const auto& n : tree)
        nodes.push_back({n.feature, n.left, n.right, n.prob});
      trees.push_back(std::move(nodes));
    }
    j["trees"] = std::move(trees);
  }
  std::ofstream out(path);
  if (!out) throw UserError("cannot write model file: " + path);
  out << j.dump(1) << "\n";
  if (!out) throw UserError("failed writing model file: " + path);
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot open model file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UserError("invalid model JSON in " + path + ": " + e.what());
  }
  try {
    TrainedModel model;
    model.family = family_from_string(j.at("family").get<std::string>());
    model.feature_schema = j.at("feature_schema").get<std::string>();
    model.hp = hp_from_json(j.at("hyperparams"));
    model.seed = j.at("seed").get<std::uint64_t>();
    model.trained_through = j.at("trained_through").get<HourStamp>();
    model.degenerate = j.at("degenerate").get<bool>();
    model.prior = j.at("prior").get<double>();
    if (model.family == ModelFamily::logreg) {
      LogRegState st;
      const auto w = j.at("weights").get<std::vector<double>>();
      if (w.size() != kFeatureDim) throw UserError("bad weight count in " + path);
      std::copy(w.begin(), w.end(), st.w.begin());
      st.b = j.at("bias").get<double>();
      model.state = st;
    } else if (model.family == ModelFamily::mlp) {
      MlpState st;
      st.hidden = j.at("hidden").get<int>();
      st.w1 = j.at("w1").get<std::vector<double>>();
      st.b1 = j.at("b1").get<std::vector<double>>();
      st.w2 = j.at("w2").get<std::vector<double>>();
      st.b2 = j.at("b2").get<double>();
      model.state = st;
    } else {
      ForestState st;
      for (const auto& tree : j.at("trees")) {
        std::vector<ForestNode> nodes;
        for (const auto& n : tree)
          nodes.push_back({n.at(0).get<int>(), n.at(1).get<int>(), n.at(2).get<int>(),
                           n.at(3).get<double>()});
        st.trees.push_back(std::move(nodes));
      }
      model.state = st;
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw UserError("invalid model JSON in " + path + ": " + e.what());
  }
}

}  // namespace loadshift
