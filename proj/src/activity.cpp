#include "loadshift/activity.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace loadshift {

Flexibility flexibility_from_string(const std::string& s) {
  if (s == "flexible") return Flexibility::flexible;
  if (s == "slightly_flexible") return Flexibility::slightly_flexible;
  if (s == "inflexible") return Flexibility::inflexible;
  throw UserError("unknown flexibility class: " + s);
}

const char* to_string(Flexibility f) {
  switch (f) {
    case Flexibility::flexible: return "flexible";
    case Flexibility::slightly_flexible: return "slightly_flexible";
    default: return "inflexible";
  }
}

int ActivityMapping::activity_index(const std::string& id) const {
  for (std::size_t i = 0; i < activities.size(); ++i)
    if (activities[i].activity_id == id) return static_cast<int>(i);
  return -1;
}

void ActivityMapping::validate() const {
  if (activities.empty()) throw UserError("activity mapping lists no activities");
  if (device_ids.empty()) throw UserError("activity mapping lists no devices");
  for (const auto& act : activities) {
    if (act.row.size() != device_ids.size())
      throw UserError("activity row length mismatch for " + act.activity_id);
    int ones = 0;
    for (auto v : act.row) {
      if (v != 0 && v != 1)
        throw UserError("activity-device relations must be 0 or 1 (" + act.activity_id + ")");
      ones += v;
    }
    if (ones == 0) throw UserError("activity has no devices: " + act.activity_id);
  }
  for (std::size_t d = 0; d < device_ids.size(); ++d) {
    int sum = 0;
    for (const auto& act : activities) sum += act.row[d];
    if (sum != 1)
      throw UserError("device must map to exactly one activity: " + device_ids[d]);
  }
}

ActivityMapping load_mapping(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot open mapping file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UserError("invalid mapping JSON in " + path + ": " + e.what());
  }
  ActivityMapping m;
  try {
    m.device_ids = j.at("devices").get<std::vector<std::string>>();
    for (const auto& item : j.at("activities")) {
      Activity a;
      a.activity_id = item.at("id").get<std::string>();
      a.flexibility = flexibility_from_string(item.at("flexibility").get<std::string>());
      a.row.assign(m.device_ids.size(), 0);
      for (const auto& dev : item.at("devices")) {
        const std::string id = dev.get<std::string>();
        bool found = false;
        for (std::size_t d = 0; d < m.device_ids.size(); ++d) {
          if (m.device_ids[d] == id) {
            a.row[d] = 1;
            found = true;
          }
        }
        if (!found)
          throw UserError("activity " + a.activity_id + " references unknown device " + id);
      }
      m.activities.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    throw UserError("invalid mapping JSON in " + path + ": " + e.what());
  }
  m.validate();
  return m;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine: length mismatch");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<double> activity_probs(const std::vector<double>& usage_probs_hour,
                                   const ActivityMapping& mapping) {
  std::vector<double> sims(mapping.activities.size());
  double total = 0;
  for (std::size_t i = 0; i < mapping.activities.size(); ++i) {
    std::vector<double> row(mapping.activities[i].row.begin(), mapping.activities[i].row.end());
    sims[i] = cosine_similarity(usage_probs_hour, row);
    total += sims[i];
  }
  if (total > 0)
    for (auto& s : sims) s /= total;
  return sims;
}

std::vector<ActivityInstance> extract_instances(const std::array<double, 24>& probs,
                                                double act_th, int activity) {
  std::vector<ActivityInstance> out;
  int h = 0;
  while (h < 24) {
    if (probs[h] > act_th) {
      int end = h;
      while (end + 1 < 24 && probs[end + 1] > act_th) ++end;
      out.push_back({activity, h, end - h + 1});
      h = end + 1;
    } else {
      ++h;
    }
  }
  return out;
}

std::vector<ActivityForecast> activity_forecasts(
    const std::vector<std::vector<double>>& usage_probs, const ActivityMapping& mapping,
    double act_th, HourStamp horizon_start) {
  std::vector<ActivityForecast> out(mapping.activities.size());
  for (std::size_t a = 0; a < mapping.activities.size(); ++a) {
    out[a].activity = static_cast<int>(a);
    out[a].horizon_start = horizon_start;
  }
  for (int h = 0; h < 24; ++h) {
    auto probs = activity_probs(usage_probs[h], mapping);
    for (std::size_t a = 0; a < probs.size(); ++a) out[a].probs[h] = probs[a];
  }
  for (std::size_t a = 0; a < out.size(); ++a)
    out[a].instances = extract_instances(out[a].probs, act_th, static_cast<int>(a));
  return out;
}

}  // namespace loadshift
