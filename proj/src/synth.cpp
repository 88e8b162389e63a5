#include "loadshift/synth.hpp"

#include <array>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "loadshift/config.hpp"
#include "loadshift/csv.hpp"

namespace loadshift {

namespace {

const std::array<int, 24> kCarbonBase = {230, 215, 200, 185, 170, 190, 230, 270,
                                         310, 330, 340, 345, 350, 345, 340, 330,
                                         335, 360, 420, 410, 390, 360, 310, 270};
const std::array<int, 24> kPriceBase = {48, 42, 38, 35, 37, 45,  60,  75, 85, 88, 90, 92,
                                        91, 89, 87, 86, 92, 105, 118, 115, 108, 95, 75, 60};
const std::array<int, 12> kCarbonMonth = {20, 15, 8, 0, -8, -15, -18, -15, -8, 0, 10, 18};
const std::array<int, 12> kPriceMonth = {10, 8, 5, 2, 0, -2, -4, -3, 0, 3, 6, 9};

const char* kDeviceOrder[] = {"fridge", "kettle", "oven", "washing_machine", "dishwasher",
                              "tv"};

bool is_weekend(int dow) { return dow >= 5; }

}  // namespace

double synth_power(const std::string& device_id, int dow, int hod) {
  if (device_id == "fridge") return 90.0;
  if (device_id == "kettle")
    return hod == 7 || (is_weekend(dow) && hod == 16) ? 2000.0 : 0.0;
  if (device_id == "oven") return hod == 18 ? 2200.0 : 0.0;
  if (device_id == "washing_machine")
    return (dow == 0 || dow == 3) && hod == 19 ? 2000.0 : 0.0;
  if (device_id == "dishwasher") return (dow == 1 || dow == 4) && hod == 20 ? 1800.0 : 0.0;
  if (device_id == "tv")
    return (hod >= 18 && hod <= 21) || (is_weekend(dow) && hod >= 14 && hod <= 17) ? 120.0
                                                                                   : 0.0;
  throw UserError("unknown demo device: " + device_id);
}

std::vector<double> synth_signal_values(SignalKind kind, const SynthSpec& spec) {
  const bool carbon = kind == SignalKind::carbon;
  std::mt19937_64 rng(mix_seed(spec.seed, carbon ? 101 : 202));
  std::uniform_int_distribution<int> jitter(-4, 4);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(spec.days) * 24);
  std::int64_t day0 = days_from_civil(spec.start);
  for (int d = 0; d < spec.days; ++d) {
    const CivilDate date = civil_from_days(day0 + d);
    const int dow = day_of_week(date);
    for (int h = 0; h < 24; ++h) {
      int v = carbon ? kCarbonBase[h] + kCarbonMonth[date.month - 1] + (is_weekend(dow) ? -15 : 0)
                     : kPriceBase[h] + kPriceMonth[date.month - 1] + (is_weekend(dow) ? -8 : 0);
      values.push_back(static_cast<double>(v + jitter(rng)));
    }
  }
  return values;
}

DeviceCatalog synth_catalog() {
  DeviceCatalog cat;
  const auto device = [&](const char* id, bool avail, bool shiftable, double avg_kwh) {
    CatalogDevice d;
    d.device_id = id;
    d.availability_indicating = avail;
    d.shiftable = shiftable;
    d.usage_watt_threshold = 10.0;
    d.avg_hourly_kwh = avg_kwh;
    cat.devices.push_back(d);
  };
  device("fridge", false, false, 0.09);
  device("kettle", true, true, 2.0);
  device("oven", false, true, 2.2);
  device("washing_machine", false, true, 2.0);
  device("dishwasher", false, true, 1.8);
  device("tv", true, true, 0.12);
  return cat;
}

void write_demo(const std::string& dir, const SynthSpec& spec) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  fs::create_directories(fs::path(dir) / "out");

  const HourStamp start_hour = hour_from_civil(spec.start, 0);

  // consumption.csv: REFIT layout, a few samples per hour, occasional idle
  // hours dropped entirely (gap-handling exercise)
  {
    std::ofstream out(fs::path(dir) / "consumption.csv");
    if (!out) throw UserError("cannot write demo consumption CSV");
    out << "Time,Aggregate";
    for (const char* id : kDeviceOrder) out << ',' << id;
    out << "\n";
    std::mt19937_64 rng(mix_seed(spec.seed, 303));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int total_hours = spec.days * 24;
    const std::int64_t step = 3600 / spec.samples_per_hour;
    for (int hh = 0; hh < total_hours; ++hh) {
      const CivilDateTime ct = civil_from_hour(start_hour + hh);
      const int dow = day_of_week(ct.date);
      std::array<double, 6> watts;
      double total = 0.0;
      bool idle = true;
      for (int d = 0; d < 6; ++d) {
        watts[d] = synth_power(kDeviceOrder[d], dow, ct.hour);
        total += watts[d];
        if (d > 0 && watts[d] > 0) idle = false;
      }
      const bool droppable = idle && hh != 0 && hh != total_hours - 1;
      if (droppable && u(rng) < spec.idle_dropout) continue;
      for (int s = 0; s < spec.samples_per_hour; ++s) {
        const std::int64_t t = unix_seconds(start_hour + hh) + s * step;
        out << t << ',' << csv::format_exact(total);
        for (int d = 0; d < 6; ++d) out << ',' << csv::format_exact(watts[d]);
        out << "\n";
      }
    }
    if (!out) throw UserError("failed writing demo consumption CSV");
  }

  save_signal_fixture((fs::path(dir) / "carbon.csv").string(), start_hour,
                      synth_signal_values(SignalKind::carbon, spec));
  save_signal_fixture((fs::path(dir) / "price.csv").string(), start_hour,
                      synth_signal_values(SignalKind::price, spec));

  {
    nlohmann::ordered_json j;
    j["devices"] = nlohmann::ordered_json::array();
    for (const auto& d : synth_catalog().devices)
      j["devices"].push_back({{"id", d.device_id},
                              {"availability_indicating", d.availability_indicating},
                              {"shiftable", d.shiftable},
                              {"usage_watt_threshold", d.usage_watt_threshold},
                              {"avg_hourly_kwh", *d.avg_hourly_kwh}});
    std::ofstream out(fs::path(dir) / "catalog.json");
    out << j.dump(1) << "\n";
    if (!out) throw UserError("failed writing demo catalog");
  }

  {
    nlohmann::ordered_json j;
    j["devices"] = {"kettle", "oven", "washing_machine", "dishwasher", "tv"};
    j["activities"] = nlohmann::ordered_json::array();
    j["activities"].push_back(
        {{"id", "Cooking"}, {"devices", {"kettle", "oven"}}, {"flexibility", "inflexible"}});
    j["activities"].push_back(
        {{"id", "Laundering"}, {"devices", {"washing_machine"}}, {"flexibility", "flexible"}});
    j["activities"].push_back(
        {{"id", "Cleaning"}, {"devices", {"dishwasher"}}, {"flexibility", "flexible"}});
    j["activities"].push_back(
        {{"id", "Entertainment"}, {"devices", {"tv"}}, {"flexibility", "slightly_flexible"}});
    std::ofstream out(fs::path(dir) / "mapping.json");
    out << j.dump(1) << "\n";
    if (!out) throw UserError("failed writing demo mapping");
  }

  {
    RunConfig c;
    c.seed = spec.seed;
    c.family = ModelFamily::logreg;
    c.paths.consumption = "consumption.csv";
    c.paths.price = "price.csv";
    c.paths.carbon = "carbon.csv";
    c.paths.mapping = "mapping.json";
    c.paths.catalog = "catalog.json";
    c.paths.hourly = "out/hourly.csv";
    c.paths.model_store = "out/models";
    c.paths.out_dir = "out";
    save_run_config(c, (fs::path(dir) / "config.json").string());
  }
}

}  // namespace loadshift
