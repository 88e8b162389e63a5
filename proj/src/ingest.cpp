#include "loadshift/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "loadshift/csv.hpp"

namespace loadshift {

const CatalogDevice* DeviceCatalog::find(const std::string& id) const {
  for (const auto& d : devices)
    if (d.device_id == id) return &d;
  return nullptr;
}

int HourlyDataset::device_index(const std::string& id) const {
  for (std::size_t i = 0; i < device_ids.size(); ++i)
    if (device_ids[i] == id) return static_cast<int>(i);
  return -1;
}

LoadResult load_readings(const std::string& path, std::int64_t reorder_window_s) {
  auto lines = csv::read_lines(path);
  if (lines.empty()) throw UserError("no parseable rows in " + path);

  auto header = csv::split(lines[0]);
  if (header.size() < 2 || header[0] != "Time")
    throw UserError("expected header 'Time,<device>...' in " + path);
  const std::size_t n_dev = header.size() - 1;

  struct Row {
    std::int64_t t;
    std::vector<double> watts;
  };
  std::vector<Row> rows;
  rows.reserve(lines.size());
  std::size_t malformed = 0;

  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto cells = csv::split(lines[i]);
    if (cells.size() != header.size()) {
      ++malformed;
      continue;
    }
    Row row;
    if (!try_parse_datetime(cells[0], row.t)) {
      ++malformed;
      continue;
    }
    row.watts.resize(n_dev);
    bool ok = true;
    for (std::size_t d = 0; d < n_dev; ++d) {
      double w;
      if (!csv::parse_double(cells[d + 1], w) || !std::isfinite(w) || w < 0) {
        ok = false;
        break;
      }
      row.watts[d] = w;
    }
    if (!ok) {
      ++malformed;
      continue;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw UserError("no parseable rows in " + path);

  // Mild disorder (buffered uploads) is tolerated up to the reorder window.
  std::int64_t running_max = rows[0].t;
  for (const auto& r : rows) {
    if (r.t + reorder_window_s < running_max)
      throw UserError("timestamps out of order by more than the reorder window in " + path);
    running_max = std::max(running_max, r.t);
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.t < b.t; });

  LoadResult out;
  out.malformed_rows = malformed;
  out.devices.resize(n_dev);
  for (std::size_t d = 0; d < n_dev; ++d) {
    out.devices[d].device_id = header[d + 1];
    out.devices[d].samples.reserve(rows.size());
  }
  std::int64_t last_t = std::numeric_limits<std::int64_t>::min();
  for (const auto& r : rows) {
    if (r.t == last_t) {
      ++out.malformed_rows;  // duplicate timestamp: keep the first occurrence
      continue;
    }
    last_t = r.t;
    for (std::size_t d = 0; d < n_dev; ++d)
      out.devices[d].samples.push_back({r.t, r.watts[d]});
  }
  return out;
}

ResampleResult resample_hourly(const std::vector<RawReadings>& readings) {
  if (readings.empty()) throw UserError("no readings to resample");
  std::int64_t min_t = std::numeric_limits<std::int64_t>::max();
  std::int64_t max_t = std::numeric_limits<std::int64_t>::min();
  for (const auto& r : readings) {
    if (r.samples.empty()) continue;
    min_t = std::min(min_t, r.samples.front().t);
    max_t = std::max(max_t, r.samples.back().t);
  }
  if (min_t > max_t) throw UserError("no readings to resample");

  ResampleResult out;
  out.first_hour = hour_floor(min_t);
  const std::size_t n_hours = static_cast<std::size_t>(hour_floor(max_t) - out.first_hour + 1);
  const std::size_t n_dev = readings.size();
  out.device_ids.reserve(n_dev);
  out.energy.assign(n_hours, std::vector<double>(n_dev, 0.0));
  out.gap.assign(n_hours, std::vector<std::uint8_t>(n_dev, 1));

  for (std::size_t d = 0; d < n_dev; ++d) {
    out.device_ids.push_back(readings[d].device_id);
    std::size_t i = 0;
    const auto& samples = readings[d].samples;
    while (i < samples.size()) {
      const HourStamp hour = hour_floor(samples[i].t);
      double sum = 0.0;
      std::size_t count = 0;
      while (i < samples.size() && hour_floor(samples[i].t) == hour) {
        sum += samples[i].watts;
        ++count;
        ++i;
      }
      const std::size_t h = static_cast<std::size_t>(hour - out.first_hour);
      out.energy[h][d] = sum / static_cast<double>(count);  // mean W × 1 h = Wh
      out.gap[h][d] = 0;
    }
  }
  return out;
}

namespace {

void shift_column(const std::vector<std::uint8_t>& base, std::size_t lag,
                  std::vector<std::uint8_t>& out) {
  out.assign(base.size(), 0);
  for (std::size_t h = lag; h < base.size(); ++h) out[h] = base[h - lag];
}

}  // namespace

HourlyDataset engineer_features(const ResampleResult& resampled, const DeviceCatalog& catalog) {
  const std::size_t n_hours = resampled.energy.size();
  if (n_hours < 1) throw UserError("fewer than 1 hour of data");

  HourlyDataset ds;
  ds.first_hour = resampled.first_hour;

  std::vector<std::size_t> src_col;
  for (const auto& dev : catalog.devices) {
    auto it = std::find(resampled.device_ids.begin(), resampled.device_ids.end(), dev.device_id);
    if (it == resampled.device_ids.end())
      throw UserError("catalog device not present in data: " + dev.device_id);
    src_col.push_back(static_cast<std::size_t>(it - resampled.device_ids.begin()));
    ds.device_ids.push_back(dev.device_id);
  }
  const std::size_t n_dev = ds.device_ids.size();

  ds.energy.assign(n_hours, std::vector<double>(n_dev, 0.0));
  ds.gap.assign(n_hours, std::vector<std::uint8_t>(n_dev, 0));
  ds.usage.assign(n_hours, std::vector<std::uint8_t>(n_dev, 0));
  ds.availability.assign(n_hours, 0);
  ds.avail_gap.assign(n_hours, 0);
  ds.month.resize(n_hours);
  ds.dow.resize(n_hours);
  ds.hod.resize(n_hours);

  for (std::size_t h = 0; h < n_hours; ++h) {
    for (std::size_t d = 0; d < n_dev; ++d) {
      ds.energy[h][d] = resampled.energy[h][src_col[d]];
      ds.gap[h][d] = resampled.gap[h][src_col[d]];
      const double threshold = catalog.devices[d].usage_watt_threshold;
      ds.usage[h][d] = ds.energy[h][d] > threshold ? 1 : 0;
      if (catalog.devices[d].availability_indicating) {
        if (ds.usage[h][d]) ds.availability[h] = 1;
        if (ds.gap[h][d]) ds.avail_gap[h] = 1;
      }
    }
    const CivilDateTime ct = civil_from_hour(ds.hour_at(h));
    ds.month[h] = static_cast<std::uint8_t>(ct.date.month);
    ds.dow[h] = static_cast<std::uint8_t>(day_of_week(ct.date));
    ds.hod[h] = static_cast<std::uint8_t>(ct.hour);
  }

  shift_column(ds.availability, 1, ds.avail_lag1);
  shift_column(ds.availability, 168, ds.avail_lag168);
  ds.usage_lag1.assign(n_hours, std::vector<std::uint8_t>(n_dev, 0));
  ds.usage_lag168.assign(n_hours, std::vector<std::uint8_t>(n_dev, 0));
  for (std::size_t d = 0; d < n_dev; ++d) {
    for (std::size_t h = 1; h < n_hours; ++h) ds.usage_lag1[h][d] = ds.usage[h - 1][d];
    for (std::size_t h = 168; h < n_hours; ++h) ds.usage_lag168[h][d] = ds.usage[h - 168][d];
  }
  return ds;
}

double estimate_avg_hourly_kwh(const HourlyDataset& ds, int device) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t h = 0; h < ds.n_hours(); ++h) {
    if (ds.usage[h][device]) {
      sum += ds.energy[h][device];
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count) / 1000.0;
}

double avg_hourly_kwh(const HourlyDataset& ds, const DeviceCatalog& catalog, int device) {
  const CatalogDevice* dev = catalog.find(ds.device_ids[device]);
  if (dev && dev->avg_hourly_kwh) return *dev->avg_hourly_kwh;
  return estimate_avg_hourly_kwh(ds, device);
}

DeviceCatalog load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot open catalog file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UserError("invalid catalog JSON in " + path + ": " + e.what());
  }
  DeviceCatalog cat;
  if (!j.contains("devices") || !j["devices"].is_array() || j["devices"].empty())
    throw UserError("catalog must list at least one device: " + path);
  for (const auto& item : j["devices"]) {
    CatalogDevice d;
    d.device_id = item.at("id").get<std::string>();
    d.availability_indicating = item.value("availability_indicating", false);
    d.shiftable = item.value("shiftable", true);
    d.usage_watt_threshold = item.value("usage_watt_threshold", 10.0);
    if (item.contains("avg_hourly_kwh") && !item["avg_hourly_kwh"].is_null()) {
      double v = item["avg_hourly_kwh"].get<double>();
      if (v < 0) throw UserError("avg_hourly_kwh must be >= 0 for " + d.device_id);
      d.avg_hourly_kwh = v;
    }
    if (d.usage_watt_threshold <= 0)
      throw UserError("usage_watt_threshold must be > 0 for " + d.device_id);
    cat.devices.push_back(std::move(d));
  }
  bool any_avail = false;
  for (const auto& d : cat.devices) any_avail |= d.availability_indicating;
  if (!any_avail)
    throw UserError("catalog needs at least one availability-indicating device: " + path);
  return cat;
}

void save_hourly(const HourlyDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UserError("cannot write hourly dataset: " + path);
  out << "hour,month,dow,hod,avail,avail_gap,avail_lag1,avail_lag168";
  for (const auto& id : ds.device_ids)
    out << ",energy_" << id << ",use_" << id << ",gap_" << id << ",lag1_" << id << ",lag168_"
        << id;
  out << "\n";
  for (std::size_t h = 0; h < ds.n_hours(); ++h) {
    out << format_hour(ds.hour_at(h)) << ',' << int(ds.month[h]) << ',' << int(ds.dow[h]) << ','
        << int(ds.hod[h]) << ',' << int(ds.availability[h]) << ',' << int(ds.avail_gap[h]) << ','
        << int(ds.avail_lag1[h]) << ',' << int(ds.avail_lag168[h]);
    for (std::size_t d = 0; d < ds.n_devices(); ++d)
      out << ',' << csv::format_exact(ds.energy[h][d]) << ',' << int(ds.usage[h][d]) << ','
          << int(ds.gap[h][d]) << ',' << int(ds.usage_lag1[h][d]) << ','
          << int(ds.usage_lag168[h][d]);
    out << "\n";
  }
  if (!out) throw UserError("failed writing hourly dataset: " + path);
}

HourlyDataset load_hourly(const std::string& path) {
  auto lines = csv::read_lines(path);
  if (lines.size() < 2) throw UserError("empty hourly dataset: " + path);
  auto header = csv::split(lines[0]);
  if (header.size() < 8 || header[0] != "hour")
    throw UserError("not an hourly dataset file: " + path);

  HourlyDataset ds;
  for (std::size_t c = 8; c < header.size(); c += 5) {
    const std::string& name = header[c];
    if (name.rfind("energy_", 0) != 0)
      throw UserError("unexpected column '" + name + "' in " + path);
    ds.device_ids.push_back(name.substr(7));
  }
  const std::size_t n_dev = ds.device_ids.size();
  const std::size_t n_hours = lines.size() - 1;
  ds.energy.assign(n_hours, std::vector<double>(n_dev, 0.0));
  ds.usage.assign(n_hours, std::vector<std::uint8_t>(n_dev, 0));
  ds.gap.assign(n_hours, std::vector<std::uint8_t>(n_dev, 0));
  ds.usage_lag1.assign(n_hours, std::vector<std::uint8_t>(n_dev, 0));
  ds.usage_lag168.assign(n_hours, std::vector<std::uint8_t>(n_dev, 0));
  ds.availability.resize(n_hours);
  ds.avail_gap.resize(n_hours);
  ds.avail_lag1.resize(n_hours);
  ds.avail_lag168.resize(n_hours);
  ds.month.resize(n_hours);
  ds.dow.resize(n_hours);
  ds.hod.resize(n_hours);

  for (std::size_t i = 0; i < n_hours; ++i) {
    auto cells = csv::split(lines[i + 1]);
    if (cells.size() != header.size()) throw UserError("short row in " + path);
    std::int64_t secs;
    if (!try_parse_datetime(cells[0], secs)) throw UserError("bad hour stamp in " + path);
    if (i == 0) ds.first_hour = hour_floor(secs);
    ds.month[i] = static_cast<std::uint8_t>(std::stoi(cells[1]));
    ds.dow[i] = static_cast<std::uint8_t>(std::stoi(cells[2]));
    ds.hod[i] = static_cast<std::uint8_t>(std::stoi(cells[3]));
    ds.availability[i] = cells[4] == "1";
    ds.avail_gap[i] = cells[5] == "1";
    ds.avail_lag1[i] = cells[6] == "1";
    ds.avail_lag168[i] = cells[7] == "1";
    for (std::size_t d = 0; d < n_dev; ++d) {
      const std::size_t c = 8 + d * 5;
      if (!csv::parse_double(cells[c], ds.energy[i][d]))
        throw UserError("bad energy value in " + path);
      ds.usage[i][d] = cells[c + 1] == "1";
      ds.gap[i][d] = cells[c + 2] == "1";
      ds.usage_lag1[i][d] = cells[c + 3] == "1";
      ds.usage_lag168[i][d] = cells[c + 4] == "1";
    }
  }
  return ds;
}

}  // namespace loadshift
