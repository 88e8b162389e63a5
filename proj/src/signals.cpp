#include "loadshift/signals.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "loadshift/csv.hpp"

namespace loadshift {

const char* to_string(SignalKind k) { return k == SignalKind::price ? "price" : "carbon"; }

namespace {

void check_value(SignalKind kind, double v, const std::string& where) {
  if (!std::isfinite(v)) throw UserError("non-finite " + std::string(to_string(kind)) + " value in " + where);
  if (kind == SignalKind::carbon && v < 0)
    throw UserError("negative carbon intensity in " + where);
}

}  // namespace

DayAheadSignal fetch_signal(const SignalSource& source, SignalKind kind,
                            HourStamp horizon_start) {
  if (kind != source.kind())
    throw UserError(std::string("source ") + source.describe() + " does not provide " +
                    to_string(kind) + " data");
  DayAheadSignal sig{kind, horizon_start, {}};
  for (int k = 0; k < 24; ++k) {
    double v;
    if (!source.value_at(horizon_start + k, v))
      throw UserError(std::string(to_string(kind)) + " signal does not cover " +
                      format_hour(horizon_start + k) + " (" + source.describe() + ")");
    check_value(kind, v, source.describe());
    sig.values[k] = v;
  }
  return sig;
}

FixtureSource::FixtureSource(SignalKind kind, const std::string& path)
    : kind_(kind), path_(path) {
  auto lines = csv::read_lines(path);
  if (lines.size() < 2) throw UserError("empty signal fixture: " + path);
  auto header = csv::split(lines[0]);
  if (header.size() != 2 || header[0] != "datetime" || header[1] != "value")
    throw UserError("expected header 'datetime,value' in " + path);
  HourStamp prev = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto cells = csv::split(lines[i]);
    std::int64_t secs;
    double v;
    if (cells.size() != 2 || !try_parse_datetime(cells[0], secs) ||
        !csv::parse_double(cells[1], v))
      throw UserError("malformed row " + std::to_string(i + 1) + " in " + path);
    check_value(kind, v, path);
    const HourStamp hour = hour_floor(secs);
    if (values_.empty()) {
      first_hour_ = hour;
    } else if (hour != prev + 1) {
      throw UserError("signal fixture has a gap after " + format_hour(prev) + ": " + path);
    }
    prev = hour;
    values_.push_back(v);
  }
  if (values_.empty()) throw UserError("empty signal fixture: " + path);
}

bool FixtureSource::value_at(HourStamp hour, double& out) const {
  if (hour < first_hour_ || hour > last_hour()) return false;
  out = values_[static_cast<std::size_t>(hour - first_hour_)];
  return true;
}

int FixtureSource::first_year() const { return civil_from_hour(first_hour_).date.year; }

bool SyntheticSource::value_at(HourStamp hour, double& out) const {
  const int hod = civil_from_hour(hour).hour;
  out = offset_ - amplitude_ * std::cos(2.0 * 3.14159265358979323846 * hod / 24.0);
  return true;
}

CivilDate align_date(const CivilDate& consumption_date, int signal_year) {
  CivilDate out{signal_year, consumption_date.month, consumption_date.day};
  const int dim = days_in_month(signal_year, consumption_date.month);
  if (out.day > dim) out.day = dim;
  return out;
}

void save_signal_fixture(const std::string& path, HourStamp first_hour,
                         const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw UserError("cannot write signal fixture: " + path);
  out << "datetime,value\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    out << format_hour(first_hour + static_cast<HourStamp>(i)) << ','
        << csv::format_exact(values[i]) << "\n";
  if (!out) throw UserError("failed writing signal fixture: " + path);
}

}  // namespace loadshift
