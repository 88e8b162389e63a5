#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "loadshift/common.hpp"

namespace loadshift {

enum class SignalKind { price, carbon };

const char* to_string(SignalKind k);

/// One day-ahead vector: price in currency/MWh or carbon in gCO2/kWh.
struct DayAheadSignal {
  SignalKind kind;
  HourStamp horizon_start;
  std::array<double, 24> values;
};

/// A source answers for exactly one signal kind over some hour coverage.
/// Requests outside coverage or straddling a gap are errors, never padded.
class SignalSource {
public:
  virtual ~SignalSource() = default;
  virtual SignalKind kind() const = 0;
  virtual std::string describe() const = 0;
  /// Value at one hour; false when the hour is not covered.
  virtual bool value_at(HourStamp hour, double& out) const = 0;
};

DayAheadSignal fetch_signal(const SignalSource& source, SignalKind kind, HourStamp horizon_start);

/// CSV fixture with columns datetime,value and contiguous hourly rows.
class FixtureSource final : public SignalSource {
public:
  FixtureSource(SignalKind kind, const std::string& path);
  SignalKind kind() const override { return kind_; }
  std::string describe() const override { return "fixture:" + path_; }
  bool value_at(HourStamp hour, double& out) const override;
  HourStamp first_hour() const { return first_hour_; }
  HourStamp last_hour() const { return first_hour_ + static_cast<HourStamp>(values_.size()) - 1; }
  int first_year() const;

private:
  SignalKind kind_;
  std::string path_;
  HourStamp first_hour_ = 0;
  std::vector<double> values_;
};

/// Deterministic daily profile for tests and demos:
/// value(h) = offset - amplitude * cos(2*pi * hour_of_day / 24),
/// minimum at midnight, maximum at hour 12.
class SyntheticSource final : public SignalSource {
public:
  SyntheticSource(SignalKind kind, double offset, double amplitude)
      : kind_(kind), offset_(offset), amplitude_(amplitude) {}
  SignalKind kind() const override { return kind_; }
  std::string describe() const override { return "synthetic"; }
  bool value_at(HourStamp hour, double& out) const override;

private:
  SignalKind kind_;
  double offset_, amplitude_;
};

/// Optional adapter for live endpoints serving the fixture CSV format over
/// HTTP. Not exercised by the test suite; fixtures cover everything else.
std::unique_ptr<SignalSource> make_remote_source(SignalKind kind, const std::string& url);

/// Maps a consumption date onto a signal calendar year, keeping day and
/// month; Feb 29 falls back to Feb 28 in non-leap years.
CivilDate align_date(const CivilDate& consumption_date, int signal_year);

void save_signal_fixture(const std::string& path, HourStamp first_hour,
                         const std::vector<double>& values);

}  // namespace loadshift
