// Remote adapter for signal endpoints that serve the fixture CSV format.
// Kept out of the test suite; fixtures provide deterministic coverage.

#include <memory>
#include <sstream>

#define CPPHTTPLIB_NO_EXCEPTIONS
#include <httplib.h>

#include "loadshift/csv.hpp"
#include "loadshift/signals.hpp"

namespace loadshift {

namespace {

class RemoteSource final : public SignalSource {
public:
  RemoteSource(SignalKind kind, const std::string& url) : kind_(kind), url_(url) {
    auto slash = url.find('/', url.find("//") == std::string::npos ? 0 : url.find("//") + 2);
    const std::string host = slash == std::string::npos ? url : url.substr(0, slash);
    const std::string path = slash == std::string::npos ? "/" : url.substr(slash);
    httplib::Client client(host);
    client.set_follow_location(true);
    auto res = client.Get(path);
    if (!res || res->status != 200)
      throw UserError("failed to fetch signal from " + url);
    parse_body(res->body);
  }

  SignalKind kind() const override { return kind_; }
  std::string describe() const override { return "remote:" + url_; }
  bool value_at(HourStamp hour, double& out) const override {
    if (hour < first_ || hour >= first_ + static_cast<HourStamp>(values_.size())) return false;
    out = values_[static_cast<std::size_t>(hour - first_)];
    return true;
  }

private:
  void parse_body(const std::string& body) {
    std::istringstream in(body);
    std::string line;
    bool header = true;
    HourStamp prev = 0;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (header) {
        header = false;
        continue;
      }
      auto cells = csv::split(line);
      std::int64_t secs;
      double v;
      if (cells.size() != 2 || !try_parse_datetime(cells[0], secs) ||
          !csv::parse_double(cells[1], v))
        throw UserError("malformed signal row from " + url_);
      const HourStamp hour = hour_floor(secs);
      if (values_.empty())
        first_ = hour;
      else if (hour != prev + 1)
        throw UserError("signal gap in response from " + url_);
      prev = hour;
      values_.push_back(v);
    }
    if (values_.empty()) throw UserError("no signal rows from " + url_);
  }

  SignalKind kind_;
  std::string url_;
  HourStamp first_ = 0;
  std::vector<double> values_;
};

}  // namespace

std::unique_ptr<SignalSource> make_remote_source(SignalKind kind, const std::string& url) {
  return std::make_unique<RemoteSource>(kind, url);
}

}  // namespace loadshift
