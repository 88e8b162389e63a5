// Compares the serial reference day loop against the OpenMP one on a
// synthetic household and checks that both produce identical forecasts.
#include <chrono>
#include <cstdio>
#include <filesystem>

#include "loadshift/csv.hpp"
#include "loadshift/eval.hpp"
#include "loadshift/ingest.hpp"
#include "loadshift/parallel.hpp"
#include "loadshift/predictors.hpp"
#include "loadshift/synth.hpp"

using namespace loadshift;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::uint64_t table_hash(const ForecastTable& table) {
  Fnv1a h;
  const auto feed = [&](const RollingResult& r) {
    for (const auto& day : r.days)
      for (double p : day.probs) h.update(csv::format_exact(p));
  };
  feed(table.availability);
  for (const auto& r : table.usage) feed(r);
  return h.digest();
}

}  // namespace

int main(int argc, char** argv) {
  int days = 180;
  ModelFamily family = ModelFamily::logreg;
  if (argc > 1) days = std::atoi(argv[1]);
  if (argc > 2) family = family_from_string(argv[2]);

  const std::string dir = (std::filesystem::temp_directory_path() / "loadshift_bench").string();
  SynthSpec spec;
  spec.days = days;
  write_demo(dir, spec);
  const auto raw = load_readings(dir + "/consumption.csv");
  const auto catalog = load_catalog(dir + "/catalog.json");
  const auto ds = engineer_features(resample_hourly(raw.devices), catalog);
  const auto mapping = load_mapping(dir + "/mapping.json");
  const FixtureSource carbon(SignalKind::carbon, dir + "/carbon.csv");
  const FixtureSource price(SignalKind::price, dir + "/price.csv");
  const SignalPair signals{carbon, price, std::nullopt};
  const TrainingSchedule sched;

  std::printf("household: %d days, %zu devices, family %s, %u hardware threads\n\n", days,
              ds.n_devices(), to_string(family), hardware_threads());
  std::printf("%-28s %10s %10s %9s\n", "kernel", "serial s", "parallel s", "speedup");

  auto t0 = std::chrono::steady_clock::now();
  const auto table_serial = build_forecast_table(ds, catalog, family, sched, 42, false);
  const double forecast_serial = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const auto table_parallel = build_forecast_table(ds, catalog, family, sched, 42, true);
  const double forecast_parallel = seconds_since(t0);
  std::printf("%-28s %10.2f %10.2f %8.2fx\n", "rolling forecasts", forecast_serial,
              forecast_parallel, forecast_serial / forecast_parallel);

  t0 = std::chrono::steady_clock::now();
  const auto grid_serial = grid_search(ds, signals, mapping, catalog, RecommendationConfig{},
                                       Grids{}, Objective::emissions, table_serial, false);
  const double search_serial = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const auto grid_parallel = grid_search(ds, signals, mapping, catalog, RecommendationConfig{},
                                         Grids{}, Objective::emissions, table_parallel, true);
  const double search_parallel = seconds_since(t0);
  std::printf("%-28s %10.2f %10.2f %8.2fx\n\n", "threshold grid search", search_serial,
              search_parallel, search_serial / search_parallel);

  const bool same_table = table_hash(table_serial) == table_hash(table_parallel);
  bool same_grid = grid_serial.best_index == grid_parallel.best_index;
  for (std::size_t i = 0; same_grid && i < grid_serial.table.size(); ++i)
    same_grid = grid_serial.table[i].report.total_emissions_saving ==
                grid_parallel.table[i].report.total_emissions_saving;
  std::printf("forecasts identical: %s\ngrid results identical: %s\n",
              same_table ? "yes" : "NO", same_grid ? "yes" : "NO");
  return same_table && same_grid ? 0 : 1;
}
