#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pvmppt/panel.hpp"

namespace pvmppt::dataset {

struct DatasetRecord {
  double irradiance_wm2;
  double temperature_c;
  double load_ohm;
  double duty;
};

struct GridSpec {
  double g_min_wm2, g_max_wm2, g_step_wm2;
  double t_min_c, t_max_c, t_step_c;
  std::vector<double> loads_ohm;

  static GridSpec desk_default();

  void validate() const;
  std::vector<double> irradiance_values() const;
  std::vector<double> temperature_values() const;
  std::size_t record_count() const;
};

/// One record per (G, T, R) grid point, in deterministic order
/// (irradiance outer, temperature middle, load inner).
std::vector<DatasetRecord> generate(const panel::PanelSpec& spec, const GridSpec& grid);

struct SplitResult {
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> validation_indices;
  std::vector<DatasetRecord> train;
  std::vector<DatasetRecord> validation;
};

/// Seeded uniform shuffle then prefix split; exact partition of the input.
SplitResult split(const std::vector<DatasetRecord>& records, double train_fraction,
                  std::uint64_t seed);

struct FeatureRange {
  double min;
  double max;
};

struct NormalizationParams {
  FeatureRange irradiance, temperature, load, duty;

  static NormalizationParams from_records(const std::vector<DatasetRecord>& records);

  static double to_unit(const FeatureRange& r, double x);    // [min, max] -> [-1, 1]
  static double from_unit(const FeatureRange& r, double xn); // exact inverse
};

DatasetRecord normalize(const DatasetRecord& rec, const NormalizationParams& params);
DatasetRecord denormalize(const DatasetRecord& rec, const NormalizationParams& params);
std::vector<DatasetRecord> normalize(const std::vector<DatasetRecord>& records,
                                     const NormalizationParams& params);
std::vector<DatasetRecord> denormalize(const std::vector<DatasetRecord>& records,
                                       const NormalizationParams& params);

struct Histogram {
  std::vector<double> edges;         // bins + 1
  std::vector<std::size_t> counts;   // bins
  std::size_t modal_bin() const;
};

Histogram make_histogram(std::span<const double> values, int bins);

struct CorrelationRow {
  double load_ohm, irradiance_wm2, temperature_c, duty;
};

struct DatasetSummary {
  Histogram temperature;
  Histogram irradiance;
  Histogram duty;
  std::vector<CorrelationRow> correlation;  // grouped by load
  // Duty spread (max - min) over the bottom / top quarter of the irradiance
  // range, the regions the low/high-irradiance comparisons probe.
  double duty_spread_low_g;
  double duty_spread_high_g;
};

DatasetSummary summarize(const std::vector<DatasetRecord>& records, int bins = 50);

void write_csv(const std::filesystem::path& path, const std::vector<DatasetRecord>& records);
std::vector<DatasetRecord> read_csv(const std::filesystem::path& path);

std::string serialize(const NormalizationParams& params);
NormalizationParams parse_normalization(std::string_view text);

}  // namespace pvmppt::dataset
