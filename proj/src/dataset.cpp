#include "pvmppt/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pvmppt/cuk.hpp"
#include "pvmppt/io.hpp"
#include "pvmppt/rng.hpp"

namespace pvmppt::dataset {

GridSpec GridSpec::desk_default() {
  GridSpec grid;
  grid.g_min_wm2 = 100.0;
  grid.g_max_wm2 = 1000.0;
  grid.g_step_wm2 = 10.0;
  grid.t_min_c = 5.11;
  grid.t_max_c = 60.93;
  grid.t_step_c = 0.5;
  grid.loads_ohm = {1, 3, 5, 7, 9, 11, 13, 15, 17, 19};
  return grid;
}

void GridSpec::validate() const {
  if (g_step_wm2 <= 0.0 || t_step_c <= 0.0)
    throw std::invalid_argument("grid steps must be positive");
  if (g_min_wm2 > g_max_wm2 || t_min_c > t_max_c)
    throw std::invalid_argument("grid ranges must be non-degenerate");
  if (loads_ohm.empty()) throw std::invalid_argument("grid needs at least one load");
  for (double r : loads_ohm) {
    if (r <= 0.0) throw std::invalid_argument("grid loads must be positive");
  }
}

namespace {

std::vector<double> axis(double lo, double hi, double step) {
  std::vector<double> values;
  const double slack = step * 1e-9;
  for (double x = lo; x <= hi + slack; x += step) values.push_back(x);
  return values;
}

}  // namespace

std::vector<double> GridSpec::irradiance_values() const {
  return axis(g_min_wm2, g_max_wm2, g_step_wm2);
}

std::vector<double> GridSpec::temperature_values() const {
  return axis(t_min_c, t_max_c, t_step_c);
}

std::size_t GridSpec::record_count() const {
  return irradiance_values().size() * temperature_values().size() * loads_ohm.size();
}

std::vector<DatasetRecord> generate(const panel::PanelSpec& spec, const GridSpec& grid) {
  grid.validate();
  const std::vector<double> gs = grid.irradiance_values();
  const std::vector<double> ts = grid.temperature_values();
  std::vector<DatasetRecord> records;
  records.reserve(gs.size() * ts.size() * grid.loads_ohm.size());
  for (double g : gs) {
    for (double t : ts) {
      const panel::OperatingPoint mpp = panel::mpp_estimate(spec, panel::EnvCondition(g, t));
      for (double r : grid.loads_ohm) {
        records.push_back({g, t, r, cuk::duty_for_mpp(mpp.v_v, mpp.p_w, r)});
      }
    }
  }
  return records;
}

SplitResult split(const std::vector<DatasetRecord>& records, double train_fraction,
                  std::uint64_t seed) {
  if (train_fraction <= 0.0 || train_fraction >= 1.0)
    throw std::invalid_argument("train_fraction must be in (0, 1)");
  if (records.size() < 2)
    throw std::runtime_error("insufficient data: need at least 2 records to split");

  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 engine(seed);
  rng::shuffle(order, engine);

  const std::size_t n_train =
      static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(records.size())));

  SplitResult result;
  result.train_indices.assign(order.begin(), order.begin() + n_train);
  result.validation_indices.assign(order.begin() + n_train, order.end());
  result.train.reserve(n_train);
  result.validation.reserve(records.size() - n_train);
  for (std::size_t idx : result.train_indices) result.train.push_back(records[idx]);
  for (std::size_t idx : result.validation_indices) result.validation.push_back(records[idx]);
  return result;
}

namespace {

FeatureRange range_of(const std::vector<DatasetRecord>& records,
                      double DatasetRecord::* field, const char* name) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& rec : records) {
    lo = std::min(lo, rec.*field);
    hi = std::max(hi, rec.*field);
  }
  if (!(lo < hi))
    throw std::runtime_error(std::string("degenerate feature: ") + name +
                             " has equal min and max");
  return FeatureRange{lo, hi};
}

}  // namespace

NormalizationParams NormalizationParams::from_records(const std::vector<DatasetRecord>& records) {
  if (records.empty()) throw std::runtime_error("cannot derive normalization from empty set");
  NormalizationParams p;
  p.irradiance = range_of(records, &DatasetRecord::irradiance_wm2, "irradiance");
  p.temperature = range_of(records, &DatasetRecord::temperature_c, "temperature");
  p.load = range_of(records, &DatasetRecord::load_ohm, "load");
  p.duty = range_of(records, &DatasetRecord::duty, "duty");
  return p;
}

double NormalizationParams::to_unit(const FeatureRange& r, double x) {
  return 2.0 * (x - r.min) / (r.max - r.min) - 1.0;
}

double NormalizationParams::from_unit(const FeatureRange& r, double xn) {
  return r.min + (xn + 1.0) * (r.max - r.min) / 2.0;
}

DatasetRecord normalize(const DatasetRecord& rec, const NormalizationParams& params) {
  return DatasetRecord{
      NormalizationParams::to_unit(params.irradiance, rec.irradiance_wm2),
      NormalizationParams::to_unit(params.temperature, rec.temperature_c),
      NormalizationParams::to_unit(params.load, rec.load_ohm),
      NormalizationParams::to_unit(params.duty, rec.duty),
  };
}

DatasetRecord denormalize(const DatasetRecord& rec, const NormalizationParams& params) {
  return DatasetRecord{
      NormalizationParams::from_unit(params.irradiance, rec.irradiance_wm2),
      NormalizationParams::from_unit(params.temperature, rec.temperature_c),
      NormalizationParams::from_unit(params.load, rec.load_ohm),
      NormalizationParams::from_unit(params.duty, rec.duty),
  };
}

std::vector<DatasetRecord> normalize(const std::vector<DatasetRecord>& records,
                                     const NormalizationParams& params) {
  std::vector<DatasetRecord> out;
  out.reserve(records.size());
  for (const auto& rec : records) out.push_back(normalize(rec, params));
  return out;
}

std::vector<DatasetRecord> denormalize(const std::vector<DatasetRecord>& records,
                                       const NormalizationParams& params) {
  std::vector<DatasetRecord> out;
  out.reserve(records.size());
  for (const auto& rec : records) out.push_back(denormalize(rec, params));
  return out;
}

std::size_t Histogram::modal_bin() const {
  return static_cast<std::size_t>(
      std::max_element(counts.begin(), counts.end()) - counts.begin());
}

Histogram make_histogram(std::span<const double> values, int bins) {
  if (values.empty()) throw std::runtime_error("cannot histogram an empty set");
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  double lo = values[0];
  double hi = values[0];
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo == hi) {
    // All-equal data still gets one meaningful bin.
    lo -= 0.5;
    hi += 0.5;
  }
  Histogram h;
  h.edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) {
    h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / bins;
  }
  h.counts.assign(bins, 0);
  const double width = (hi - lo) / bins;
  for (double v : values) {
    int idx = static_cast<int>((v - lo) / width);
    idx = std::clamp(idx, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(idx)];
  }
  return h;
}

DatasetSummary summarize(const std::vector<DatasetRecord>& records, int bins) {
  if (records.empty()) throw std::runtime_error("cannot summarize an empty dataset");

  std::vector<double> gs, ts, ds;
  gs.reserve(records.size());
  ts.reserve(records.size());
  ds.reserve(records.size());
  for (const auto& rec : records) {
    gs.push_back(rec.irradiance_wm2);
    ts.push_back(rec.temperature_c);
    ds.push_back(rec.duty);
  }

  DatasetSummary summary;
  summary.temperature = make_histogram(ts, bins);
  summary.irradiance = make_histogram(gs, bins);
  summary.duty = make_histogram(ds, bins);

  summary.correlation.reserve(records.size());
  std::vector<DatasetRecord> by_load(records);
  std::stable_sort(by_load.begin(), by_load.end(),
                   [](const DatasetRecord& a, const DatasetRecord& b) {
                     return a.load_ohm < b.load_ohm;
                   });
  for (const auto& rec : by_load) {
    summary.correlation.push_back(
        {rec.load_ohm, rec.irradiance_wm2, rec.temperature_c, rec.duty});
  }

  const auto [g_lo_it, g_hi_it] = std::minmax_element(gs.begin(), gs.end());
  const double g_lo = *g_lo_it;
  const double g_hi = *g_hi_it;
  const double band = 0.25 * (g_hi - g_lo);
  double low_min = std::numeric_limits<double>::infinity();
  double low_max = -low_min;
  double high_min = low_min;
  double high_max = -low_min;
  for (const auto& rec : records) {
    if (rec.irradiance_wm2 <= g_lo + band) {
      low_min = std::min(low_min, rec.duty);
      low_max = std::max(low_max, rec.duty);
    }
    if (rec.irradiance_wm2 >= g_hi - band) {
      high_min = std::min(high_min, rec.duty);
      high_max = std::max(high_max, rec.duty);
    }
  }
  summary.duty_spread_low_g = low_max - low_min;
  summary.duty_spread_high_g = high_max - high_min;
  return summary;
}

void write_csv(const std::filesystem::path& path, const std::vector<DatasetRecord>& records) {
  std::vector<std::vector<double>> rows;
  rows.reserve(records.size());
  for (const auto& rec : records) {
    rows.push_back({rec.irradiance_wm2, rec.temperature_c, rec.load_ohm, rec.duty});
  }
  io::write_csv(path, {"irradiance_wm2", "temperature_c", "load_ohm", "duty"}, rows, 9);
}

std::vector<DatasetRecord> read_csv(const std::filesystem::path& path) {
  const io::CsvTable table = io::read_csv(path);
  const int g = table.column("irradiance_wm2");
  const int t = table.column("temperature_c");
  const int r = table.column("load_ohm");
  const int d = table.column("duty");
  if (g < 0 || t < 0 || r < 0 || d < 0)
    throw std::runtime_error(path.string() + ": missing dataset columns");
  std::vector<DatasetRecord> records;
  records.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    records.push_back({row[g], row[t], row[r], row[d]});
  }
  return records;
}

std::string serialize(const NormalizationParams& params) {
  io::KeyValueDoc doc;
  const auto put = [&doc](const char* name, const FeatureRange& r) {
    doc.set_double(std::string(name) + ".min", r.min);
    doc.set_double(std::string(name) + ".max", r.max);
  };
  put("irradiance", params.irradiance);
  put("temperature", params.temperature);
  put("load", params.load);
  put("duty", params.duty);
  return doc.serialize();
}

NormalizationParams parse_normalization(std::string_view text) {
  const io::KeyValueDoc doc = io::KeyValueDoc::parse(text);
  const auto get = [&doc](const char* name) {
    return FeatureRange{doc.get_double(std::string(name) + ".min"),
                        doc.get_double(std::string(name) + ".max")};
  };
  NormalizationParams p;
  p.irradiance = get("irradiance");
  p.temperature = get("temperature");
  p.load = get("load");
  p.duty = get("duty");
  return p;
}

}  // namespace pvmppt::dataset
