#include "pvmppt/mppt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pvmppt/io.hpp"

namespace pvmppt::mppt {

PoState po_step(const PoState& state, double measured_power_w) {
  if (state.step <= 0.0) throw std::invalid_argument("po step size must be positive");
  PoState next = state;
  next.last_direction = measured_power_w >= state.last_power ? state.last_direction
                                                             : -state.last_direction;
  next.duty = std::clamp(state.duty + next.last_direction * state.step, cuk::kDutyMin,
                         cuk::kDutyMax);
  next.last_power = measured_power_w;
  return next;
}

namespace {

bool outside_envelope(const dataset::FeatureRange& r, double x) {
  const double center = 0.5 * (r.min + r.max);
  const double half_width = 0.5 * (r.max - r.min);
  return std::abs(x - center) > 1.5 * half_width;
}

}  // namespace

DutyDecision ann_duty(const AnnController& controller, double irradiance_wm2,
                      double temperature_c, double load_ohm) {
  if (!std::isfinite(irradiance_wm2) || !std::isfinite(temperature_c) ||
      !std::isfinite(load_ohm)) {
    throw std::invalid_argument("ann_duty requires finite inputs");
  }
  const dataset::NormalizationParams& norm = controller.norm;
  const std::vector<double> input = {
      dataset::NormalizationParams::to_unit(norm.irradiance, irradiance_wm2),
      dataset::NormalizationParams::to_unit(norm.temperature, temperature_c),
      dataset::NormalizationParams::to_unit(norm.load, load_ohm),
  };
  const double y = forward(controller.net, input)[0];
  const double duty =
      std::clamp(dataset::NormalizationParams::from_unit(norm.duty, y), cuk::kDutyMin,
                 cuk::kDutyMax);
  const bool warn = outside_envelope(norm.irradiance, irradiance_wm2) ||
                    outside_envelope(norm.temperature, temperature_c) ||
                    outside_envelope(norm.load, load_ohm);
  return DutyDecision{duty, warn};
}

void DayProfile::validate() const {
  if (points.empty()) throw std::invalid_argument("day profile is empty");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const ProfilePoint& p = points[i];
    if (i > 0 && p.time_h <= points[i - 1].time_h)
      throw std::invalid_argument("day profile times must be strictly increasing");
    // Same sanity bands the panel model enforces.
    panel::EnvCondition(p.irradiance_wm2, p.temperature_c);
    if (p.load_ohm <= 0.0) throw std::invalid_argument("day profile load must be positive");
  }
}

DayProfile DayProfile::from_csv(const std::filesystem::path& path, double default_load_ohm) {
  const io::CsvTable table = io::read_csv(path);
  const int t = table.column("time_h");
  const int g = table.column("irradiance_wm2");
  const int c = table.column("temperature_c");
  const int r = table.column("load_ohm");
  if (t < 0 || g < 0 || c < 0)
    throw std::runtime_error(path.string() +
                             ": day profile needs time_h, irradiance_wm2, temperature_c");
  DayProfile profile;
  profile.points.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    profile.points.push_back(
        {row[t], row[g], row[c], r >= 0 ? row[r] : default_load_ohm});
  }
  profile.validate();
  return profile;
}

const ProfilePoint& DayProfile::at_time(double time_h) const {
  auto it = std::upper_bound(points.begin(), points.end(), time_h,
                             [](double t, const ProfilePoint& p) { return t < p.time_h; });
  if (it == points.begin()) return points.front();
  return *(it - 1);
}

const char* to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::po: return "po";
    case ControllerKind::ann: return "ann";
  }
  throw std::logic_error("unknown controller kind");
}

namespace {

double stddev(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

}  // namespace

RunReport simulate_day(const DayProfile& profile, const panel::PanelSpec& spec,
                       const cuk::CukDesign& design, ControllerKind kind,
                       const SimulateOptions& options) {
  profile.validate();
  (void)design;  // plant is evaluated quasi-statically; converter dynamics are not exercised here
  if (options.control_period_s <= 0.0)
    throw std::invalid_argument("control period must be positive");
  if (kind == ControllerKind::ann && options.ann == nullptr)
    throw std::invalid_argument("ann controller requires a loaded network");

  RunReport report;
  report.controller = to_string(kind);

  PoState po;
  po.duty = std::clamp(options.po_initial_duty, cuk::kDutyMin, cuk::kDutyMax);
  po.step = options.po_step_size;

  const double start_h = profile.points.front().time_h;
  const double end_h = profile.points.back().time_h;
  const double period_h = options.control_period_s / 3600.0;
  const std::size_t ticks =
      static_cast<std::size_t>(std::floor((end_h - start_h) / period_h)) + 1;

  double previous_power = 0.0;
  for (std::size_t n = 0; n < ticks; ++n) {
    const double t = start_h + static_cast<double>(n) * period_h;
    const ProfilePoint& pt = profile.at_time(t);
    const panel::EnvCondition env(pt.irradiance_wm2, pt.temperature_c);

    double duty;
    if (kind == ControllerKind::ann) {
      duty = ann_duty(*options.ann, pt.irradiance_wm2, pt.temperature_c, pt.load_ohm).duty;
    } else {
      if (n > 0) po = po_step(po, previous_power);
      duty = po.duty;
    }

    const panel::OperatingPoint op = cuk::operating_point(spec, env, duty, pt.load_ohm);
    const panel::OperatingPoint mpp = panel::mpp_solve(spec, env);

    report.time_h.push_back(t);
    report.duty.push_back(duty);
    report.v_v.push_back(op.v_v);
    report.i_a.push_back(op.i_a);
    report.p_w.push_back(op.p_w);
    report.p_mpp_w.push_back(mpp.p_w);
    previous_power = op.p_w;
  }

  double harvested = 0.0;
  double available = 0.0;
  for (std::size_t n = 0; n < ticks; ++n) {
    harvested += report.p_w[n];
    available += report.p_mpp_w[n];
  }
  report.metrics.tracking_efficiency = available > 0.0 ? harvested / available : 1.0;
  report.metrics.duty_stddev = stddev(report.duty);
  report.metrics.power_stddev = stddev(report.p_w);
  return report;
}

Comparison compare(const RunReport& a, const RunReport& b) {
  if (a.time_h.size() != b.time_h.size())
    throw std::runtime_error("cannot compare: series lengths differ");
  for (std::size_t n = 0; n < a.time_h.size(); ++n) {
    if (a.time_h[n] != b.time_h[n])
      throw std::runtime_error("cannot compare: series are not time-aligned");
  }

  Comparison cmp;
  cmp.controller_a = a.controller;
  cmp.controller_b = b.controller;
  cmp.time_h = a.time_h;
  cmp.duty_diff.reserve(a.time_h.size());
  for (std::size_t n = 0; n < a.time_h.size(); ++n) {
    cmp.duty_diff.push_back(a.duty[n] - b.duty[n]);
    cmp.current_diff.push_back(a.i_a[n] - b.i_a[n]);
    cmp.voltage_diff.push_back(a.v_v[n] - b.v_v[n]);
    cmp.power_diff.push_back(a.p_w[n] - b.p_w[n]);
  }

  const auto emit = [&cmp, &a, &b](const std::string& name, double va, double vb,
                                   bool higher_wins) {
    std::string winner = "tie";
    if (va != vb) {
      const bool a_wins = higher_wins ? va > vb : va < vb;
      winner = a_wins ? a.controller : b.controller;
    }
    cmp.metrics.push_back({name, va, vb, winner});
  };
  emit("tracking_efficiency", a.metrics.tracking_efficiency, b.metrics.tracking_efficiency, true);
  emit("duty_stddev", a.metrics.duty_stddev, b.metrics.duty_stddev, false);
  emit("power_stddev", a.metrics.power_stddev, b.metrics.power_stddev, false);
  return cmp;
}

}  // namespace pvmppt::mppt
