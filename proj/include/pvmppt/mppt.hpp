#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pvmppt/ann.hpp"
#include "pvmppt/cuk.hpp"
#include "pvmppt/dataset.hpp"
#include "pvmppt/panel.hpp"

namespace pvmppt::mppt {

struct PoState {
  double duty = 0.5;
  double step = 0.005;
  double last_power = 0.0;
  int last_direction = 1;
};

/// Fixed-step hill climb: keep direction while power does not drop, reverse
/// otherwise; duty clamped to [cuk::kDutyMin, cuk::kDutyMax].
PoState po_step(const PoState& state, double measured_power_w);

struct AnnController {
  ann::MlpNetwork net;
  dataset::NormalizationParams norm;
};

struct DutyDecision {
  double duty;
  bool out_of_envelope;  // any input outside 1.5x the training envelope
};

DutyDecision ann_duty(const AnnController& controller, double irradiance_wm2,
                      double temperature_c, double load_ohm);

struct ProfilePoint {
  double time_h;
  double irradiance_wm2;
  double temperature_c;
  double load_ohm;
};

struct DayProfile {
  std::vector<ProfilePoint> points;

  void validate() const;
  static DayProfile from_csv(const std::filesystem::path& path, double default_load_ohm);

  // Zero-order hold: last point with time <= time_h.
  const ProfilePoint& at_time(double time_h) const;
};

enum class ControllerKind { po, ann };
const char* to_string(ControllerKind kind);

struct RunMetrics {
  double tracking_efficiency;
  double duty_stddev;
  double power_stddev;
};

struct RunReport {
  std::string controller;
  std::vector<double> time_h;
  std::vector<double> duty;
  std::vector<double> v_v;
  std::vector<double> i_a;
  std::vector<double> p_w;
  std::vector<double> p_mpp_w;
  RunMetrics metrics;
};

struct SimulateOptions {
  double control_period_s = 0.1;
  double po_step_size = 0.005;
  double po_initial_duty = 0.5;
  const AnnController* ann = nullptr;  // required for ControllerKind::ann
};

/// Closed-loop day simulation against the quasi-static plant
/// (panel + reflected converter load).
RunReport simulate_day(const DayProfile& profile, const panel::PanelSpec& spec,
                       const cuk::CukDesign& design, ControllerKind kind,
                       const SimulateOptions& options);

struct MetricLine {
  std::string metric;
  double a;
  double b;
  std::string winner;
};

struct Comparison {
  std::string controller_a;
  std::string controller_b;
  std::vector<MetricLine> metrics;
  std::vector<double> time_h;
  std::vector<double> duty_diff;     // a - b
  std::vector<double> current_diff;
  std::vector<double> voltage_diff;
  std::vector<double> power_diff;
};

Comparison compare(const RunReport& a, const RunReport& b);

}  // namespace pvmppt::mppt
