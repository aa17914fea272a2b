#pragma once

#include <filesystem>

namespace pvmppt::panel {

// Datasheet electrical parameters of a PV module.
struct PanelSpec {
  double p_max_w;
  double efficiency;
  double v_mpp_v;
  double i_mpp_a;
  double v_oc_v;
  double i_sc_a;
  double beta_voc_per_c;   // fractional V_oc temperature coefficient, negative
  double alpha_isc_per_c;  // fractional I_sc temperature coefficient, positive
  int n_cells;
  double g_stc_wm2;
  double t_stc_c;

  PanelSpec(double p_max, double eff, double v_mpp, double i_mpp, double v_oc, double i_sc,
            double beta_voc, double alpha_isc, int cells, double g_stc = 1000.0,
            double t_stc = 25.0);

  static PanelSpec yl150p17b();
  static PanelSpec from_file(const std::filesystem::path& path);
};

struct EnvCondition {
  double irradiance_wm2;
  double temperature_c;

  EnvCondition(double irradiance, double temperature);
};

struct OperatingPoint {
  double v_v;
  double i_a;
  double p_w;
};

double thermal_voltage_v(double temperature_c);

double corrected_i_sc(const PanelSpec& spec, const EnvCondition& env);
double corrected_v_oc(const PanelSpec& spec, const EnvCondition& env);

/// Maximum power point from the datasheet correction model: current linear in
/// irradiance and temperature, voltage with linear temperature droop plus a
/// thermal-voltage log term in irradiance (floored at 5% of v_mpp).
OperatingPoint mpp_estimate(const PanelSpec& spec, const EnvCondition& env);

/// Explicit single-exponential I-V curve pinned to (0, I_sc'), (v_mpp, i_mpp)
/// and (V_oc', ~0). Monotone non-increasing in v; clamped at zero.
double iv_current(const PanelSpec& spec, const EnvCondition& env, double v_v);

/// Brute-force MPP: scans the I-V curve at 1 mV, ties toward lower voltage.
OperatingPoint mpp_solve(const PanelSpec& spec, const EnvCondition& env);

}  // namespace pvmppt::panel
