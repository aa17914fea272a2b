#pragma once

#include <filesystem>

#include "pvmppt/panel.hpp"

namespace pvmppt::cuk {

// Duty-cycle bounds used for dataset labels and controllers; keeps every
// static-gain expression away from its D = 0 / D = 1 singularities.
inline constexpr double kDutyMin = 0.05;
inline constexpr double kDutyMax = 0.95;

struct CukDesign {
  double e1_v;    // input rating
  double e2_v;    // output rating, negative (inverting topology)
  double p_s_w;   // source power rating
  double p_o_w;   // output power rating
  double f_sw_hz;
  double l1_h;
  double l2_h;
  double c1_f;
  double c2_f;

  CukDesign(double e1, double e2, double p_s, double p_o, double f_sw, double l1, double l2,
            double c1, double c2);

  static CukDesign defaults();
  static CukDesign from_file(const std::filesystem::path& path);
};

/// D such that |v_out/v_in| = D/(1-D).
double duty_from_gain(double v_in, double v_out_mag);

/// Duty placing the panel MPP across a resistive load under lossless
/// transfer (v_out = sqrt(p * r)); clamped to [kDutyMin, kDutyMax].
double duty_for_mpp(double v_mpp, double p_mpp, double r_load);

/// Input resistance the converter reflects to the panel.
double input_resistance(double duty, double r_load);

/// Panel operating point when loaded by the reflected resistance; bisection
/// on the monotone I-V curve to 1 mV.
panel::OperatingPoint operating_point(const panel::PanelSpec& spec, const panel::EnvCondition& env,
                                      double duty, double r_load);

struct CukState {
  double i_l1_a = 0.0;
  double i_l2_a = 0.0;
  double v_c1_v = 0.0;
  double v_c2_v = 0.0;  // magnitude of the inverted output
};

/// Fixed point of the averaged model for a constant duty.
CukState equilibrium(double duty, double v_in, double r_load);

/// One RK4 step of the state-space averaged model. Throws on divergence
/// (any state magnitude above 1e6), which names the offending dt.
CukState averaged_step(const CukDesign& design, const CukState& state, double duty, double v_in,
                       double r_load, double dt_s);

}  // namespace pvmppt::cuk
