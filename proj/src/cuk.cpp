#include "pvmppt/cuk.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pvmppt/io.hpp"

namespace pvmppt::cuk {

CukDesign::CukDesign(double e1, double e2, double p_s, double p_o, double f_sw, double l1,
                     double l2, double c1, double c2)
    : e1_v(e1), e2_v(e2), p_s_w(p_s), p_o_w(p_o), f_sw_hz(f_sw), l1_h(l1), l2_h(l2), c1_f(c1),
      c2_f(c2) {
  if (!(e1 > 0.0 && e2 < 0.0))
    throw std::invalid_argument("cuk design requires e1 > 0 > e2");
  if (f_sw <= 0.0) throw std::invalid_argument("cuk design requires f_sw > 0");
  if (l1 <= 0.0 || l2 <= 0.0 || c1 <= 0.0 || c2 <= 0.0)
    throw std::invalid_argument("cuk design requires positive component values");
  if (p_s <= 0.0 || p_o <= 0.0)
    throw std::invalid_argument("cuk design requires positive power ratings");
}

CukDesign CukDesign::defaults() {
  return CukDesign(18.5, -38.729, 150.0, 150.0, 100e3, 308e-6, 3232e-6, 5e-6, 25e-9);
}

CukDesign CukDesign::from_file(const std::filesystem::path& path) {
  const io::KeyValueDoc doc = io::KeyValueDoc::load(path);
  return CukDesign(doc.get_double("e1"), doc.get_double("e2"), doc.get_double("p_s"),
                   doc.get_double("p_o"), doc.get_double("f_sw"), doc.get_double("l1"),
                   doc.get_double("l2"), doc.get_double("c1"), doc.get_double("c2"));
}

double duty_from_gain(double v_in, double v_out_mag) {
  if (v_in <= 0.0) throw std::domain_error("duty_from_gain requires v_in > 0");
  if (v_out_mag < 0.0) throw std::domain_error("duty_from_gain requires v_out_mag >= 0");
  return v_out_mag / (v_in + v_out_mag);
}

double duty_for_mpp(double v_mpp, double p_mpp, double r_load) {
  if (v_mpp <= 0.0 || p_mpp <= 0.0 || r_load <= 0.0)
    throw std::domain_error("duty_for_mpp requires positive voltage, power and load");
  const double v_out = std::sqrt(p_mpp * r_load);
  return std::clamp(duty_from_gain(v_mpp, v_out), kDutyMin, kDutyMax);
}

double input_resistance(double duty, double r_load) {
  if (duty <= 0.0 || duty >= 1.0)
    throw std::domain_error("input_resistance requires duty in (0, 1)");
  if (r_load <= 0.0) throw std::domain_error("input_resistance requires r_load > 0");
  const double ratio = (1.0 - duty) / duty;
  return r_load * ratio * ratio;
}

panel::OperatingPoint operating_point(const panel::PanelSpec& spec,
                                      const panel::EnvCondition& env, double duty,
                                      double r_load) {
  const double r_in = input_resistance(duty, r_load);
  if (panel::corrected_i_sc(spec, env) <= 0.0) return panel::OperatingPoint{0.0, 0.0, 0.0};
  const double v_oc = panel::corrected_v_oc(spec, env);

  // Load line i = v / r_in intersects the monotone I-V curve exactly once;
  // the mismatch i_panel - i_load is positive at 0 and negative at V_oc'.
  double lo = 0.0;
  double hi = v_oc;
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    const double mismatch = panel::iv_current(spec, env, mid) - mid / r_in;
    if (mismatch > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double v = 0.5 * (lo + hi);
  const double i = v / r_in;
  return panel::OperatingPoint{v, i, v * i};
}

CukState equilibrium(double duty, double v_in, double r_load) {
  if (duty <= 0.0 || duty >= 1.0)
    throw std::domain_error("equilibrium requires duty in (0, 1)");
  if (r_load <= 0.0) throw std::domain_error("equilibrium requires r_load > 0");
  CukState s;
  s.v_c1_v = v_in / (1.0 - duty);
  s.v_c2_v = duty * s.v_c1_v;
  s.i_l2_a = s.v_c2_v / r_load;
  s.i_l1_a = duty / (1.0 - duty) * s.i_l2_a;
  return s;
}

namespace {

std::array<double, 4> derivatives(const CukDesign& d, const std::array<double, 4>& x,
                                  double duty, double v_in, double r_load) {
  const auto& [i1, i2, v1, v2] = x;
  return {
      (v_in - (1.0 - duty) * v1) / d.l1_h,
      (duty * v1 - v2) / d.l2_h,
      ((1.0 - duty) * i1 - duty * i2) / d.c1_f,
      (i2 - v2 / r_load) / d.c2_f,
  };
}

}  // namespace

CukState averaged_step(const CukDesign& design, const CukState& state, double duty, double v_in,
                       double r_load, double dt_s) {
  if (duty <= 0.0 || duty >= 1.0)
    throw std::domain_error("averaged_step requires duty in (0, 1)");
  if (dt_s <= 0.0) throw std::domain_error("averaged_step requires dt > 0");

  const std::array<double, 4> x0{state.i_l1_a, state.i_l2_a, state.v_c1_v, state.v_c2_v};
  const auto k1 = derivatives(design, x0, duty, v_in, r_load);
  std::array<double, 4> xt;
  for (int j = 0; j < 4; ++j) xt[j] = x0[j] + 0.5 * dt_s * k1[j];
  const auto k2 = derivatives(design, xt, duty, v_in, r_load);
  for (int j = 0; j < 4; ++j) xt[j] = x0[j] + 0.5 * dt_s * k2[j];
  const auto k3 = derivatives(design, xt, duty, v_in, r_load);
  for (int j = 0; j < 4; ++j) xt[j] = x0[j] + dt_s * k3[j];
  const auto k4 = derivatives(design, xt, duty, v_in, r_load);

  CukState next;
  std::array<double, 4> xn;
  for (int j = 0; j < 4; ++j) {
    xn[j] = x0[j] + dt_s / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    if (!std::isfinite(xn[j]) || std::abs(xn[j]) > 1e6) {
      throw std::runtime_error("averaged model diverged at dt = " + std::to_string(dt_s) +
                               " s; reduce the step");
    }
  }
  next.i_l1_a = xn[0];
  next.i_l2_a = xn[1];
  next.v_c1_v = xn[2];
  next.v_c2_v = xn[3];
  return next;
}

}  // namespace pvmppt::cuk
