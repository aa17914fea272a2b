#include "pvmppt/panel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pvmppt/io.hpp"

namespace pvmppt::panel {

namespace {

constexpr double kBoltzmann = 1.380649e-23;   // J/K
constexpr double kElectronCharge = 1.602176634e-19;  // C
constexpr double kVoltageFloorFraction = 0.05;

}  // namespace

PanelSpec::PanelSpec(double p_max, double eff, double v_mpp, double i_mpp, double v_oc,
                     double i_sc, double beta_voc, double alpha_isc, int cells, double g_stc,
                     double t_stc)
    : p_max_w(p_max), efficiency(eff), v_mpp_v(v_mpp), i_mpp_a(i_mpp), v_oc_v(v_oc),
      i_sc_a(i_sc), beta_voc_per_c(beta_voc), alpha_isc_per_c(alpha_isc), n_cells(cells),
      g_stc_wm2(g_stc), t_stc_c(t_stc) {
  if (!(0.0 < v_mpp && v_mpp < v_oc))
    throw std::invalid_argument("panel spec requires 0 < v_mpp < v_oc");
  if (!(0.0 < i_mpp && i_mpp < i_sc))
    throw std::invalid_argument("panel spec requires 0 < i_mpp < i_sc");
  if (std::abs(v_mpp * i_mpp - p_max) / p_max >= 0.02)
    throw std::invalid_argument("panel spec requires v_mpp * i_mpp within 2% of p_max");
  if (!(beta_voc < 0.0))
    throw std::invalid_argument("panel spec requires beta_voc < 0");
  if (!(alpha_isc > 0.0))
    throw std::invalid_argument("panel spec requires alpha_isc > 0");
  if (cells <= 0) throw std::invalid_argument("panel spec requires n_cells > 0");
  if (g_stc <= 0.0 || t_stc <= -273.15)
    throw std::invalid_argument("panel spec reference conditions out of range");
}

PanelSpec PanelSpec::yl150p17b() {
  return PanelSpec(150.0, 0.15, 18.5, 8.12, 22.9, 8.61, -0.0037, 0.0006, 36);
}

PanelSpec PanelSpec::from_file(const std::filesystem::path& path) {
  const io::KeyValueDoc doc = io::KeyValueDoc::load(path);
  return PanelSpec(doc.get_double("p_max"), doc.get_double("efficiency"),
                   doc.get_double("v_mpp"), doc.get_double("i_mpp"), doc.get_double("v_oc"),
                   doc.get_double("i_sc"), doc.get_double("beta_voc"),
                   doc.get_double("alpha_isc"), static_cast<int>(doc.get_int("n_cells")),
                   doc.get_double_or("g_stc", 1000.0), doc.get_double_or("t_stc", 25.0));
}

EnvCondition::EnvCondition(double irradiance, double temperature)
    : irradiance_wm2(irradiance), temperature_c(temperature) {
  if (irradiance < 0.0) throw std::invalid_argument("irradiance must be >= 0");
  if (temperature < -40.0 || temperature > 100.0)
    throw std::invalid_argument("temperature must be in [-40, 100] C");
}

double thermal_voltage_v(double temperature_c) {
  return kBoltzmann * (temperature_c + 273.15) / kElectronCharge;
}

namespace {

// Linear irradiance scaling with the datasheet temperature coefficient.
double corrected_current(const PanelSpec& spec, const EnvCondition& env, double i_ref) {
  return i_ref * (env.irradiance_wm2 / spec.g_stc_wm2) *
         (1.0 + spec.alpha_isc_per_c * (env.temperature_c - spec.t_stc_c));
}

}  // namespace

double corrected_i_sc(const PanelSpec& spec, const EnvCondition& env) {
  return corrected_current(spec, env, spec.i_sc_a);
}

namespace {

// Temperature droop plus thermal-voltage log term in irradiance, floored so
// ln(G) -> -inf at dark conditions cannot produce a negative voltage.
double corrected_voltage(const PanelSpec& spec, const EnvCondition& env, double v_ref) {
  double v = v_ref * (1.0 + spec.beta_voc_per_c * (env.temperature_c - spec.t_stc_c));
  if (env.irradiance_wm2 > 0.0) {
    v += spec.n_cells * thermal_voltage_v(env.temperature_c) *
         std::log(env.irradiance_wm2 / spec.g_stc_wm2);
  } else {
    v = 0.0;
  }
  return std::max(v, kVoltageFloorFraction * v_ref);
}

}  // namespace

double corrected_v_oc(const PanelSpec& spec, const EnvCondition& env) {
  return corrected_voltage(spec, env, spec.v_oc_v);
}

OperatingPoint mpp_estimate(const PanelSpec& spec, const EnvCondition& env) {
  const double v = corrected_voltage(spec, env, spec.v_mpp_v);
  const double i = corrected_current(spec, env, spec.i_mpp_a);
  return OperatingPoint{v, i, v * i};
}

double iv_current(const PanelSpec& spec, const EnvCondition& env, double v_v) {
  if (v_v < 0.0) throw std::domain_error("iv_current requires v >= 0");
  const double i_sc = corrected_i_sc(spec, env);
  if (i_sc <= 0.0) return 0.0;
  const double v_oc = corrected_v_oc(spec, env);
  const double fill = 1.0 - spec.i_mpp_a / spec.i_sc_a;
  const double c2 = (spec.v_mpp_v / spec.v_oc_v - 1.0) / std::log(fill);
  const double c1 = fill * std::exp(-spec.v_mpp_v / (c2 * spec.v_oc_v));
  const double i = i_sc * (1.0 - c1 * (std::exp(v_v / (c2 * v_oc)) - 1.0));
  return std::max(i, 0.0);
}

OperatingPoint mpp_solve(const PanelSpec& spec, const EnvCondition& env) {
  const double v_oc = corrected_v_oc(spec, env);
  OperatingPoint best{0.0, iv_current(spec, env, 0.0), 0.0};
  const double dv = 1e-3;
  for (double v = 0.0; v <= v_oc; v += dv) {
    const double i = iv_current(spec, env, v);
    const double p = v * i;
    if (p > best.p_w) best = OperatingPoint{v, i, p};
  }
  return best;
}

}  // namespace pvmppt::panel
