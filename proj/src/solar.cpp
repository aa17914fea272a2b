#include "pvmppt/solar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pvmppt::solar {

namespace {

constexpr double kPi = std::numbers::pi;

double deg2rad(double deg) { return deg * kPi / 180.0; }
double rad2deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace

SiteConfig::SiteConfig(double latitude, double longitude, double timezone, int day)
    : latitude_deg(latitude), longitude_deg(longitude), timezone_hours(timezone),
      day_of_year(day) {
  if (latitude < -90.0 || latitude > 90.0)
    throw std::invalid_argument("latitude must be in [-90, 90]");
  if (longitude < -180.0 || longitude > 180.0)
    throw std::invalid_argument("longitude must be in [-180, 180]");
  if (timezone < -12.0 || timezone > 14.0)
    throw std::invalid_argument("timezone must be in [-12, 14]");
  if (day < 1 || day > 366)
    throw std::invalid_argument("day_of_year must be in [1, 366]");
}

SolarConstants::SolarConstants(double surface_irradiance, double radius, double distance,
                               double loss_fraction)
    : sun_surface_irradiance_wm2(surface_irradiance), sun_radius_m(radius),
      earth_sun_distance_m(distance), atmospheric_loss_fraction(loss_fraction) {
  if (surface_irradiance <= 0.0 || radius <= 0.0 || distance <= 0.0)
    throw std::invalid_argument("solar constants must be strictly positive");
  if (loss_fraction < 0.0 || loss_fraction > 1.0)
    throw std::invalid_argument("atmospheric_loss_fraction must be in [0, 1]");
}

SolarConstants SolarConstants::defaults() {
  return SolarConstants(62.3e6, 695e6, 149.5e9, 0.30);
}

double extraterrestrial_irradiance(const SolarConstants& constants) {
  const double ratio = constants.sun_radius_m / constants.earth_sun_distance_m;
  return constants.sun_surface_irradiance_wm2 * ratio * ratio;
}

double declination_deg(int day_of_year) {
  return 23.45 * std::sin(deg2rad(360.0 / 365.0 * (284.0 + day_of_year)));
}

double equation_of_time_min(int day_of_year) {
  const double b = deg2rad(360.0 / 365.0 * (day_of_year - 81.0));
  return 9.87 * std::sin(2.0 * b) - 7.53 * std::cos(b) - 1.5 * std::sin(b);
}

namespace {

// Minutes added to local clock time to reach local solar time.
double time_correction_min(const SiteConfig& site) {
  const double meridian_deg = 15.0 * site.timezone_hours;
  return 4.0 * (site.longitude_deg - meridian_deg) + equation_of_time_min(site.day_of_year);
}

}  // namespace

double solar_noon_hours(const SiteConfig& site) {
  return 12.0 - time_correction_min(site) / 60.0;
}

double solar_elevation_deg(const SiteConfig& site, double local_clock_hours) {
  if (local_clock_hours < 0.0 || local_clock_hours >= 24.0)
    throw std::invalid_argument("local clock time must be in [0, 24)");
  const double lst = local_clock_hours + time_correction_min(site) / 60.0;
  const double hra = deg2rad(15.0 * (lst - 12.0));
  const double decl = deg2rad(declination_deg(site.day_of_year));
  const double lat = deg2rad(site.latitude_deg);
  const double s = std::sin(decl) * std::sin(lat) + std::cos(decl) * std::cos(lat) * std::cos(hra);
  return rad2deg(std::asin(std::clamp(s, -1.0, 1.0)));
}

double air_mass(double zenith_deg, AirMassModel model) {
  switch (model) {
    case AirMassModel::secant:
      if (zenith_deg < 0.0 || zenith_deg >= 90.0)
        throw std::domain_error("secant air mass requires zenith in [0, 90), got " +
                                std::to_string(zenith_deg));
      return 1.0 / std::cos(deg2rad(zenith_deg));
    case AirMassModel::kasten_young:
      if (zenith_deg < 0.0 || zenith_deg >= 96.0)
        throw std::domain_error("kasten-young air mass requires zenith in [0, 96), got " +
                                std::to_string(zenith_deg));
      return 1.0 / (std::cos(deg2rad(zenith_deg)) +
                    0.50572 * std::pow(96.07995 - zenith_deg, -1.6364));
  }
  throw std::logic_error("unknown air mass model");
}

double direct_irradiance(double air_mass, double h0_wm2, DirectIrradianceModel model,
                         double atmospheric_loss_fraction) {
  switch (model) {
    case DirectIrradianceModel::flat_transmission:
      return h0_wm2 * (1.0 - atmospheric_loss_fraction);
    case DirectIrradianceModel::empirical:
      return 1353.0 * std::pow(0.7, std::pow(air_mass, 0.678));
  }
  throw std::logic_error("unknown direct irradiance model");
}

std::vector<SamplePoint> clear_sky_profile(const SiteConfig& site, const SolarConstants& constants,
                                           double start_h, double end_h, double step_h,
                                           AirMassModel air_mass_model,
                                           DirectIrradianceModel direct_model) {
  if (start_h >= end_h) throw std::invalid_argument("profile window start must precede end");
  if (step_h <= 0.0) throw std::invalid_argument("profile step must be positive");
  const double h0 = extraterrestrial_irradiance(constants);
  std::vector<SamplePoint> profile;
  const double rounding_slack = step_h * 1e-9;
  for (double t = start_h; t <= end_h + rounding_slack; t += step_h) {
    const double elevation = solar_elevation_deg(site, t);
    double irradiance = 0.0;
    if (elevation > 0.0) {
      const double am = air_mass(90.0 - elevation, air_mass_model);
      irradiance = direct_irradiance(am, h0, direct_model, constants.atmospheric_loss_fraction) *
                   std::sin(deg2rad(elevation));
      irradiance = std::max(irradiance, 0.0);
    }
    profile.push_back({t, irradiance});
  }
  return profile;
}

SensorCalibration calibrate_sensor(const std::vector<SamplePoint>& sensor_volts,
                                   const std::vector<SamplePoint>& reference_irradiance,
                                   double window_start_h, double window_end_h) {
  if (reference_irradiance.size() < 2)
    throw std::runtime_error("insufficient data: need at least 2 reference samples");

  // Reference grid step, from the median spacing.
  std::vector<double> gaps;
  gaps.reserve(reference_irradiance.size() - 1);
  for (std::size_t i = 1; i < reference_irradiance.size(); ++i) {
    gaps.push_back(reference_irradiance[i].time_h - reference_irradiance[i - 1].time_h);
  }
  std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
  const double ref_step = gaps[gaps.size() / 2];
  const double max_gap = ref_step / 2.0;

  std::vector<std::pair<double, double>> pairs;  // (volts, irradiance)
  for (const auto& s : sensor_volts) {
    if (s.time_h < window_start_h || s.time_h > window_end_h) continue;
    auto it = std::lower_bound(reference_irradiance.begin(), reference_irradiance.end(), s.time_h,
                               [](const SamplePoint& p, double t) { return p.time_h < t; });
    const SamplePoint* best = nullptr;
    if (it != reference_irradiance.end()) best = &*it;
    if (it != reference_irradiance.begin()) {
      const SamplePoint* prev = &*(it - 1);
      if (!best || std::abs(prev->time_h - s.time_h) < std::abs(best->time_h - s.time_h))
        best = prev;
    }
    if (best && std::abs(best->time_h - s.time_h) <= max_gap) {
      pairs.emplace_back(s.value, best->value);
    }
  }

  if (pairs.size() < 2)
    throw std::runtime_error("insufficient data: fewer than 2 aligned sample pairs in window");

  const double n = static_cast<double>(pairs.size());
  double sum_x = 0.0, sum_y = 0.0, sum_xx = 0.0, sum_xy = 0.0;
  for (const auto& [x, y] : pairs) {
    sum_x += x;
    sum_y += y;
    sum_xx += x * x;
    sum_xy += x * y;
  }
  const double denom = n * sum_xx - sum_x * sum_x;
  const double scale = sum_xx - sum_x * sum_x / n;  // n * variance
  if (scale <= 1e-12 * (sum_xx + 1e-300) || denom == 0.0)
    throw std::runtime_error("degenerate fit: sensor voltage has zero variance in window");

  const double gain = (n * sum_xy - sum_x * sum_y) / denom;
  const double offset = (sum_y - gain * sum_x) / n;

  double ss = 0.0;
  for (const auto& [x, y] : pairs) {
    const double r = y - (gain * x + offset);
    ss += r * r;
  }
  return SensorCalibration{gain, offset, std::sqrt(ss / n)};
}

}  // namespace pvmppt::solar
