#pragma once

#include <vector>

namespace pvmppt::solar {

struct SiteConfig {
  double latitude_deg;    // south negative
  double longitude_deg;   // west negative
  double timezone_hours;  // signed offset from UTC
  int day_of_year;        // 1..366

  SiteConfig(double latitude, double longitude, double timezone, int day);
};

struct SolarConstants {
  double sun_surface_irradiance_wm2;
  double sun_radius_m;
  double earth_sun_distance_m;
  double atmospheric_loss_fraction;  // absorbed + scattered share, 0..1

  SolarConstants(double surface_irradiance, double radius, double distance, double loss_fraction);

  double direct_fraction() const { return 1.0 - atmospheric_loss_fraction; }

  static SolarConstants defaults();
};

struct SensorCalibration {
  double gain_wm2_per_volt;
  double offset_wm2;
  double fit_residual_rms_wm2;
};

enum class AirMassModel { secant, kasten_young };
enum class DirectIrradianceModel { flat_transmission, empirical };

/// Irradiance just outside the atmosphere: surface irradiance diluted by the
/// inverse-square spread from the sun's radius to the orbit radius.
double extraterrestrial_irradiance(const SolarConstants& constants);

double declination_deg(int day_of_year);
double equation_of_time_min(int day_of_year);

/// Local clock time (hours) at which the sun crosses the site meridian.
double solar_noon_hours(const SiteConfig& site);

/// Elevation above the horizon in degrees, from declination, hour angle and
/// the equation-of-time corrected local solar time.
double solar_elevation_deg(const SiteConfig& site, double local_clock_hours);

double air_mass(double zenith_deg, AirMassModel model);

double direct_irradiance(double air_mass, double h0_wm2, DirectIrradianceModel model,
                         double atmospheric_loss_fraction);

struct SamplePoint {
  double time_h;
  double value;
};

/// Horizontal-surface clear-sky irradiance over [start_h, end_h] at the given
/// step. Zero whenever the sun is below the horizon.
std::vector<SamplePoint> clear_sky_profile(
    const SiteConfig& site, const SolarConstants& constants, double start_h, double end_h,
    double step_h, AirMassModel air_mass_model = AirMassModel::secant,
    DirectIrradianceModel direct_model = DirectIrradianceModel::flat_transmission);

/// Least-squares fit irradiance = gain * volts + offset over sensor/reference
/// pairs aligned by nearest time (within half the reference step) inside the
/// window.
SensorCalibration calibrate_sensor(const std::vector<SamplePoint>& sensor_volts,
                                   const std::vector<SamplePoint>& reference_irradiance,
                                   double window_start_h, double window_end_h);

}  // namespace pvmppt::solar
