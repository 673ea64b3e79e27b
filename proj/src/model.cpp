#include "mmw/model.hpp"

#include <cmath>
#include <string>

#include "mmw/error.hpp"

namespace mmw {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
double degrees_to_radians(double degrees) { return degrees * kPi / 180.0; }

void NetworkParams::validate() const {
  // A zero density is the interference-free limit; quantities averaged over
  // the serving distance check for a positive density themselves.
  if (!(lambda_bs >= 0) || !std::isfinite(lambda_bs))
    throw ParameterError("lambda_bs must be nonnegative, got " + std::to_string(lambda_bs));
  if (!(ball_radius > 0))
    throw ParameterError("ball_radius must be positive, got " + std::to_string(ball_radius));
  if (!(alpha_los > 1) || !std::isfinite(alpha_los))
    throw ParameterError("alpha_los must exceed 1, got " + std::to_string(alpha_los));
  if (!(alpha_nlos >= alpha_los) || !std::isfinite(alpha_nlos))
    throw ParameterError("alpha_nlos must be >= alpha_los, got " + std::to_string(alpha_nlos));
}

AntennaPattern AntennaPattern::from_db(double main_db, double side_db, double beamwidth_deg) {
  AntennaPattern p{db_to_linear(main_db), db_to_linear(side_db), degrees_to_radians(beamwidth_deg)};
  p.validate();
  return p;
}

AntennaPattern AntennaPattern::omni() { return AntennaPattern{1.0, 1.0, kTwoPi}; }

void AntennaPattern::validate() const {
  if (!(side_gain > 0)) throw ParameterError("side_gain must be positive");
  if (!(main_gain >= side_gain)) throw ParameterError("main_gain must be >= side_gain");
  if (!(beamwidth > 0) || beamwidth > kTwoPi)
    throw ParameterError("beamwidth must lie in (0, 2pi], got " + std::to_string(beamwidth));
}

double GainDistribution::mean_gain() const {
  double s = 0;
  for (const auto& e : entries) s += e.gain * e.probability;
  return s;
}

GainDistribution GainDistribution::from_alignment(const AntennaPattern& pattern, double aligned) {
  const double f = aligned;
  const double g = 1.0 - aligned;
  GainDistribution d;
  d.entries[0] = {pattern.main_gain * pattern.main_gain, f * f};
  d.entries[1] = {pattern.main_gain * pattern.side_gain, 2.0 * f * g};
  d.entries[2] = {pattern.side_gain * pattern.side_gain, g * g};
  return d;
}

GainDistribution gain_distribution(const AntennaPattern& pattern) {
  pattern.validate();
  return GainDistribution::from_alignment(pattern, pattern.beamwidth / kTwoPi);
}

LinkBudget LinkBudget::from_snr(double snr, double noise_level, double fading_power,
                                double serving_gain) {
  LinkBudget b{4.0 * snr / fading_power, noise_level, fading_power, serving_gain};
  b.validate();
  return b;
}

void LinkBudget::validate() const {
  if (!(symbol_energy > 0)) throw ParameterError("symbol_energy must be positive");
  if (!(noise_level >= 0)) throw ParameterError("noise_level must be nonnegative");
  if (!(fading_power > 0)) throw ParameterError("fading_power must be positive");
  if (!(serving_gain > 0)) throw ParameterError("serving_gain must be positive");
}

Modulation Modulation::psk(int order) {
  if (order < 2) throw ParameterError("PSK order must be at least 2, got " + std::to_string(order));
  if (order == 2) return Modulation{2, 2.0, 1};
  return Modulation{order, 2.0 * std::sin(kPi / order), 2};
}

void Modulation::validate() const {
  const Modulation expected = psk(order);
  if (std::abs(min_distance - expected.min_distance) > 1e-12 ||
      neighbor_count != expected.neighbor_count)
    throw ParameterError("modulation fields inconsistent with PSK order " + std::to_string(order));
}

double path_loss_exponent(double distance, const NetworkParams& params) {
  if (!(distance >= 0)) throw ParameterError("distance must be nonnegative");
  return distance <= params.ball_radius ? params.alpha_los : params.alpha_nlos;
}

double serving_distance_pdf(double xi, double lambda_bs) {
  if (!(xi >= 0)) throw ParameterError("serving distance must be nonnegative");
  if (!(lambda_bs > 0)) throw ParameterError("lambda_bs must be positive");
  return kTwoPi * lambda_bs * xi * std::exp(-kPi * lambda_bs * xi * xi);
}

double expected_los_interferers(double r0, double class_probability, const NetworkParams& params) {
  if (r0 >= params.ball_radius) return 0.0;
  return params.lambda_bs * class_probability * kPi *
         (params.ball_radius * params.ball_radius - r0 * r0);
}

}  // namespace mmw
