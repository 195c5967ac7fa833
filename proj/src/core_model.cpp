#include "vacrabi/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vacrabi {

void PhysicalParams::validate() const {
  if (!(omega0 > 0.0)) throw std::invalid_argument("omega0 must be positive");
  if (!(g > 0.0)) throw std::invalid_argument("g must be positive");
  if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be nonnegative");
  if (!(geometry_ratio > 0.0)) throw std::invalid_argument("geometry_ratio must be positive");
}

double geometry_ratio_from(double mode_width_m, double cavity_length_m) {
  if (!(mode_width_m > 0.0) || !(cavity_length_m > 0.0)) {
    throw std::invalid_argument("mode width and cavity length must be positive");
  }
  return std::sqrt(constants::pi) * mode_width_m / cavity_length_m;
}

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::ground: return "ground";
    case Branch::plus: return "plus";
    case Branch::minus: return "minus";
  }
  return "?";
}

DressedLadder::DressedLadder(const PhysicalParams& params, int max_doublet)
    : max_doublet_(max_doublet), omega0_(params.omega0), g_(params.g) {
  if (max_doublet < 1) throw std::invalid_argument("dressed ladder needs at least one doublet");
  params.validate();
  levels_.reserve(2 * static_cast<std::size_t>(max_doublet) + 1);
  levels_.push_back({0, Branch::ground, -0.5 * omega0_});
  for (int n = 1; n <= max_doublet; ++n) {
    const double centre = (n - 0.5) * omega0_;
    const double half_split = std::sqrt(static_cast<double>(n)) * g_;
    levels_.push_back({n, Branch::plus, centre + half_split});
    levels_.push_back({n, Branch::minus, centre - half_split});
  }
}

std::size_t DressedLadder::index(int doublet, Branch branch) const {
  if (doublet == 0 && branch == Branch::ground) return 0;
  if (doublet < 1 || doublet > max_doublet_ || branch == Branch::ground) {
    throw std::out_of_range("no dressed level (" + std::to_string(doublet) + ", " +
                            std::string(to_string(branch)) + ")");
  }
  return branch == Branch::plus ? 2 * static_cast<std::size_t>(doublet) - 1
                                : 2 * static_cast<std::size_t>(doublet);
}

double DressedLadder::frequency(std::size_t i, Frame frame) const {
  const DressedLevel& level = levels_.at(i);
  if (frame == Frame::lab) return level.frequency;
  // Remove (n - 1/2) omega0; what is left is +-sqrt(n) g (0 for the ground).
  if (level.branch == Branch::ground) return 0.0;
  const double half_split = std::sqrt(static_cast<double>(level.doublet)) * g_;
  return level.branch == Branch::plus ? half_split : -half_split;
}

DressedLadder build_dressed_ladder(const PhysicalParams& params, int max_doublet) {
  return DressedLadder(params, max_doublet);
}

ThermalOccupation thermal_weights(double nbar, int max_photons, bool renormalize) {
  if (!(nbar >= 0.0)) throw std::invalid_argument("nbar must be nonnegative");
  if (max_photons < 0) throw std::invalid_argument("photon cutoff must be nonnegative");

  ThermalOccupation occ;
  occ.nbar = nbar;
  occ.weights.resize(static_cast<std::size_t>(max_photons) + 1);
  const double ratio = nbar / (1.0 + nbar);
  double p = 1.0 / (1.0 + nbar);
  double sum = 0.0;
  for (auto& w : occ.weights) {
    w = p;
    sum += p;
    p *= ratio;
  }
  // The tail of a geometric series: sum_{n>N} p_n = ratio^(N+1).
  occ.deficit = std::pow(ratio, max_photons + 1);
  if (renormalize) {
    for (auto& w : occ.weights) w /= sum;
    occ.renormalized = true;
  }
  return occ;
}

double thermal_photon_number(double omega, double temperature) {
  if (temperature <= 0.0) return 0.0;
  return 1.0 / std::expm1(constants::hbar * omega / (constants::k_boltzmann * temperature));
}

double boltzmann_factor(double gap, double temperature) {
  if (temperature < 0.0) throw std::invalid_argument("temperature must be nonnegative");
  if (temperature == 0.0) return gap > 0.0 ? 0.0 : 1.0;
  return std::exp(-constants::hbar * gap / (constants::k_boltzmann * temperature));
}

DoubletRates RateTable::doublet(int n) const {
  if (n < 2) throw std::out_of_range("doublet rates are defined for n >= 2");
  if (n == 2 || higher.empty()) {
    return {gamma4, gamma5, gamma6, gamma7, gamma8, gamma_e};
  }
  const auto k = static_cast<std::size_t>(n - 3);
  return k < higher.size() ? higher[k] : higher.back();
}

double RateTable::max_rate() const {
  double m = std::max({gamma1, gamma2, gamma3, gamma_a, gamma_b, gamma_c, gamma4, gamma5, gamma6,
                       gamma7, gamma8, gamma_e});
  for (const auto& d : higher) {
    m = std::max({m, d.plus_to_lower_plus, d.plus_to_minus, d.plus_to_lower_minus,
                  d.minus_to_lower_plus, d.minus_to_lower_minus, d.minus_to_plus});
  }
  return m;
}

void RateTable::validate() const {
  const double all[] = {gamma1, gamma2, gamma3, gamma_a, gamma_b, gamma_c,
                        gamma4, gamma5, gamma6, gamma7, gamma8, gamma_e};
  for (double r : all) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("rates must be finite and >= 0");
  }
  for (const auto& d : higher) {
    for (double r : {d.plus_to_lower_plus, d.plus_to_minus, d.plus_to_lower_minus,
                     d.minus_to_lower_plus, d.minus_to_lower_minus, d.minus_to_plus}) {
      if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("rates must be finite and >= 0");
    }
  }
}

RateTable detailed_balance_rates(const PhysicalParams& params, const RateTable& base) {
  params.validate();
  base.validate();
  const double T = params.temperature;
  const double g = params.g;

  RateTable r = base;
  r.gamma_a = boltzmann_factor(params.omega0 + g, T) * base.gamma1;
  r.gamma_b = boltzmann_factor(params.omega0 - g, T) * base.gamma2;
  r.gamma_c = boltzmann_factor(2.0 * g, T) * base.gamma3;
  r.gamma_e = boltzmann_factor(2.0 * std::sqrt(2.0) * g, T) * base.gamma5;
  for (std::size_t k = 0; k < r.higher.size(); ++k) {
    const double n = static_cast<double>(k + 3);
    r.higher[k].minus_to_plus = boltzmann_factor(2.0 * std::sqrt(n) * g, T) * base.higher[k].plus_to_minus;
  }
  return r;
}

RateTable reference_rates(const PhysicalParams& params, std::optional<double> epsilon) {
  params.validate();
  const double cavity = kReferenceCavityRate;
  const double longwave = kReferenceLongFraction * params.g;

  RateTable r;
  r.gamma1 = r.gamma2 = r.gamma4 = r.gamma6 = r.gamma7 = r.gamma8 = cavity;
  r.gamma3 = r.gamma_c = r.gamma5 = r.gamma_e = longwave;
  if (epsilon) {
    if (!(*epsilon >= 0.0)) throw std::invalid_argument("epsilon must be nonnegative");
    r.gamma_a = r.gamma_b = *epsilon * cavity;
  } else {
    r.gamma_a = boltzmann_factor(params.omega0 + params.g, params.temperature) * cavity;
    r.gamma_b = boltzmann_factor(params.omega0 - params.g, params.temperature) * cavity;
  }
  return r;
}

RateTable tied_rates(double gamma_cavity, double gamma_long, double epsilon) {
  RateTable r;
  r.gamma1 = r.gamma2 = r.gamma4 = r.gamma6 = r.gamma7 = r.gamma8 = gamma_cavity;
  r.gamma3 = r.gamma_c = r.gamma5 = r.gamma_e = gamma_long;
  r.gamma_a = r.gamma_b = epsilon * gamma_cavity;
  r.validate();
  return r;
}

}  // namespace vacrabi
