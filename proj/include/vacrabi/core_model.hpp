// core_model.hpp - physical constants, dressed-state ladder, thermal occupation
// and detailed-balance rates for a resonant Jaynes-Cummings atom-cavity system.
//
// All frequencies and rates are angular (rad/s).

#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace vacrabi {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double k_boltzmann = 1.380649e-23;    // J / K
inline constexpr double pi = std::numbers::pi;
}  // namespace constants

struct PhysicalParams {
  double omega0 = 2.0 * constants::pi * 51.099e9;  // atomic transition = cavity mode
  double g = 47.0 * constants::pi * 1e3;           // vacuum coupling
  double temperature = 0.8;                        // K
  double geometry_ratio = 1.0;                     // sqrt(pi) * w / d

  // Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

// sqrt(pi) * w / d for a Gaussian mode of width w in a cavity of length d.
double geometry_ratio_from(double mode_width_m, double cavity_length_m);

// Reference frame for the coherent part of the evolution. `rotating` removes
// the bare ladder energy (n - 1/2) * omega0 from each level; at exact
// resonance this commutes with the Hamiltonian and leaves the dressed-basis
// dissipator unchanged.
enum class Frame { lab, rotating };

enum class Branch { ground, plus, minus };

std::string_view to_string(Branch branch);

struct DressedLevel {
  int doublet = 0;  // 0 is the ground state |g,0>
  Branch branch = Branch::ground;
  double frequency = 0.0;  // lab frame, rad/s
};

// Levels are stored ground first, then (n+, n-) for n = 1..N. The index of
// |n+> is 2n-1 and of |n-> is 2n.
class DressedLadder {
 public:
  DressedLadder(const PhysicalParams& params, int max_doublet);

  int max_doublet() const { return max_doublet_; }
  std::size_t size() const { return levels_.size(); }
  const DressedLevel& operator[](std::size_t i) const { return levels_.at(i); }
  std::span<const DressedLevel> levels() const { return levels_; }

  double omega0() const { return omega0_; }
  double g() const { return g_; }

  static constexpr std::size_t ground_index() { return 0; }
  std::size_t index(int doublet, Branch branch) const;

  double frequency(std::size_t i, Frame frame) const;

 private:
  int max_doublet_;
  double omega0_;
  double g_;
  std::vector<DressedLevel> levels_;
};

DressedLadder build_dressed_ladder(const PhysicalParams& params, int max_doublet);

struct ThermalOccupation {
  double nbar = 0.0;
  std::vector<double> weights;  // p_n for n = 0..N
  double deficit = 0.0;         // 1 - sum of the untruncated weights
  bool renormalized = false;
};

// p_n = nbar^n / (1 + nbar)^(n+1), n = 0..max_photons.
ThermalOccupation thermal_weights(double nbar, int max_photons, bool renormalize = false);

// Mean thermal photon number 1 / (exp(hbar w / kT) - 1).
double thermal_photon_number(double omega, double temperature);

// exp(-hbar * gap / kT); zero at T = 0 for a positive gap.
double boltzmann_factor(double gap, double temperature);

// Rates of a doublet n >= 2: decays into doublet n-1 and the two intra-doublet
// transitions. For n = 2 these are gamma4..gamma8 and gamma_e.
struct DoubletRates {
  double plus_to_lower_plus = 0.0;    // gamma4
  double plus_to_minus = 0.0;         // gamma5
  double plus_to_lower_minus = 0.0;   // gamma6
  double minus_to_lower_plus = 0.0;   // gamma7
  double minus_to_lower_minus = 0.0;  // gamma8
  double minus_to_plus = 0.0;         // gamma_e
};

struct RateTable {
  // first doublet and ground state
  double gamma1 = 0.0;   // |+> -> |0>
  double gamma2 = 0.0;   // |-> -> |0>
  double gamma3 = 0.0;   // |+> -> |->
  double gamma_a = 0.0;  // |0> -> |+>
  double gamma_b = 0.0;  // |0> -> |->
  double gamma_c = 0.0;  // |-> -> |+>
  // second doublet
  double gamma4 = 0.0;   // |2+> -> |+>
  double gamma5 = 0.0;   // |2+> -> |2->
  double gamma6 = 0.0;   // |2+> -> |->
  double gamma7 = 0.0;   // |2-> -> |+>
  double gamma8 = 0.0;   // |2-> -> |->
  double gamma_e = 0.0;  // |2-> -> |2+>
  // doublets 3, 4, ...; missing entries repeat the second-doublet pattern
  std::vector<DoubletRates> higher;

  DoubletRates doublet(int n) const;
  double max_rate() const;
  void validate() const;
};

// Replaces every upward rate of `base` by the Boltzmann-weighted partner of its
// downward rate: gamma_a, gamma_b from gamma1, gamma2 across omega0 +- g;
// gamma_c, gamma_e (and higher intra-doublet ones) across the doublet
// splitting 2 sqrt(n) g. Downward rates are copied unchanged.
RateTable detailed_balance_rates(const PhysicalParams& params, const RateTable& base);

inline constexpr double kReferenceCavityRate = 17.73;
inline constexpr double kReferenceLongFraction = 0.07;

// gamma1 = gamma2 = gamma4 = gamma6 = gamma7 = gamma8 = 17.73,
// gamma3 = gamma_c = gamma5 = gamma_e = 0.07 g, gamma_a = gamma_b = eps * gamma1.
// Without an explicit eps the thermal factors of detailed_balance_rates are used.
RateTable reference_rates(const PhysicalParams& params, std::optional<double> epsilon = std::nullopt);

// Same tie structure with free cavity and long-wave rates.
RateTable tied_rates(double gamma_cavity, double gamma_long, double epsilon);

}  // namespace vacrabi
