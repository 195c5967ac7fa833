// dynamics.hpp - time evolution, ground-state probability and Rabi curves.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vacrabi/core_model.hpp"
#include "vacrabi/spectral.hpp"

namespace vacrabi {

enum class TimeMode {
  raw,        // constant coupling
  effective,  // coherence frequencies scaled by the mode-geometry ratio
};

// rho(t) = sum_j c_j exp(Lambda_j t) rho_j. `frequency_scale` multiplies the
// imaginary part of every coherence eigenvalue; decays keep true time.
// Populations use exp(G t) directly when the eigenbasis is defective. Throws for t < 0.
Eigen::MatrixXcd propagate_spectral(const SpectralSolution& solution, double t, double frequency_scale = 1.0);

// sum_n <g,n|rho|g,n>, with |g,0> = |Omega_0> and
// |g,n> = (|Omega_n+> + |Omega_n->) / sqrt(2).
double ground_state_probability(const Eigen::MatrixXcd& rho, const DressedLadder& ladder);

// Projector onto the atomic ground state restricted to the ladder.
Eigen::MatrixXcd ground_projector(const DressedLadder& ladder);

// |e,n> <e,n| and |g,n> <g,n| as dressed-basis matrices.
Eigen::MatrixXcd bare_state(const DressedLadder& ladder, bool excited, int photons);

// sum_n w_n |e,n><e,n| for n = 0 .. weights.size()-1 (needs n < N).
Eigen::MatrixXcd excited_mixture_state(const DressedLadder& ladder, std::span<const double> weights);

// 0.95 |e,0><e,0| + 0.05 |e,1><e,1|
Eigen::MatrixXcd two_doublet_initial_state(const DressedLadder& ladder);

// Thermal photon weights p_0 .. p_{N-1} on |e,n>; trace = 1 - deficit unless renormalised.
Eigen::MatrixXcd thermal_initial_state(const DressedLadder& ladder, double nbar, bool renormalize);

// `points` equally spaced samples of [0, tmax].
std::vector<double> time_grid(double tmax, std::size_t points);

struct RabiCurve {
  std::vector<double> t;      // true time, s
  std::vector<double> t_eff;  // geometry_ratio * t
  std::vector<double> p_g;
  PhysicalParams params;
  RateTable rates;
  int doublets = 2;
  double geometry_ratio = 1.0;
  TimeMode mode = TimeMode::raw;
};

// p_g on `grid` (true time). In effective mode every coherence frequency is
// multiplied by params.geometry_ratio.
RabiCurve rabi_curve(const PhysicalParams& params, const RateTable& rates, int doublets,
                     const Eigen::MatrixXcd& rho0, std::span<const double> grid, TimeMode mode);

// Same from a prepared solution (frame must be rotating for effective mode).
std::vector<double> ground_state_curve(const SpectralSolution& solution, std::span<const double> grid,
                                       double frequency_scale = 1.0);

// sum_n w_n sin^2(sqrt(n+1) g t): the lossless cavity started in sum_n w_n |e,n><e,n|.
double closed_cavity_reference(std::span<const double> weights, double g, double t);

// Parameters of one model curve, shared by the CLI, the fitter and the
// synthetic-data generator.
struct RabiModel {
  PhysicalParams params;
  RateTable rates;
  int doublets = 2;
  std::vector<double> initial_weights{0.95, 0.05};  // on |e,0>, |e,1>, ...
  TimeMode mode = TimeMode::effective;

  RabiCurve evaluate(std::span<const double> grid) const;
};

}  // namespace vacrabi
