// spectral.hpp - eigen-decomposition of the dressed-basis generator.
//
// In the dressed basis every coherence |a><b| is an eigendirection of the
// generator on its own, with eigenvalue Lambda_ab. Only the D populations
// couple, through the real matrix G. The solution of rho' = L rho is then
//
//   rho(t) = sum_j c_j exp(Lambda_j t) rho_j.

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vacrabi/liouvillian.hpp"

namespace vacrabi {

// Abbreviations of the two-doublet closed forms.
struct ClosedFormSymbols {
  double omega = 0.0;  // gamma1 + gamma2 + gamma3
  double zeta = 0.0;   // gamma4 + gamma5 + gamma6
  double xi = 0.0;     // gamma7 + gamma8 + gamma_e
  double delta = 0.0;  // gamma_a + gamma_b + gamma_c
  double theta = 0.0;  // (zeta - xi)^2 + 4 gamma5 gamma_e
  double kappa = 0.0;  // gamma6 * ((delta + omega)^2 - 4 (...))
  // kappa / gamma6; empty when gamma6 == 0.
  std::optional<double> kappa_ratio;
};

ClosedFormSymbols closed_form_symbols(const RateTable& rates);

struct CoherenceMode {
  std::size_t a = 0;
  std::size_t b = 0;
  std::complex<double> eigenvalue;
};

struct ClosedFormSpectrum {
  // Lambda_1 = 0,
  // Lambda_2,3 = -(omega + delta +- sqrt(kappa / gamma6)) / 4   (first doublet + ground)
  // Lambda_4,5 = -(zeta + xi +- sqrt(theta)) / 4                (second doublet)
  std::vector<std::complex<double>> population;
  std::vector<CoherenceMode> coherence;
  // Set when gamma6 == 0 and Lambda_2,3 came from a numerical 3x3 solve.
  bool numeric_fallback = false;

  std::vector<std::complex<double>> all() const;
};

// Two-doublet model only; throws std::invalid_argument for other ladders.
ClosedFormSpectrum closed_form_eigenvalues(const DressedLadder& ladder, const RateTable& rates,
                                           Frame frame = Frame::lab);

// All ordered pairs a != b with their decay rates, in ladder order.
std::vector<CoherenceMode> offdiagonal_eigenpairs(const Generator& generator);
std::vector<CoherenceMode> offdiagonal_eigenpairs(const DressedLadder& ladder, const RateTable& rates,
                                                  Frame frame = Frame::lab);

struct DiagonalEigenpair {
  std::complex<double> eigenvalue;
  // Weights on |k><k| in ladder order (ground, 1+, 1-, 2+, 2-, ...).
  Eigen::VectorXcd components;
};

struct PopulationSpectrum {
  std::vector<DiagonalEigenpair> pairs;  // stationary modes first, then slowest first
  Eigen::MatrixXcd vectors;              // columns = pairs[j].components
  double condition_number = 1.0;
  bool defective = false;
};

// Eigenpairs of the population block. Stationary vectors are scaled to unit
// population sum, all others to a largest-magnitude component of 1.
// Throws std::invalid_argument when the columns of G do not sum to zero.
PopulationSpectrum diagonal_block_eigensolve(const Eigen::MatrixXd& G);

struct SpectralBasis {
  DressedLadder ladder;
  Frame frame = Frame::rotating;
  PopulationSpectrum population;
  std::vector<CoherenceMode> coherences;
  Eigen::MatrixXd population_block;  // G, used directly when the eigenbasis is defective
};

SpectralBasis build_spectral_basis(const Generator& generator);

struct ExpansionCoefficients {
  Eigen::VectorXcd population;  // one per population mode
  Eigen::MatrixXcd coherence;   // c_ab = rho0(a, b); zero on the diagonal
  Eigen::VectorXd initial_populations;
  double residual = 0.0;        // |V c - p(0)|
  bool least_squares = false;
};

// rho0 must be Hermitian with 0 < trace <= 1.
ExpansionCoefficients expansion_coefficients(const SpectralBasis& basis, const Eigen::MatrixXcd& rho0);

enum class CofactorSigns {
  as_printed,   // plain 4x4 minors, no checkerboard sign
  alternating,  // (-1)^(r+n) times the minor, i.e. Cramer's rule
};

struct CofactorCheck {
  Eigen::VectorXcd coefficients;
  double max_discrepancy = 0.0;
  bool agrees = false;
  std::string message;
};

// Population coefficients from the Levi-Civita determinant and cofactor sums,
// c_n = (1/chi) sum_r p_r A_rn, compared with `reference`. Limited to D <= 7.
CofactorCheck cofactor_cross_check(const Eigen::MatrixXcd& vectors, const Eigen::VectorXcd& populations,
                                   const Eigen::VectorXcd& reference, CofactorSigns signs,
                                   double tolerance = 1e-9);

enum class ModeKind { population, coherence };

struct SpectralMode {
  ModeKind kind = ModeKind::population;
  std::complex<double> eigenvalue;
  std::complex<double> coefficient;
  std::size_t a = 0;  // coherence modes: |a><b|
  std::size_t b = 0;
  Eigen::VectorXcd components;  // population modes
};

struct SpectralOptions {
  bool cofactor_cross_check = false;
};

struct SpectralSolution {
  SpectralBasis basis;
  ExpansionCoefficients coefficients;
  std::optional<CofactorCheck> cofactor;

  bool defective() const { return basis.population.defective; }
  // Population modes first, then coherences in ladder order.
  std::vector<SpectralMode> modes() const;
  // sum_j c_j rho_j
  Eigen::MatrixXcd reconstruct() const;
};

SpectralSolution solve_spectral(const Generator& generator, const Eigen::MatrixXcd& rho0,
                                const SpectralOptions& options = {});

}  // namespace vacrabi
