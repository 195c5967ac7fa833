// oracle.hpp - brute-force reference propagators and spectra.
//
// None of these routines use the dressed-basis block structure: the RK4
// integrator applies the Lindblad right-hand side with dense jump operators,
// and the exponential acts on the full vectorised generator.

#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "vacrabi/liouvillian.hpp"

namespace vacrabi::oracle {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntegratorConfig {
  double dt = 0.0;  // <= 0 picks the stability bound
};

// (1/20) min(2 pi / max|Omega_a - Omega_b|, 1 / max total out-rate)
double stability_step_bound(const Generator& generator);

// -i [H, rho] + sum_k gamma_k (1/2 L rho L^+ - 1/4 {L^+ L, rho})
Eigen::MatrixXcd lindblad_rhs(const Generator& generator, const Eigen::MatrixXcd& rho);

// Fixed-step RK4 from t = 0. Each output interval is split into equal steps no
// larger than config.dt. Throws OracleError when config.dt exceeds the bound
// or the grid is not nondecreasing from 0.
std::vector<Eigen::MatrixXcd> rk4_integrate(const Generator& generator, const Eigen::MatrixXcd& rho0,
                                            std::span<const double> grid, const IntegratorConfig& config = {});

// exp(L t) vec(rho0) by scaling and squaring.
Eigen::MatrixXcd expm_propagate(const Eigen::MatrixXcd& superoperator, const Eigen::MatrixXcd& rho0, double t);

struct NumericSpectrum {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;
  double max_residual = 0.0;  // max_j |A v_j - lambda_j v_j| / |A|
};

// Dense eigensolve; throws OracleError when the residual bound 1e-10 |A| fails.
NumericSpectrum numeric_spectrum(const Eigen::MatrixXcd& matrix);
NumericSpectrum numeric_spectrum(const Eigen::MatrixXd& matrix);

// Largest |x_i - y_sigma(i)| over a greedy nearest pairing of two multisets,
// each distance divided by max(|x_i|, floor).
double multiset_relative_distance(std::span<const std::complex<double>> x,
                                  std::span<const std::complex<double>> y, double floor);

struct ComparisonReport {
  double spectral_vs_rk4 = 0.0;
  double spectral_vs_expm = 0.0;
  double rk4_vs_expm = 0.0;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 0.0;
  double max_hermiticity_error = 0.0;

  double max_deviation() const;
};

// Runs the spectral path, RK4 and the matrix exponential on the same grid and
// reports the sup-norm deviations over all matrix entries.
ComparisonReport compare_propagators(const Generator& generator, const Eigen::MatrixXcd& rho0,
                                     std::span<const double> grid, const IntegratorConfig& config = {});

}  // namespace vacrabi::oracle
