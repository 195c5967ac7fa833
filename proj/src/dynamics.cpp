#include "vacrabi/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace vacrabi {

namespace {

std::complex<double> scaled(std::complex<double> lambda, double frequency_scale) {
  return {lambda.real(), frequency_scale * lambda.imag()};
}

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("time grid is empty");
  if (!(grid.front() >= 0.0)) throw std::invalid_argument("time grid must start at t >= 0");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw std::invalid_argument("time grid must be strictly increasing");
  }
}

// exp(G t) p for a population block without a usable eigenbasis.
Eigen::VectorXd population_step(const Eigen::MatrixXd& G, const Eigen::VectorXd& p, double t) {
  if (t == 0.0) return p;
  const Eigen::MatrixXd step = (G * t).exp();
  return step * p;
}

}  // namespace

Eigen::MatrixXcd propagate_spectral(const SpectralSolution& solution, double t, double frequency_scale) {
  if (!(t >= 0.0)) throw std::invalid_argument("propagation time must be nonnegative");

  const auto& basis = solution.basis;
  const auto& coef = solution.coefficients;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(coef.coherence.rows(), coef.coherence.cols());
  for (const auto& mode : basis.coherences) {
    const auto a = static_cast<Eigen::Index>(mode.a);
    const auto b = static_cast<Eigen::Index>(mode.b);
    if (coef.coherence(a, b) == 0.0) continue;
    rho(a, b) = coef.coherence(a, b) * std::exp(scaled(mode.eigenvalue, frequency_scale) * t);
  }
  if (solution.defective()) {
    rho.diagonal() = population_step(basis.population_block, coef.initial_populations, t).cast<std::complex<double>>();
    return rho;
  }
  Eigen::VectorXcd amplitudes = coef.population;
  for (std::size_t j = 0; j < basis.population.pairs.size(); ++j) {
    amplitudes(static_cast<Eigen::Index>(j)) *= std::exp(basis.population.pairs[j].eigenvalue * t);
  }
  rho.diagonal() = basis.population.vectors * amplitudes;
  return rho;
}

Eigen::MatrixXcd ground_projector(const DressedLadder& ladder) {
  const auto d = static_cast<Eigen::Index>(ladder.size());
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(d, d);
  P(0, 0) = 1.0;
  for (int n = 1; n <= ladder.max_doublet(); ++n) {
    const auto p = static_cast<Eigen::Index>(ladder.index(n, Branch::plus));
    const auto m = static_cast<Eigen::Index>(ladder.index(n, Branch::minus));
    P(p, p) = P(m, m) = P(p, m) = P(m, p) = 0.5;
  }
  return P;
}

double ground_state_probability(const Eigen::MatrixXcd& rho, const DressedLadder& ladder) {
  const auto d = static_cast<Eigen::Index>(ladder.size());
  if (rho.rows() != d || rho.cols() != d) throw std::invalid_argument("density matrix does not match the ladder");
  double p = rho(0, 0).real();
  for (int n = 1; n <= ladder.max_doublet(); ++n) {
    const auto a = static_cast<Eigen::Index>(ladder.index(n, Branch::plus));
    const auto b = static_cast<Eigen::Index>(ladder.index(n, Branch::minus));
    p += 0.5 * (rho(a, a).real() + rho(b, b).real()) + rho(a, b).real();
  }
  return p;
}

Eigen::MatrixXcd bare_state(const DressedLadder& ladder, bool excited, int photons) {
  const auto d = static_cast<Eigen::Index>(ladder.size());
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d);
  if (photons < 0) throw std::invalid_argument("photon number must be nonnegative");
  if (!excited && photons == 0) {
    psi(0) = 1.0;
  } else {
    // |e,n> lives in doublet n+1, |g,n> in doublet n.
    const int n = excited ? photons + 1 : photons;
    if (n > ladder.max_doublet()) throw std::out_of_range("bare state lies outside the truncated ladder");
    const double s = 1.0 / std::sqrt(2.0);
    psi(static_cast<Eigen::Index>(ladder.index(n, Branch::plus))) = s;
    psi(static_cast<Eigen::Index>(ladder.index(n, Branch::minus))) = excited ? -s : s;
  }
  return psi * psi.adjoint();
}

Eigen::MatrixXcd excited_mixture_state(const DressedLadder& ladder, std::span<const double> weights) {
  if (weights.size() > static_cast<std::size_t>(ladder.max_doublet())) {
    throw std::invalid_argument("more excited-state weights than doublets");
  }
  const auto d = static_cast<Eigen::Index>(ladder.size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t n = 0; n < weights.size(); ++n) {
    if (!(weights[n] >= 0.0)) throw std::invalid_argument("mixture weights must be nonnegative");
    if (weights[n] != 0.0) rho += weights[n] * bare_state(ladder, true, static_cast<int>(n));
  }
  return rho;
}

Eigen::MatrixXcd two_doublet_initial_state(const DressedLadder& ladder) {
  const double w[] = {0.95, 0.05};
  return excited_mixture_state(ladder, w);
}

Eigen::MatrixXcd thermal_initial_state(const DressedLadder& ladder, double nbar, bool renormalize) {
  const ThermalOccupation occ = thermal_weights(nbar, ladder.max_doublet() - 1, renormalize);
  return excited_mixture_state(ladder, occ.weights);
}

std::vector<double> time_grid(double tmax, std::size_t points) {
  if (points < 2) throw std::invalid_argument("time grid needs at least two points");
  if (!(tmax > 0.0)) throw std::invalid_argument("tmax must be positive");
  std::vector<double> t(points);
  for (std::size_t k = 0; k < points; ++k) t[k] = tmax * static_cast<double>(k) / static_cast<double>(points - 1);
  return t;
}

std::vector<double> ground_state_curve(const SpectralSolution& solution, std::span<const double> grid,
                                       double frequency_scale) {
  const Eigen::MatrixXcd P = ground_projector(solution.basis.ladder);
  const bool defective = solution.defective();

  // p_g(t) = Re sum_j c_j tr(P rho_j) exp(Lambda_j t)
  std::vector<std::complex<double>> amplitude;
  std::vector<std::complex<double>> rate;
  const auto& pop = solution.basis.population;
  for (std::size_t j = 0; !defective && j < pop.pairs.size(); ++j) {
    const std::complex<double> w = (P.diagonal().array() * pop.pairs[j].components.array()).sum();
    const std::complex<double> c = solution.coefficients.population(static_cast<Eigen::Index>(j)) * w;
    if (c != 0.0) {
      amplitude.push_back(c);
      rate.push_back(pop.pairs[j].eigenvalue);
    }
  }
  for (const auto& mode : solution.basis.coherences) {
    const auto a = static_cast<Eigen::Index>(mode.a);
    const auto b = static_cast<Eigen::Index>(mode.b);
    const std::complex<double> c = solution.coefficients.coherence(a, b) * P(b, a);
    if (c != 0.0) {
      amplitude.push_back(c);
      rate.push_back(scaled(mode.eigenvalue, frequency_scale));
    }
  }

  std::vector<double> p(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::complex<double> sum = 0.0;
    for (std::size_t j = 0; j < amplitude.size(); ++j) sum += amplitude[j] * std::exp(rate[j] * grid[k]);
    p[k] = sum.real();
  }
  if (defective) {
    const Eigen::VectorXd weights = P.diagonal().real();
    const auto& p0 = solution.coefficients.initial_populations;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      p[k] += weights.dot(population_step(solution.basis.population_block, p0, grid[k]));
    }
  }
  return p;
}

RabiCurve rabi_curve(const PhysicalParams& params, const RateTable& rates, int doublets,
                     const Eigen::MatrixXcd& rho0, std::span<const double> grid, TimeMode mode) {
  params.validate();
  check_grid(grid);
  const DressedLadder ladder(params, doublets);
  const Generator gen = build_generator(ladder, rates, Frame::rotating);
  const SpectralSolution sol = solve_spectral(gen, rho0);

  RabiCurve curve;
  curve.t.assign(grid.begin(), grid.end());
  curve.t_eff.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) curve.t_eff[k] = params.geometry_ratio * grid[k];
  curve.params = params;
  curve.rates = rates;
  curve.doublets = doublets;
  curve.geometry_ratio = params.geometry_ratio;
  curve.mode = mode;

  const double scale = mode == TimeMode::effective ? params.geometry_ratio : 1.0;
  curve.p_g = ground_state_curve(sol, grid, scale);
  return curve;
}

double closed_cavity_reference(std::span<const double> weights, double g, double t) {
  double p = 0.0;
  for (std::size_t n = 0; n < weights.size(); ++n) {
    const double s = std::sin(std::sqrt(static_cast<double>(n + 1)) * g * t);
    p += weights[n] * s * s;
  }
  return p;
}

RabiCurve RabiModel::evaluate(std::span<const double> grid) const {
  const DressedLadder ladder(params, doublets);
  return rabi_curve(params, rates, doublets, excited_mixture_state(ladder, initial_weights), grid, mode);
}

}  // namespace vacrabi
