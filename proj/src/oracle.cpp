#include "vacrabi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "vacrabi/dynamics.hpp"
#include "vacrabi/spectral.hpp"

namespace vacrabi::oracle {

namespace {

struct DenseJump {
  double rate;
  Eigen::MatrixXcd op;
};

// The master-equation right-hand side with dense operators.
class DenseLindblad {
 public:
  explicit DenseLindblad(const Generator& gen) {
    const auto d = static_cast<Eigen::Index>(gen.dimension());
    hamiltonian_ = Eigen::VectorXcd::Zero(d);
    for (Eigen::Index k = 0; k < d; ++k) {
      hamiltonian_(k) = gen.ladder.frequency(static_cast<std::size_t>(k), gen.frame);
    }
    anticommutator_ = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& ch : gen.channels) {
      if (ch.rate == 0.0) continue;
      Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(d, d);
      L(static_cast<Eigen::Index>(ch.to), static_cast<Eigen::Index>(ch.from)) = 1.0;
      anticommutator_ += 0.25 * ch.rate * (L.adjoint() * L);
      jumps_.push_back({ch.rate, std::move(L)});
    }
  }

  Eigen::MatrixXcd operator()(const Eigen::MatrixXcd& rho) const {
    const std::complex<double> i(0.0, 1.0);
    Eigen::MatrixXcd H = hamiltonian_.asDiagonal();
    Eigen::MatrixXcd out = -i * (H * rho - rho * H);
    out -= anticommutator_ * rho + rho * anticommutator_;
    for (const auto& j : jumps_) out += (0.5 * j.rate) * (j.op * rho * j.op.adjoint());
    return out;
  }

 private:
  Eigen::VectorXcd hamiltonian_;
  Eigen::MatrixXcd anticommutator_;
  std::vector<DenseJump> jumps_;
};

}  // namespace

double stability_step_bound(const Generator& gen) {
  const std::size_t d = gen.dimension();
  double max_dw = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      max_dw = std::max(max_dw, std::abs(gen.ladder.frequency(a, gen.frame) - gen.ladder.frequency(b, gen.frame)));
    }
  }
  const double max_rate = gen.out_rates.size() ? gen.out_rates.maxCoeff() : 0.0;
  double bound = std::numeric_limits<double>::infinity();
  if (max_dw > 0.0) bound = std::min(bound, 2.0 * constants::pi / max_dw);
  if (max_rate > 0.0) bound = std::min(bound, 1.0 / max_rate);
  return bound / 20.0;
}

Eigen::MatrixXcd lindblad_rhs(const Generator& generator, const Eigen::MatrixXcd& rho) {
  return DenseLindblad(generator)(rho);
}

std::vector<Eigen::MatrixXcd> rk4_integrate(const Generator& generator, const Eigen::MatrixXcd& rho0,
                                            std::span<const double> grid, const IntegratorConfig& config) {
  const double bound = stability_step_bound(generator);
  double dt = config.dt > 0.0 ? config.dt : bound;
  if (dt > bound * (1.0 + 1e-12)) {
    throw OracleError("RK4 step " + std::to_string(dt) + " s exceeds the stability bound " +
                      std::to_string(bound) + " s");
  }
  if (!grid.empty() && !(grid.front() >= 0.0)) throw OracleError("RK4 grid must start at t >= 0");

  const DenseLindblad rhs(generator);
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(grid.size());
  Eigen::MatrixXcd rho = rho0;
  double t = 0.0;
  for (double target : grid) {
    if (target < t) throw OracleError("RK4 grid must be nondecreasing");
    const double span = target - t;
    if (span > 0.0) {
      const auto steps = static_cast<long>(std::ceil(span / dt - 1e-9));
      const double h = span / static_cast<double>(std::max(steps, 1L));
      for (long s = 0; s < std::max(steps, 1L); ++s) {
        const Eigen::MatrixXcd k1 = rhs(rho);
        const Eigen::MatrixXcd k2 = rhs(rho + (0.5 * h) * k1);
        const Eigen::MatrixXcd k3 = rhs(rho + (0.5 * h) * k2);
        const Eigen::MatrixXcd k4 = rhs(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      t = target;
    }
    out.push_back(rho);
  }
  return out;
}

Eigen::MatrixXcd expm_propagate(const Eigen::MatrixXcd& superoperator, const Eigen::MatrixXcd& rho0, double t) {
  if (!(t >= 0.0)) throw OracleError("propagation time must be nonnegative");
  const auto dim = static_cast<std::size_t>(rho0.rows());
  if (superoperator.rows() != static_cast<Eigen::Index>(dim * dim)) {
    throw OracleError("superoperator does not match the density matrix");
  }
  if (t == 0.0) return rho0;
  const Eigen::MatrixXcd propagator = (superoperator * t).exp();
  return unvectorize(propagator * vectorize(rho0), dim);
}

namespace {

template <typename Solver, typename Matrix>
NumericSpectrum finish_spectrum(const Solver& es, const Matrix& matrix) {
  if (es.info() != Eigen::Success) throw OracleError("eigensolver did not converge");
  NumericSpectrum out;
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  const Eigen::MatrixXcd A = matrix.template cast<std::complex<double>>();
  const double norm = std::max(A.norm(), std::numeric_limits<double>::min());
  for (Eigen::Index j = 0; j < out.values.size(); ++j) {
    const Eigen::VectorXcd v = out.vectors.col(j);
    const double r = (A * v - out.values(j) * v).norm() / (norm * std::max(v.norm(), 1e-300));
    out.max_residual = std::max(out.max_residual, r);
  }
  if (out.max_residual > 1e-10) {
    throw OracleError("eigenpair residual " + std::to_string(out.max_residual) + " exceeds 1e-10 |A|");
  }
  return out;
}

}  // namespace

NumericSpectrum numeric_spectrum(const Eigen::MatrixXcd& matrix) {
  if (matrix.rows() != matrix.cols()) throw OracleError("matrix must be square");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(matrix, true);
  return finish_spectrum(es, matrix);
}

NumericSpectrum numeric_spectrum(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols()) throw OracleError("matrix must be square");
  Eigen::EigenSolver<Eigen::MatrixXd> es(matrix, true);
  return finish_spectrum(es, matrix);
}

double multiset_relative_distance(std::span<const std::complex<double>> x,
                                  std::span<const std::complex<double>> y, double floor) {
  if (x.size() != y.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(y.size(), false);
  double worst = 0.0;
  for (const auto& xi : x) {
    std::size_t best = y.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < y.size(); ++k) {
      if (used[k]) continue;
      const double dist = std::abs(xi - y[k]);
      if (dist < best_dist) {
        best_dist = dist;
        best = k;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_dist / std::max(std::abs(xi), floor));
  }
  return worst;
}

double ComparisonReport::max_deviation() const {
  return std::max({spectral_vs_rk4, spectral_vs_expm, rk4_vs_expm});
}

ComparisonReport compare_propagators(const Generator& generator, const Eigen::MatrixXcd& rho0,
                                     std::span<const double> grid, const IntegratorConfig& config) {
  const SpectralSolution sol = solve_spectral(generator, rho0);
  const auto rk4 = rk4_integrate(generator, rho0, grid, config);
  const double trace0 = rho0.trace().real();

  ComparisonReport rep;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  auto physical = [&](const Eigen::MatrixXcd& rho) {
    rep.max_trace_drift = std::max(rep.max_trace_drift, std::abs(rho.trace() - trace0));
    rep.max_hermiticity_error = std::max(rep.max_hermiticity_error, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, es.eigenvalues().minCoeff());
  };

  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Eigen::MatrixXcd spectral = propagate_spectral(sol, grid[k]);
    const Eigen::MatrixXcd expm = expm_propagate(generator.superoperator, rho0, grid[k]);
    rep.spectral_vs_rk4 = std::max(rep.spectral_vs_rk4, (spectral - rk4[k]).cwiseAbs().maxCoeff());
    rep.spectral_vs_expm = std::max(rep.spectral_vs_expm, (spectral - expm).cwiseAbs().maxCoeff());
    rep.rk4_vs_expm = std::max(rep.rk4_vs_expm, (rk4[k] - expm).cwiseAbs().maxCoeff());
    physical(spectral);
    physical(expm);
    physical(rk4[k]);
  }
  return rep;
}

}  // namespace vacrabi::oracle
