#include "vacrabi/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace vacrabi {

ClosedFormSymbols closed_form_symbols(const RateTable& r) {
  ClosedFormSymbols s;
  s.omega = r.gamma1 + r.gamma2 + r.gamma3;
  s.zeta = r.gamma4 + r.gamma5 + r.gamma6;
  s.xi = r.gamma7 + r.gamma8 + r.gamma_e;
  s.delta = r.gamma_a + r.gamma_b + r.gamma_c;
  s.theta = (s.zeta - s.xi) * (s.zeta - s.xi) + 4.0 * r.gamma5 * r.gamma_e;
  const double minors = r.gamma2 * (r.gamma3 + r.gamma_a) + (r.gamma_a + r.gamma_b) * (r.gamma3 + r.gamma_c) +
                        r.gamma1 * (r.gamma2 + r.gamma_b + r.gamma_c);
  s.kappa = r.gamma6 * ((s.delta + s.omega) * (s.delta + s.omega) - 4.0 * minors);
  if (r.gamma6 != 0.0) s.kappa_ratio = s.kappa / r.gamma6;
  return s;
}

std::vector<std::complex<double>> ClosedFormSpectrum::all() const {
  std::vector<std::complex<double>> out(population);
  for (const auto& c : coherence) out.push_back(c.eigenvalue);
  return out;
}

ClosedFormSpectrum closed_form_eigenvalues(const DressedLadder& ladder, const RateTable& rates, Frame frame) {
  if (ladder.max_doublet() != 2) {
    throw std::invalid_argument("closed-form eigenvalues exist for the two-doublet model only");
  }
  rates.validate();
  using cd = std::complex<double>;
  const ClosedFormSymbols s = closed_form_symbols(rates);

  ClosedFormSpectrum out;
  out.population.push_back(0.0);
  if (s.kappa_ratio) {
    const cd root = std::sqrt(cd(*s.kappa_ratio));
    out.population.push_back(-0.25 * (s.omega + s.delta + root));
    out.population.push_back(-0.25 * (s.omega + s.delta - root));
  } else {
    // gamma6 == 0: solve the ground + first-doublet block numerically.
    const auto channels = build_jump_channels(ladder, rates);
    const Eigen::MatrixXd G = assemble_population_generator(channels, ladder.size());
    const Eigen::Matrix3d lower = G.topLeftCorner<3, 3>();
    Eigen::EigenSolver<Eigen::Matrix3d> es(lower, false);
    std::vector<cd> ev(es.eigenvalues().data(), es.eigenvalues().data() + 3);
    std::sort(ev.begin(), ev.end(), [](cd x, cd y) { return std::abs(x) < std::abs(y); });
    // ev[0] is the stationary zero; order the rest as (+root, -root).
    if (ev[1].real() < ev[2].real()) std::swap(ev[1], ev[2]);
    out.population.push_back(ev[2]);
    out.population.push_back(ev[1]);
    out.numeric_fallback = true;
  }
  const double root_theta = std::sqrt(s.theta);
  out.population.push_back(-0.25 * (s.zeta + s.xi + root_theta));
  out.population.push_back(-0.25 * (s.zeta + s.xi - root_theta));

  out.coherence = offdiagonal_eigenpairs(ladder, rates, frame);
  return out;
}

std::vector<CoherenceMode> offdiagonal_eigenpairs(const Generator& generator) {
  std::vector<CoherenceMode> modes;
  const std::size_t d = generator.dimension();
  modes.reserve(d * (d - 1));
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      if (a == b) continue;
      modes.push_back({a, b, generator.coherence_rates(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))});
    }
  }
  return modes;
}

std::vector<CoherenceMode> offdiagonal_eigenpairs(const DressedLadder& ladder, const RateTable& rates, Frame frame) {
  const auto channels = build_jump_channels(ladder, rates);
  const TransitionMap map(channels, ladder.size());
  std::vector<CoherenceMode> modes;
  for (std::size_t a = 0; a < ladder.size(); ++a) {
    for (std::size_t b = 0; b < ladder.size(); ++b) {
      if (a != b) modes.push_back({a, b, coherence_decay_rate(ladder, map, a, b, frame)});
    }
  }
  return modes;
}

PopulationSpectrum diagonal_block_eigensolve(const Eigen::MatrixXd& G) {
  if (G.rows() != G.cols()) throw std::invalid_argument("population block must be square");
  const Eigen::Index d = G.rows();
  const double scale = G.cwiseAbs().maxCoeff();
  const double col_tol = 1e-12 * std::max(scale, 1e-300) * static_cast<double>(d);
  for (Eigen::Index c = 0; c < d; ++c) {
    if (std::abs(G.col(c).sum()) > col_tol) {
      throw std::invalid_argument("population block is not trace preserving");
    }
  }

  PopulationSpectrum out;
  Eigen::EigenSolver<Eigen::MatrixXd> es(G, true);
  if (es.info() != Eigen::Success) {
    out.defective = true;
    out.condition_number = std::numeric_limits<double>::infinity();
    return out;
  }

  const double zero_tol = 1e-12 * std::max(scale, 1e-300) * static_cast<double>(d);
  std::vector<DiagonalEigenpair> pairs;
  for (Eigen::Index j = 0; j < d; ++j) {
    DiagonalEigenpair p{es.eigenvalues()(j), es.eigenvectors().col(j)};
    const std::complex<double> sum = p.components.sum();
    const double largest = p.components.cwiseAbs().maxCoeff();
    if (std::abs(p.eigenvalue) <= zero_tol && std::abs(sum) > 1e-8 * largest) {
      p.components /= sum;
    } else {
      Eigen::Index k = 0;
      p.components.cwiseAbs().maxCoeff(&k);
      p.components /= p.components(k);
    }
    pairs.push_back(std::move(p));
  }

  auto stationary = [&](const DiagonalEigenpair& p) { return std::abs(p.eigenvalue) <= zero_tol; };
  std::stable_sort(pairs.begin(), pairs.end(), [&](const DiagonalEigenpair& x, const DiagonalEigenpair& y) {
    if (stationary(x) != stationary(y)) return stationary(x);
    if (x.eigenvalue.real() != y.eigenvalue.real()) return x.eigenvalue.real() > y.eigenvalue.real();
    return x.eigenvalue.imag() > y.eigenvalue.imag();
  });

  out.vectors.resize(d, d);
  for (Eigen::Index j = 0; j < d; ++j) out.vectors.col(j) = pairs[static_cast<std::size_t>(j)].components;
  out.pairs = std::move(pairs);

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.vectors);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  out.condition_number = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  out.defective = !std::isfinite(out.condition_number) || out.condition_number > 1e10;
  return out;
}

SpectralBasis build_spectral_basis(const Generator& generator) {
  return {generator.ladder, generator.frame, diagonal_block_eigensolve(generator.population_block),
          offdiagonal_eigenpairs(generator), generator.population_block};
}

ExpansionCoefficients expansion_coefficients(const SpectralBasis& basis, const Eigen::MatrixXcd& rho0) {
  const auto d = static_cast<Eigen::Index>(basis.ladder.size());
  if (rho0.rows() != d || rho0.cols() != d) throw std::invalid_argument("initial state does not match the ladder");
  const double scale = std::max(rho0.cwiseAbs().maxCoeff(), 1e-300);
  if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("initial state is not Hermitian");
  }
  const double tr = rho0.trace().real();
  if (!(tr > 0.0) || tr > 1.0 + 1e-12) throw std::invalid_argument("initial state trace must lie in (0, 1]");

  ExpansionCoefficients out;
  out.coherence = rho0;
  out.coherence.diagonal().setZero();

  const Eigen::VectorXcd p = rho0.diagonal();
  out.initial_populations = p.real();
  const Eigen::MatrixXcd& V = basis.population.vectors;
  if (V.rows() != d) {
    out.population = Eigen::VectorXcd::Zero(d);
    out.least_squares = true;
    out.residual = std::numeric_limits<double>::infinity();
    return out;
  }
  if (!basis.population.defective) {
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(V);
    if (lu.isInvertible()) out.population = lu.solve(p);
  }
  if (out.population.size() != d) {
    out.population = V.completeOrthogonalDecomposition().solve(p);
    out.least_squares = true;
  }
  out.residual = (V * out.population - p).norm();
  return out;
}

namespace {

// Levi-Civita sum over the rows `rows` and columns `cols`:
//   sum_sigma eps(sigma) prod_k M(rows[k], cols[sigma(k)])
std::complex<double> levi_civita_sum(const Eigen::MatrixXcd& M, const std::vector<Eigen::Index>& rows,
                                     const std::vector<Eigen::Index>& cols) {
  std::vector<std::size_t> perm(cols.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::complex<double> total = 0.0;
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j];
    std::complex<double> term = (inversions % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t k = 0; k < perm.size(); ++k) term *= M(rows[k], cols[perm[k]]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace

CofactorCheck cofactor_cross_check(const Eigen::MatrixXcd& vectors, const Eigen::VectorXcd& populations,
                                   const Eigen::VectorXcd& reference, CofactorSigns signs, double tolerance) {
  const Eigen::Index d = vectors.rows();
  if (vectors.cols() != d || populations.size() != d || reference.size() != d) {
    throw std::invalid_argument("cofactor check: inconsistent sizes");
  }
  if (d > 7) throw std::invalid_argument("cofactor check is limited to D <= 7");

  std::vector<Eigen::Index> all(static_cast<std::size_t>(d));
  std::iota(all.begin(), all.end(), 0);
  const std::complex<double> chi = levi_civita_sum(vectors, all, all);

  CofactorCheck out;
  out.coefficients = Eigen::VectorXcd::Zero(d);
  for (Eigen::Index n = 0; n < d; ++n) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index c : all) if (c != n) cols.push_back(c);
    for (Eigen::Index r = 0; r < d; ++r) {
      if (populations(r) == 0.0) continue;
      std::vector<Eigen::Index> rows;
      for (Eigen::Index k : all) if (k != r) rows.push_back(k);
      std::complex<double> minor = levi_civita_sum(vectors, rows, cols);
      if (signs == CofactorSigns::alternating && (r + n) % 2 == 1) minor = -minor;
      out.coefficients(n) += populations(r) * minor;
    }
    out.coefficients(n) /= chi;
  }

  out.max_discrepancy = (out.coefficients - reference).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, reference.cwiseAbs().maxCoeff());
  out.agrees = std::abs(chi) > 0.0 && out.max_discrepancy <= tolerance * scale;
  std::ostringstream msg;
  msg << "cofactor path (" << (signs == CofactorSigns::alternating ? "alternating" : "as printed")
      << " signs) vs linear solve: max |dc| = " << out.max_discrepancy << (out.agrees ? " (agree)" : " (DISAGREE)");
  out.message = msg.str();
  return out;
}

std::vector<SpectralMode> SpectralSolution::modes() const {
  std::vector<SpectralMode> out;
  const auto& pop = basis.population.pairs;
  for (std::size_t j = 0; j < pop.size(); ++j) {
    SpectralMode m;
    m.kind = ModeKind::population;
    m.eigenvalue = pop[j].eigenvalue;
    m.coefficient = coefficients.population(static_cast<Eigen::Index>(j));
    m.components = pop[j].components;
    out.push_back(std::move(m));
  }
  for (const auto& c : basis.coherences) {
    SpectralMode m;
    m.kind = ModeKind::coherence;
    m.eigenvalue = c.eigenvalue;
    m.coefficient = coefficients.coherence(static_cast<Eigen::Index>(c.a), static_cast<Eigen::Index>(c.b));
    m.a = c.a;
    m.b = c.b;
    out.push_back(std::move(m));
  }
  return out;
}

Eigen::MatrixXcd SpectralSolution::reconstruct() const {
  Eigen::MatrixXcd rho = coefficients.coherence;
  if (defective()) {
    rho.diagonal() = coefficients.initial_populations.cast<std::complex<double>>();
  } else {
    rho.diagonal() = basis.population.vectors * coefficients.population;
  }
  return rho;
}

SpectralSolution solve_spectral(const Generator& generator, const Eigen::MatrixXcd& rho0,
                                const SpectralOptions& options) {
  SpectralSolution sol{build_spectral_basis(generator), {}, std::nullopt};
  sol.coefficients = expansion_coefficients(sol.basis, rho0);
  if (options.cofactor_cross_check && !sol.defective() && generator.dimension() <= 7) {
    sol.cofactor = cofactor_cross_check(sol.basis.population.vectors, rho0.diagonal(),
                                        sol.coefficients.population, CofactorSigns::alternating);
    if (!sol.cofactor->agrees) std::clog << "warning: " << sol.cofactor->message << '\n';
  }
  return sol;
}

}  // namespace vacrabi
