#include <doctest.h>

#include <stdexcept>

#include <random>

#include "support.hpp"
#include "vacrabi/dynamics.hpp"
#include "vacrabi/oracle.hpp"
#include "vacrabi/spectral.hpp"

using namespace vacrabi;

namespace {

// Stationary populations in ladder order (ground, +, -, 2+, 2-).
Eigen::VectorXd stationary_from_minors(const RateTable& r) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(5);
  v(0) = r.gamma1 * r.gamma2 + r.gamma2 * r.gamma3 + r.gamma1 * r.gamma_c;
  v(1) = r.gamma2 * r.gamma_a + r.gamma_c * r.gamma_a + r.gamma_b * r.gamma_c;
  v(2) = r.gamma3 * r.gamma_a + r.gamma1 * r.gamma_b + r.gamma3 * r.gamma_b;
  return v;
}

double spectrum_distance(const Generator& gen, const ClosedFormSpectrum& cf) {
  const auto numeric = oracle::numeric_spectrum(gen.superoperator);
  const std::vector<std::complex<double>> values(numeric.values.data(), numeric.values.data() + numeric.values.size());
  const auto closed = cf.all();
  return oracle::multiset_relative_distance(closed, values, 1.0);
}

}  // namespace

TEST_CASE("closed-form symbols") {
  RateTable r = tied_rates(1.0, 2.0, 0.5);
  const auto s = closed_form_symbols(r);
  CHECK(s.omega == 4.0);
  CHECK(s.zeta == 4.0);
  CHECK(s.xi == 4.0);
  CHECK(s.delta == 3.0);
  CHECK(s.theta == 16.0);
  REQUIRE(s.kappa_ratio.has_value());
  r.gamma6 = 0.0;
  CHECK_FALSE(closed_form_symbols(r).kappa_ratio.has_value());
}

TEST_CASE("closed-form spectrum equals the dense spectrum (reference and random rates)") {
  const PhysicalParams p;
  const DressedLadder ladder(p, 2);
  const Generator gen = build_generator(ladder, reference_rates(p), Frame::rotating);
  const auto cf = closed_form_eigenvalues(ladder, reference_rates(p), Frame::rotating);
  CHECK(cf.population.size() == 5);
  CHECK(cf.coherence.size() == 20);
  CHECK(spectrum_distance(gen, cf) < 1e-10);

  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const RateTable r = testing::random_rates(rng);
    const Generator g2 = build_generator(ladder, r, Frame::rotating);
    CHECK(spectrum_distance(g2, closed_form_eigenvalues(ladder, r, Frame::rotating)) < 1e-10);
  }
}

TEST_CASE("closed form with gamma6 = 0 falls back to a numeric 3x3 block") {
  const PhysicalParams p;
  const DressedLadder ladder(p, 2);
  RateTable r = reference_rates(p);
  r.gamma6 = 0.0;
  const auto cf = closed_form_eigenvalues(ladder, r, Frame::rotating);
  CHECK(cf.numeric_fallback);
  CHECK(spectrum_distance(build_generator(ladder, r, Frame::rotating), cf) < 1e-10);
}

TEST_CASE("closed form rejects other ladders") {
  const PhysicalParams p;
  CHECK_THROWS_AS(closed_form_eigenvalues(DressedLadder(p, 3), reference_rates(p)), std::invalid_argument);
}

TEST_CASE("stationary vector matches the minor expressions (random rates)") {
  std::mt19937_64 rng(99);
  const PhysicalParams p;
  const DressedLadder ladder(p, 2);
  for (int trial = 0; trial < 50; ++trial) {
    const RateTable r = testing::random_rates(rng);
    const Generator gen = build_generator(ladder, r);
    const Eigen::VectorXd v = stationary_from_minors(r);
    const Eigen::VectorXd vhat = v / v.sum();
    CHECK((gen.population_block * vhat).norm() < 1e-12 * gen.population_block.norm());

    const PopulationSpectrum ps = diagonal_block_eigensolve(gen.population_block);
    REQUIRE(ps.pairs.size() == 5);
    CHECK(std::abs(ps.pairs[0].eigenvalue) < 1e-12 * gen.population_block.norm());
    CHECK((ps.pairs[0].components.real() - vhat).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("population eigensolve ordering and normalisation") {
  const PhysicalParams p;
  const Generator gen = build_generator(DressedLadder(p, 2), reference_rates(p));
  const PopulationSpectrum ps = diagonal_block_eigensolve(gen.population_block);
  CHECK_FALSE(ps.defective);
  CHECK(ps.pairs[0].components.sum().real() == doctest::Approx(1.0));
  for (std::size_t j = 2; j < ps.pairs.size(); ++j) {
    CHECK(ps.pairs[j].eigenvalue.real() <= ps.pairs[j - 1].eigenvalue.real());
    CHECK(ps.pairs[j].components.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
  }
  Eigen::MatrixXd bad = gen.population_block;
  bad(0, 0) += 1.0;
  CHECK_THROWS_AS(diagonal_block_eigensolve(bad), std::invalid_argument);
}

TEST_CASE("expansion reproduces the initial state") {
  const PhysicalParams p;
  const DressedLadder ladder(p, 2);
  const Generator gen = build_generator(ladder, reference_rates(p));
  const Eigen::MatrixXcd rho0 = two_doublet_initial_state(ladder);
  const SpectralSolution sol = solve_spectral(gen, rho0);
  CHECK_FALSE(sol.coefficients.least_squares);
  CHECK((sol.reconstruct() - rho0).cwiseAbs().maxCoeff() < 1e-12);
  // Coherence amplitudes of the 0.95 / 0.05 mixture.
  CHECK(sol.coefficients.coherence(1, 2).real() == doctest::Approx(-0.475));
  CHECK(sol.coefficients.coherence(2, 1).real() == doctest::Approx(-0.475));
  CHECK(sol.coefficients.coherence(3, 4).real() == doctest::Approx(-0.025));
  CHECK(sol.coefficients.coherence(4, 3).real() == doctest::Approx(-0.025));

  Eigen::MatrixXcd not_hermitian = rho0;
  not_hermitian(1, 2) = 0.3;
  CHECK_THROWS_AS(solve_spectral(gen, not_hermitian), std::invalid_argument);
  CHECK_THROWS_AS(solve_spectral(gen, 2.0 * rho0), std::invalid_argument);
  CHECK_THROWS_AS(solve_spectral(gen, Eigen::MatrixXcd::Zero(5, 5)), std::invalid_argument);
}

TEST_CASE("cofactor expansion: alternating signs agree, unsigned minors do not") {
  const PhysicalParams p;
  const DressedLadder ladder(p, 2);
  const Generator gen = build_generator(ladder, reference_rates(p));
  const Eigen::MatrixXcd rho0 = two_doublet_initial_state(ladder);
  const SpectralSolution sol = solve_spectral(gen, rho0, {true});
  REQUIRE(sol.cofactor.has_value());
  CHECK(sol.cofactor->agrees);

  const auto printed = cofactor_cross_check(sol.basis.population.vectors, rho0.diagonal(), sol.coefficients.population,
                                            CofactorSigns::as_printed);
  CHECK_FALSE(printed.agrees);
  CHECK(printed.message.find("DISAGREE") != std::string::npos);
}

TEST_CASE("defective population block is detected") {
  const PhysicalParams p;
  const DressedLadder ladder(p, 3);
  const Generator gen = build_generator(ladder, reference_rates(p));
  const SpectralSolution sol = solve_spectral(gen, thermal_initial_state(ladder, 0.05, false));
  CHECK(sol.defective());
  CHECK((sol.reconstruct() - thermal_initial_state(ladder, 0.05, false)).cwiseAbs().maxCoeff() < 1e-15);
}
