#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "vacrabi/dynamics.hpp"
#include "vacrabi/oracle.hpp"

using namespace vacrabi;

namespace {

RateTable closed_cavity() { return RateTable{}; }

}  // namespace

TEST_CASE("bare states") {
  const PhysicalParams p;
  const DressedLadder ladder(p, 2);
  CHECK(ground_state_probability(bare_state(ladder, false, 0), ladder) == doctest::Approx(1.0));
  CHECK(ground_state_probability(bare_state(ladder, false, 1), ladder) == doctest::Approx(1.0));
  CHECK(ground_state_probability(bare_state(ladder, true, 0), ladder) == doctest::Approx(0.0));
  CHECK(ground_state_probability(bare_state(ladder, true, 1), ladder) == doctest::Approx(0.0));
  CHECK_THROWS_AS(bare_state(ladder, true, 2), std::out_of_range);
  CHECK_THROWS_AS(bare_state(ladder, true, -1), std::invalid_argument);

  const Eigen::MatrixXcd e0 = bare_state(ladder, true, 0);
  CHECK(e0(1, 2).real() == doctest::Approx(-0.5));
  CHECK(e0.trace().real() == doctest::Approx(1.0));
}

TEST_CASE("initial mixtures") {
  const PhysicalParams p;
  const DressedLadder ladder(p, 2);
  const Eigen::MatrixXcd rho = two_doublet_initial_state(ladder);
  CHECK(rho.trace().real() == doctest::Approx(1.0));
  CHECK(ground_state_probability(rho, ladder) == doctest::Approx(0.0).epsilon(1e-15));

  const Eigen::MatrixXcd thermal = thermal_initial_state(DressedLadder(p, 3), 0.05, false);
  CHECK(thermal.trace().real() == doctest::Approx(1.0 - thermal_weights(0.05, 2).deficit));
  const Eigen::MatrixXcd renorm = thermal_initial_state(DressedLadder(p, 3), 0.05, true);
  CHECK(renorm.trace().real() == doctest::Approx(1.0));

  const double too_many[] = {0.5, 0.3, 0.2};
  CHECK_THROWS_AS(excited_mixture_state(ladder, too_many), std::invalid_argument);
  const double negative[] = {-0.5};
  CHECK_THROWS_AS(excited_mixture_state(ladder, negative), std::invalid_argument);
}

TEST_CASE("closed cavity reproduces the lossless Rabi formula") {
  const PhysicalParams p;
  const auto grid = time_grid(200e-6, 401);
  const double w[] = {0.95, 0.05};
  const DressedLadder ladder(p, 2);
  const RabiCurve c = rabi_curve(p, closed_cavity(), 2, two_doublet_initial_state(ladder), grid, TimeMode::raw);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(std::abs(c.p_g[k] - closed_cavity_reference(w, p.g, grid[k])) < 1e-10);
  }
}

TEST_CASE("time grid and curve argument checks") {
  CHECK(time_grid(1.0, 3) == std::vector<double>{0.0, 0.5, 1.0});
  CHECK_THROWS_AS(time_grid(1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(time_grid(-1.0, 5), std::invalid_argument);

  const PhysicalParams p;
  const DressedLadder ladder(p, 2);
  const auto rho0 = two_doublet_initial_state(ladder);
  const std::vector<double> unsorted{0.0, 2e-6, 1e-6};
  CHECK_THROWS_AS(rabi_curve(p, reference_rates(p), 2, rho0, unsorted, TimeMode::raw), std::invalid_argument);
  const std::vector<double> negative{-1e-6, 0.0};
  CHECK_THROWS_AS(rabi_curve(p, reference_rates(p), 2, rho0, negative, TimeMode::raw), std::invalid_argument);
  const std::vector<double> empty;
  CHECK_THROWS_AS(rabi_curve(p, reference_rates(p), 2, rho0, empty, TimeMode::raw), std::invalid_argument);
}

TEST_CASE("effective time scales the coherent oscillation only") {
  PhysicalParams p;
  p.geometry_ratio = 0.6;
  const auto grid = time_grid(100e-6, 201);
  const DressedLadder ladder(p, 2);
  const RabiCurve eff =
      rabi_curve(p, closed_cavity(), 2, two_doublet_initial_state(ladder), grid, TimeMode::effective);
  const double w[] = {0.95, 0.05};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(eff.t_eff[k] == doctest::Approx(0.6 * grid[k]));
    CHECK(std::abs(eff.p_g[k] - closed_cavity_reference(w, p.g, 0.6 * grid[k])) < 1e-10);
  }

  p.geometry_ratio = 1.0;
  const auto rates = reference_rates(p);
  const auto raw = rabi_curve(p, rates, 2, two_doublet_initial_state(ladder), grid, TimeMode::raw);
  const auto same = rabi_curve(p, rates, 2, two_doublet_initial_state(ladder), grid, TimeMode::effective);
  CHECK(raw.p_g == same.p_g);
}

TEST_CASE("spectral propagation matches the matrix exponential, including a defective block") {
  const PhysicalParams p;
  for (int n : {2, 3}) {
    const DressedLadder ladder(p, n);
    const Generator gen = build_generator(ladder, reference_rates(p));
    const auto rho0 = thermal_initial_state(ladder, 0.05, false);
    const SpectralSolution sol = solve_spectral(gen, rho0);
    CHECK(sol.defective() == (n == 3));
    for (double t : {0.0, 13e-6, 250e-6, 5e-3}) {
      const Eigen::MatrixXcd a = propagate_spectral(sol, t);
      const Eigen::MatrixXcd b = oracle::expm_propagate(gen.superoperator, rho0, t);
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK_THROWS_AS(propagate_spectral(sol, -1.0), std::invalid_argument);
  }
}

TEST_CASE("relaxation to the stationary state") {
  const PhysicalParams p;
  const DressedLadder ladder(p, 2);
  const RateTable r = reference_rates(p);
  const Generator gen = build_generator(ladder, r);
  const SpectralSolution sol = solve_spectral(gen, two_doublet_initial_state(ladder));
  const double slowest = std::min({r.gamma1, r.gamma2, r.gamma3, r.gamma_a, r.gamma_b, r.gamma_c, r.gamma4,
                                   r.gamma5, r.gamma6, r.gamma7, r.gamma8, r.gamma_e});
  const Eigen::MatrixXcd late = propagate_spectral(sol, 50.0 / slowest);
  const Eigen::VectorXcd stationary = sol.basis.population.pairs[0].components;
  CHECK((late.diagonal() - stationary).cwiseAbs().sum() < 1e-6);
}

TEST_CASE("model object") {
  RabiModel m;
  m.params = PhysicalParams{};
  m.rates = reference_rates(m.params);
  const auto grid = time_grid(50e-6, 11);
  const RabiCurve c = m.evaluate(grid);
  CHECK(c.p_g.size() == 11);
  CHECK(c.p_g[0] == doctest::Approx(0.0).epsilon(1e-14));
  for (double x : c.p_g) {
    CHECK(x >= -1e-12);
    CHECK(x <= 1.0 + 1e-12);
  }
}
