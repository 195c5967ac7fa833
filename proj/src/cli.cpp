#include "vacrabi/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vacrabi/config.hpp"
#include "vacrabi/dynamics.hpp"
#include "vacrabi/experiment.hpp"
#include "vacrabi/format.hpp"
#include "vacrabi/liouvillian.hpp"
#include "vacrabi/oracle.hpp"
#include "vacrabi/spectral.hpp"

namespace vacrabi::cli {

namespace {

struct Options {
  std::string config;
  std::string out;
  std::uint64_t seed = 1;

  int doublets = 2;
  double tmax = 600e-6;
  std::size_t points = 601;
  std::string mode = "effective";
  std::string initial = "two-doublet";

  double dt = 5e-9;
  double tolerance = 1e-8;

  std::string data;
  std::vector<std::string> free{"gamma_cavity"};
  int grid_points = 7;
  bool synthetic = false;
  double noise = 0.01;

  int max_photons = 2;
  std::string frame = "rotating";
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ModelConfig model_config(const Options& o) {
  return o.config.empty() ? default_config() : load_config(o.config);
}

TimeMode parse_mode(const std::string& s) {
  if (s == "raw") return TimeMode::raw;
  if (s == "effective") return TimeMode::effective;
  throw ValidationError("--mode must be raw or effective");
}

Frame parse_frame(const std::string& s) {
  if (s == "lab") return Frame::lab;
  if (s == "rotating") return Frame::rotating;
  throw ValidationError("--frame must be lab or rotating");
}

std::vector<double> initial_weights(const Options& o, const ModelConfig& cfg) {
  if (o.initial == "two-doublet") return {0.95, 0.05};
  if (o.initial == "thermal") {
    return thermal_weights(cfg.nbar, o.doublets - 1, cfg.renormalize_thermal).weights;
  }
  throw ValidationError("--initial must be two-doublet or thermal");
}

// Runs `body` against either the --out file or `out`.
void emit(const Options& o, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (o.out.empty()) {
    body(out);
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw ValidationError("cannot write '" + o.out + "'");
  body(file);
  if (!file) throw ValidationError("error writing '" + o.out + "'");
}

RabiModel rabi_model(const Options& o, const ModelConfig& cfg) {
  RabiModel m;
  m.params = cfg.params;
  m.rates = cfg.rates;
  m.doublets = o.doublets;
  m.initial_weights = initial_weights(o, cfg);
  m.mode = parse_mode(o.mode);
  return m;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const ModelConfig cfg = model_config(o);
  const RabiModel model = rabi_model(o, cfg);
  const RabiCurve curve = model.evaluate(time_grid(o.tmax, o.points));
  emit(o, out, [&](std::ostream& s) {
    s << "t_s,t_eff_s,p_g\n";
    for (std::size_t k = 0; k < curve.t.size(); ++k) {
      s << sci(curve.t[k]) << ',' << sci(curve.t_eff[k]) << ',' << sci(curve.p_g[k]) << '\n';
    }
  });
  return ok;
}

int cmd_spectrum(const Options& o, std::ostream& out) {
  const ModelConfig cfg = model_config(o);
  const DressedLadder ladder(cfg.params, o.doublets);
  const Generator gen = build_generator(ladder, cfg.rates, parse_frame(o.frame));
  const SpectralBasis basis = build_spectral_basis(gen);
  const std::size_t d = ladder.size();
  emit(o, out, [&](std::ostream& s) {
    s << "mode_id,type,re_lambda,im_lambda";
    for (std::size_t k = 0; k < d; ++k) s << ",v" << k << "_re,v" << k << "_im";
    s << '\n';
    std::size_t id = 0;
    for (const auto& pair : basis.population.pairs) {
      s << id++ << ",population," << sci(pair.eigenvalue.real()) << ',' << sci(pair.eigenvalue.imag());
      for (Eigen::Index k = 0; k < pair.components.size(); ++k) {
        s << ',' << sci(pair.components(k).real()) << ',' << sci(pair.components(k).imag());
      }
      s << '\n';
    }
    for (const auto& mode : basis.coherences) {
      s << id++ << ",coherence," << sci(mode.eigenvalue.real()) << ',' << sci(mode.eigenvalue.imag());
      for (std::size_t k = 0; k < d; ++k) s << ",,";
      s << '\n';
    }
  });
  return ok;
}

int cmd_generator(const Options& o, std::ostream& out) {
  const ModelConfig cfg = model_config(o);
  const DressedLadder ladder(cfg.params, o.doublets);
  const Generator gen = build_generator(ladder, cfg.rates, parse_frame(o.frame));
  emit(o, out, [&](std::ostream& s) { write_matrix_csv(s, gen.superoperator); });
  return ok;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
  const ModelConfig cfg = model_config(o);
  const DressedLadder ladder(cfg.params, o.doublets);
  const Generator gen = build_generator(ladder, cfg.rates, Frame::rotating);
  const auto w = initial_weights(o, cfg);
  const Eigen::MatrixXcd rho0 = excited_mixture_state(ladder, w);
  const auto grid = time_grid(o.tmax, o.points);
  const oracle::ComparisonReport rep = oracle::compare_propagators(gen, rho0, grid, {o.dt});
  const bool pass = rep.max_deviation() < o.tolerance;
  emit(o, out, [&](std::ostream& s) {
    s << "quantity,value\n";
    s << "spectral_vs_rk4," << sci(rep.spectral_vs_rk4) << '\n';
    s << "spectral_vs_expm," << sci(rep.spectral_vs_expm) << '\n';
    s << "rk4_vs_expm," << sci(rep.rk4_vs_expm) << '\n';
    s << "max_trace_drift," << sci(rep.max_trace_drift) << '\n';
    s << "min_eigenvalue," << sci(rep.min_eigenvalue) << '\n';
    s << "max_hermiticity_error," << sci(rep.max_hermiticity_error) << '\n';
    s << "tolerance," << sci(o.tolerance) << '\n';
    s << "pass," << (pass ? 1 : 0) << '\n';
  });
  if (!pass) {
    err << "compare: max deviation " << sci(rep.max_deviation()) << " exceeds " << sci(o.tolerance) << '\n';
    return tolerance_failure;
  }
  return ok;
}

FitConfig fit_config(const Options& o, const ModelConfig& cfg) {
  FitConfig fc;
  fc.params = cfg.params;
  fc.gamma_cavity = cfg.rates.gamma1;
  fc.gamma_long = cfg.rates.gamma3;
  fc.epsilon = cfg.rates.gamma1 > 0.0 ? cfg.rates.gamma_a / cfg.rates.gamma1 : 0.0;
  fc.doublets = o.doublets;
  fc.initial_weights = initial_weights(o, cfg);
  fc.mode = parse_mode(o.mode);
  fc.grid_points = o.grid_points;
  for (const auto& name : o.free) {
    try {
      fc.free.push_back(parse_fit_parameter(name));
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
  }
  return fc;
}

DataSet synthetic_data(const Options& o, const ModelConfig& cfg) {
  const RabiModel model = rabi_model(o, cfg);
  std::vector<double> t_eff = time_grid(o.tmax, o.points);
  for (double& t : t_eff) t *= cfg.params.geometry_ratio;
  return synthesize_dataset(model, t_eff, o.noise, o.seed);
}

int cmd_fit(const Options& o, std::ostream& out, std::ostream& err) {
  const ModelConfig cfg = model_config(o);
  if (o.data.empty() == !o.synthetic) throw ValidationError("fit needs exactly one of --data or --synthetic");
  const DataSet data = o.synthetic ? synthetic_data(o, cfg) : load_dataset(o.data, cfg.params.geometry_ratio);
  const FitResult r = fit_parameters(data, fit_config(o, cfg));
  if (r.warning) err << "fit: no convergence after " << r.cycles << " cycles; best-so-far reported\n";
  emit(o, out, [&](std::ostream& s) { write_fit_report(s, r); });
  return ok;
}

int cmd_synth(const Options& o, std::ostream& out) {
  const ModelConfig cfg = model_config(o);
  const DataSet data = synthetic_data(o, cfg);
  emit(o, out, [&](std::ostream& s) { write_dataset(s, data); });
  return ok;
}

int cmd_thermal(const Options& o, std::ostream& out) {
  const ModelConfig cfg = model_config(o);
  const ThermalOccupation occ = thermal_weights(cfg.nbar, o.max_photons, cfg.renormalize_thermal);
  const double w = cfg.params.omega0;
  const double g = cfg.params.g;
  const double T = cfg.params.temperature;
  emit(o, out, [&](std::ostream& s) {
    s << "quantity,value\n";
    s << "nbar," << sci(occ.nbar) << '\n';
    for (std::size_t n = 0; n < occ.weights.size(); ++n) s << "p_" << n << ',' << sci(occ.weights[n]) << '\n';
    s << "deficit," << sci(occ.deficit) << '\n';
    s << "nbar_at_omega0," << sci(thermal_photon_number(w, T)) << '\n';
    s << "boltzmann_omega0_plus_g," << sci(boltzmann_factor(w + g, T)) << '\n';
    s << "boltzmann_omega0_minus_g," << sci(boltzmann_factor(w - g, T)) << '\n';
    s << "boltzmann_2g," << sci(boltzmann_factor(2.0 * g, T)) << '\n';
    s << "boltzmann_2sqrt2g," << sci(boltzmann_factor(2.0 * std::sqrt(2.0) * g, T)) << '\n';
  });
  return ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Damped vacuum Rabi oscillations in a dressed-state master equation", "vacrabi"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "key = value model file")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "output file (default: stdout)");
  app.add_option("--seed", o.seed, "seed for synthetic data");

  auto ladder_opts = [&](CLI::App* sub) {
    sub->add_option("--doublets", o.doublets, "number of dressed doublets")->check(CLI::Range(1, 12));
  };
  auto time_opts = [&](CLI::App* sub, std::size_t points) {
    o.points = points;
    sub->add_option("--tmax", o.tmax, "end time, s")->check(CLI::PositiveNumber);
    sub->add_option("--points", o.points, "samples of [0, tmax]")->check(CLI::Range(2, 10000000));
    sub->add_option("--initial", o.initial, "two-doublet | thermal");
  };

  auto* simulate = app.add_subcommand("simulate", "ground-state probability curve");
  ladder_opts(simulate);
  time_opts(simulate, 601);
  simulate->add_option("--mode", o.mode, "raw | effective");

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and population eigenvectors");
  ladder_opts(spectrum);
  spectrum->add_option("--frame", o.frame, "lab | rotating");

  auto* generator = app.add_subcommand("generator", "dump the vectorised generator");
  ladder_opts(generator);
  generator->add_option("--frame", o.frame, "lab | rotating");

  auto* compare = app.add_subcommand("compare", "spectral vs RK4 vs matrix exponential");
  ladder_opts(compare);
  compare->add_option("--tmax", o.tmax, "end time, s")->check(CLI::PositiveNumber);
  compare->add_option("--points", o.points, "comparison times")->check(CLI::Range(2, 100000));
  compare->add_option("--initial", o.initial, "two-doublet | thermal");
  compare->add_option("--dt", o.dt, "RK4 step, s")->check(CLI::PositiveNumber);
  compare->add_option("--tolerance", o.tolerance, "allowed sup-norm deviation")->check(CLI::PositiveNumber);

  auto* fit = app.add_subcommand("fit", "fit rates to a measured or synthetic curve");
  ladder_opts(fit);
  fit->add_option("--data", o.data, "CSV t_eff_s,p_g[,sigma]");
  fit->add_flag("--synthetic", o.synthetic, "fit seeded synthetic data instead");
  fit->add_option("--noise", o.noise, "synthetic noise sigma")->check(CLI::NonNegativeNumber);
  fit->add_option("--free", o.free, "gamma_cavity,gamma_long,epsilon,geometry_ratio")->delimiter(',');
  fit->add_option("--grid-points", o.grid_points, "coarse grid per parameter")->check(CLI::Range(2, 101));
  fit->add_option("--mode", o.mode, "raw | effective");
  fit->add_option("--tmax", o.tmax, "synthetic end time, s")->check(CLI::PositiveNumber);
  fit->add_option("--points", o.points, "synthetic samples")->check(CLI::Range(2, 10000000));
  fit->add_option("--initial", o.initial, "two-doublet | thermal");

  auto* synth = app.add_subcommand("synth", "write seeded synthetic data");
  ladder_opts(synth);
  time_opts(synth, 601);
  synth->add_option("--noise", o.noise, "noise sigma")->check(CLI::NonNegativeNumber);
  synth->add_option("--mode", o.mode, "raw | effective");

  auto* thermal = app.add_subcommand("thermal", "thermal photon weights and Boltzmann factors");
  thermal->add_option("--max-photons", o.max_photons, "largest photon number")->check(CLI::Range(0, 1000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return validation_error;
  }

  try {
    if (*simulate) return cmd_simulate(o, out);
    if (*spectrum) return cmd_spectrum(o, out);
    if (*generator) return cmd_generator(o, out);
    if (*compare) return cmd_compare(o, out, err);
    if (*fit) return cmd_fit(o, out, err);
    if (*synth) return cmd_synth(o, out);
    if (*thermal) return cmd_thermal(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return validation_error;
  }
  return validation_error;
}

}  // namespace vacrabi::cli
