// experiment.hpp - Rabi-oscillation data sets, chi^2, parameter fitting and
// cavity quality factors.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vacrabi/dynamics.hpp"

namespace vacrabi {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CSV columns t_eff_s,p_g[,sigma]. Measurements are plotted against
// t_eff = geometry_ratio * t; `t` holds the rescaled true time.
struct DataSet {
  std::vector<double> t_eff;
  std::vector<double> t;
  std::vector<double> p_g;
  std::vector<double> sigma;  // 1 where the file has no sigma column
  bool has_sigma = false;
  double geometry_ratio = 1.0;
  std::string source;

  std::size_t size() const { return p_g.size(); }
  // Re-derive t from t_eff for a new geometry ratio.
  void rescale(double new_geometry_ratio);
};

DataSet parse_dataset(std::string_view text, double geometry_ratio, std::string_view source = "<string>");
DataSet load_dataset(const std::filesystem::path& path, double geometry_ratio);
void write_dataset(std::ostream& out, const DataSet& data);
void write_dataset(const std::filesystem::path& path, const DataSet& data);

// sum ((p_model - p_data) / sigma)^2 with the model linearly interpolated on
// curve.t. Throws DataError when a data time lies outside the curve.
double chi2(const DataSet& data, const RabiCurve& curve);

// Model sampled at the data's true times plus N(0, noise^2), clipped to [0, 1].
// Deterministic in `seed`.
DataSet synthesize_dataset(const RabiModel& model, std::span<const double> t_eff, double noise,
                           std::uint64_t seed);

enum class FitParameter { gamma_cavity, gamma_long, epsilon, geometry_ratio };

std::string_view to_string(FitParameter p);
FitParameter parse_fit_parameter(std::string_view text);

struct QFactor {
  double energy = 0.0;  // omega0 / gamma
  double field = 0.0;   // omega0 / (2 gamma)
};

QFactor q_factor(const PhysicalParams& params, double gamma_cavity);

// Tied parameterisation of the two-doublet rate table:
//   gamma1 = gamma2 = gamma4 = gamma6 = gamma7 = gamma8 = gamma_cavity
//   gamma3 = gamma_c = gamma5 = gamma_e = gamma_long
//   gamma_a = gamma_b = epsilon * gamma_cavity
struct FitConfig {
  PhysicalParams params;  // geometry_ratio is the starting value
  double gamma_cavity = kReferenceCavityRate;
  double gamma_long = kReferenceLongFraction * PhysicalParams{}.g;
  double epsilon = boltzmann_factor(PhysicalParams{}.omega0 + PhysicalParams{}.g, PhysicalParams{}.temperature);
  int doublets = 2;
  std::vector<double> initial_weights{0.95, 0.05};
  TimeMode mode = TimeMode::effective;

  std::vector<FitParameter> free;
  // Positive (lower, upper); parameters without an entry use default_bounds().
  std::map<FitParameter, std::pair<double, double>> bounds;
  int grid_points = 7;  // per free parameter, log-spaced
  int max_cycles = 60;
  double relative_tolerance = 1e-6;

  double value(FitParameter p) const;
  void set(FitParameter p, double v);
  std::pair<double, double> bounds_for(FitParameter p) const;
  RabiModel model() const;
};

std::pair<double, double> default_bounds(FitParameter p, const FitConfig& config);

struct ScanPoint {
  std::vector<double> values;  // in the order of FitConfig::free
  double chi2 = 0.0;
};

struct FitResult {
  FitConfig best;  // config with the fitted values filled in
  double chi2 = 0.0;
  std::size_t dof = 0;
  std::vector<double> residuals;  // data - model
  RabiCurve curve;                // model at the data's true times
  QFactor q;
  bool converged = true;
  bool warning = false;  // max_cycles hit; best-so-far returned
  int cycles = 0;
  std::size_t evaluations = 0;
  std::vector<ScanPoint> scan;
};

// Coarse log-spaced grid over the free parameters followed by golden-section
// line searches cycled over the coordinates until chi^2 changes by less than
// relative_tolerance between cycles.
FitResult fit_parameters(const DataSet& data, const FitConfig& config);

// parameter,value,unit rows plus chi2 and both Q values.
void write_fit_report(std::ostream& out, const FitResult& result);

}  // namespace vacrabi
