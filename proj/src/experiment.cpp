#include "vacrabi/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "vacrabi/format.hpp"

namespace vacrabi {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool to_double(std::string_view s, double& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

void DataSet::rescale(double new_geometry_ratio) {
  if (!(new_geometry_ratio > 0.0)) throw DataError("geometry_ratio must be positive");
  geometry_ratio = new_geometry_ratio;
  t.resize(t_eff.size());
  for (std::size_t k = 0; k < t_eff.size(); ++k) t[k] = t_eff[k] / geometry_ratio;
}

DataSet parse_dataset(std::string_view text, double geometry_ratio, std::string_view source) {
  if (!(geometry_ratio > 0.0)) throw DataError("geometry_ratio must be positive");
  const std::string src(source);
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  bool header_seen = false;
  std::size_t columns = 0;

  struct Row {
    double t_eff, p_g, sigma;
  };
  std::vector<Row> rows;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() < 2 || fields.size() > 3 || fields[0] != "t_eff_s" || fields[1] != "p_g" ||
          (fields.size() == 3 && fields[2] != "sigma")) {
        throw DataError(src + ":" + std::to_string(line_no) + ": expected header t_eff_s,p_g[,sigma]");
      }
      columns = fields.size();
      continue;
    }
    auto fail = [&](const std::string& what) {
      return DataError(src + ":" + std::to_string(line_no) + ": " + what);
    };
    if (fields.size() != columns) throw fail("expected " + std::to_string(columns) + " columns");
    Row row{0.0, 0.0, 1.0};
    if (!to_double(fields[0], row.t_eff) || !to_double(fields[1], row.p_g) ||
        (columns == 3 && !to_double(fields[2], row.sigma))) {
      throw fail("malformed number");
    }
    if (row.t_eff < 0.0) throw fail("negative time");
    if (row.p_g < 0.0 || row.p_g > 1.0) throw fail("p_g outside [0, 1]");
    if (!(row.sigma > 0.0)) throw fail("sigma must be positive");
    rows.push_back(row);
  }
  if (!header_seen) throw DataError(src + ": no data rows");
  if (rows.empty()) throw DataError(src + ": no data rows");

  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.t_eff < b.t_eff; });
  DataSet data;
  data.source = src;
  data.has_sigma = columns == 3;
  for (const auto& r : rows) {
    data.t_eff.push_back(r.t_eff);
    data.p_g.push_back(r.p_g);
    data.sigma.push_back(r.sigma);
  }
  data.rescale(geometry_ratio);
  return data;
}

DataSet load_dataset(const std::filesystem::path& path, double geometry_ratio) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), geometry_ratio, path.string());
}

void write_dataset(std::ostream& out, const DataSet& data) {
  out << (data.has_sigma ? "t_eff_s,p_g,sigma\n" : "t_eff_s,p_g\n");
  for (std::size_t k = 0; k < data.size(); ++k) {
    out << sci(data.t_eff[k]) << ',' << sci(data.p_g[k]);
    if (data.has_sigma) out << ',' << sci(data.sigma[k]);
    out << '\n';
  }
}

void write_dataset(const std::filesystem::path& path, const DataSet& data) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write data file '" + path.string() + "'");
  write_dataset(out, data);
}

double chi2(const DataSet& data, const RabiCurve& curve) {
  if (curve.t.empty() || curve.t.size() != curve.p_g.size()) throw DataError("empty model curve");
  const double lo = curve.t.front();
  const double hi = curve.t.back();
  const double slack = 1e-12 * std::max(std::abs(hi), 1e-300);
  double total = 0.0;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const double t = data.t[k];
    if (t < lo - slack || t > hi + slack) throw DataError("data time outside the model curve (no extrapolation)");
    const auto it = std::lower_bound(curve.t.begin(), curve.t.end(), t);
    double model = 0.0;
    if (it == curve.t.end()) {
      model = curve.p_g.back();
    } else if (*it == t || it == curve.t.begin()) {
      model = curve.p_g[static_cast<std::size_t>(it - curve.t.begin())];
    } else {
      const auto j = static_cast<std::size_t>(it - curve.t.begin());
      const double w = (t - curve.t[j - 1]) / (curve.t[j] - curve.t[j - 1]);
      model = (1.0 - w) * curve.p_g[j - 1] + w * curve.p_g[j];
    }
    const double r = (model - data.p_g[k]) / data.sigma[k];
    total += r * r;
  }
  return total;
}

namespace {

// The model at the data's true times, in data order.
std::vector<double> model_at_data(const RabiModel& model, const DataSet& data, RabiCurve* curve_out = nullptr) {
  std::vector<double> grid(data.t);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  RabiCurve curve = model.evaluate(grid);
  std::vector<double> values(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto it = std::lower_bound(grid.begin(), grid.end(), data.t[k]);
    values[k] = curve.p_g[static_cast<std::size_t>(it - grid.begin())];
  }
  if (curve_out) *curve_out = std::move(curve);
  return values;
}

}  // namespace

DataSet synthesize_dataset(const RabiModel& model, std::span<const double> t_eff, double noise, std::uint64_t seed) {
  if (!(noise >= 0.0)) throw DataError("noise must be nonnegative");
  DataSet data;
  data.source = "synthetic";
  data.t_eff.assign(t_eff.begin(), t_eff.end());
  std::sort(data.t_eff.begin(), data.t_eff.end());
  data.rescale(model.params.geometry_ratio);
  data.has_sigma = noise > 0.0;
  data.sigma.assign(data.size() == 0 ? t_eff.size() : t_eff.size(), noise > 0.0 ? noise : 1.0);
  data.p_g.assign(t_eff.size(), 0.0);
  const auto clean = model_at_data(model, data);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t k = 0; k < clean.size(); ++k) {
    const double value = clean[k] + (noise > 0.0 ? noise * gauss(rng) : 0.0);
    data.p_g[k] = std::clamp(value, 0.0, 1.0);
  }
  return data;
}

std::string_view to_string(FitParameter p) {
  switch (p) {
    case FitParameter::gamma_cavity: return "gamma_cavity";
    case FitParameter::gamma_long: return "gamma_long";
    case FitParameter::epsilon: return "epsilon";
    case FitParameter::geometry_ratio: return "geometry_ratio";
  }
  return "?";
}

FitParameter parse_fit_parameter(std::string_view text) {
  for (auto p : {FitParameter::gamma_cavity, FitParameter::gamma_long, FitParameter::epsilon,
                 FitParameter::geometry_ratio}) {
    if (to_string(p) == text) return p;
  }
  throw std::invalid_argument("unknown fit parameter '" + std::string(text) + "'");
}

QFactor q_factor(const PhysicalParams& params, double gamma_cavity) {
  if (!(gamma_cavity > 0.0)) throw std::invalid_argument("cavity decay rate must be positive");
  return {params.omega0 / gamma_cavity, params.omega0 / (2.0 * gamma_cavity)};
}

double FitConfig::value(FitParameter p) const {
  switch (p) {
    case FitParameter::gamma_cavity: return gamma_cavity;
    case FitParameter::gamma_long: return gamma_long;
    case FitParameter::epsilon: return epsilon;
    case FitParameter::geometry_ratio: return params.geometry_ratio;
  }
  return 0.0;
}

void FitConfig::set(FitParameter p, double v) {
  switch (p) {
    case FitParameter::gamma_cavity: gamma_cavity = v; break;
    case FitParameter::gamma_long: gamma_long = v; break;
    case FitParameter::epsilon: epsilon = v; break;
    case FitParameter::geometry_ratio: params.geometry_ratio = v; break;
  }
}

std::pair<double, double> default_bounds(FitParameter p, const FitConfig& config) {
  const double v = config.value(p);
  switch (p) {
    case FitParameter::epsilon: return {1e-4, 1.0};
    case FitParameter::geometry_ratio: return {v / 4.0, v * 4.0};
    default: return {v / 10.0, v * 10.0};
  }
}

std::pair<double, double> FitConfig::bounds_for(FitParameter p) const {
  if (auto it = bounds.find(p); it != bounds.end()) return it->second;
  return default_bounds(p, *this);
}

RabiModel FitConfig::model() const {
  RabiModel m;
  m.params = params;
  m.rates = tied_rates(gamma_cavity, gamma_long, epsilon);
  m.doublets = doublets;
  m.initial_weights = initial_weights;
  m.mode = mode;
  return m;
}

namespace {

class Objective {
 public:
  Objective(const DataSet& data, const FitConfig& base) : data_(data), config_(base) {}

  // chi^2 at log-parameters `u` (ordered as config.free).
  double operator()(const std::vector<double>& u) {
    ++evaluations;
    FitConfig cfg = config_;
    for (std::size_t k = 0; k < u.size(); ++k) cfg.set(cfg.free[k], std::exp(u[k]));
    DataSet data = data_;
    if (data.geometry_ratio != cfg.params.geometry_ratio) data.rescale(cfg.params.geometry_ratio);
    try {
      const auto model = model_at_data(cfg.model(), data);
      double total = 0.0;
      for (std::size_t k = 0; k < data.size(); ++k) {
        const double r = (model[k] - data.p_g[k]) / data.sigma[k];
        total += r * r;
      }
      return std::isfinite(total) ? total : std::numeric_limits<double>::infinity();
    } catch (const std::exception&) {
      return std::numeric_limits<double>::infinity();
    }
  }

  std::size_t evaluations = 0;

 private:
  const DataSet& data_;
  FitConfig config_;
};

}  // namespace

FitResult fit_parameters(const DataSet& data, const FitConfig& config) {
  const std::size_t k = config.free.size();
  if (data.size() < k) throw std::invalid_argument("fewer data points than free parameters");
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (config.free[i] == config.free[j]) throw std::invalid_argument("duplicate free parameter");
    }
  }

  std::vector<double> lo(k), hi(k), step(k), u(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto [a, b] = config.bounds_for(config.free[i]);
    if (!(a > 0.0) || !(b > a)) throw std::invalid_argument("fit bounds must be positive and ordered");
    lo[i] = std::log(a);
    hi[i] = std::log(b);
    step[i] = (hi[i] - lo[i]) / std::max(config.grid_points - 1, 1);
    u[i] = std::clamp(std::log(config.value(config.free[i])), lo[i], hi[i]);
  }

  Objective chi(data, config);
  FitResult result;
  double best = chi(u);

  // Coarse grid: every combination of grid_points log-spaced values.
  if (k > 0) {
    const int n = std::max(config.grid_points, 2);
    std::vector<int> idx(k, 0);
    while (true) {
      std::vector<double> trial(k);
      for (std::size_t i = 0; i < k; ++i) trial[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / (n - 1);
      const double c = chi(trial);
      ScanPoint sp{{}, c};
      for (double x : trial) sp.values.push_back(std::exp(x));
      result.scan.push_back(std::move(sp));
      if (c < best) {
        best = c;
        u = trial;
      }
      std::size_t d = 0;
      while (d < k && ++idx[d] == n) idx[d++] = 0;
      if (d == k) break;
    }
  }

  // Golden-section refinement, one coordinate at a time.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  result.converged = true;
  for (int cycle = 0; k > 0 && cycle < config.max_cycles; ++cycle) {
    const double before = best;
    for (std::size_t i = 0; i < k; ++i) {
      double a = std::max(lo[i], u[i] - step[i]);
      double b = std::min(hi[i], u[i] + step[i]);
      auto at = [&](double x) {
        std::vector<double> trial = u;
        trial[i] = x;
        return chi(trial);
      };
      double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
      double f1 = at(x1), f2 = at(x2);
      for (int it = 0; it < 80 && (b - a) > 1e-12 * std::max(1.0, std::abs(u[i])); ++it) {
        if (f1 < f2) {
          b = x2; x2 = x1; f2 = f1;
          x1 = b - inv_phi * (b - a); f1 = at(x1);
        } else {
          a = x1; x1 = x2; f1 = f2;
          x2 = a + inv_phi * (b - a); f2 = at(x2);
        }
      }
      const double x = f1 < f2 ? x1 : x2;
      const double fx = std::min(f1, f2);
      const bool interior = x - step[i] > lo[i] && x + step[i] < hi[i];
      if (fx < best) {
        best = fx;
        u[i] = x;
      }
      // Narrow the bracket once the minimum sits well inside it.
      if (interior && std::abs(x - u[i]) < 0.5 * step[i]) step[i] = std::max(step[i] * 0.5, 1e-9);
    }
    result.cycles = cycle + 1;
    const double change = before - best;
    if (cycle > 0 && change <= config.relative_tolerance * best + 1e-300) {
      result.converged = true;
      break;
    }
    if (cycle + 1 == config.max_cycles) {
      result.converged = false;
      result.warning = true;
    }
  }

  result.best = config;
  for (std::size_t i = 0; i < k; ++i) result.best.set(config.free[i], std::exp(u[i]));
  DataSet rescaled = data;
  if (rescaled.geometry_ratio != result.best.params.geometry_ratio) rescaled.rescale(result.best.params.geometry_ratio);
  const auto model = model_at_data(result.best.model(), rescaled, &result.curve);
  result.chi2 = 0.0;
  result.residuals.resize(data.size());
  for (std::size_t j = 0; j < data.size(); ++j) {
    result.residuals[j] = rescaled.p_g[j] - model[j];
    const double r = result.residuals[j] / rescaled.sigma[j];
    result.chi2 += r * r;
  }
  result.dof = data.size() - k;
  result.q = q_factor(result.best.params, result.best.gamma_cavity);
  result.evaluations = chi.evaluations + 1;
  return result;
}

void write_fit_report(std::ostream& out, const FitResult& r) {
  out << "parameter,value,unit\n";
  out << "gamma_cavity," << sci(r.best.gamma_cavity) << ",rad/s\n";
  out << "gamma_long," << sci(r.best.gamma_long) << ",rad/s\n";
  out << "epsilon," << sci(r.best.epsilon) << ",1\n";
  out << "geometry_ratio," << sci(r.best.params.geometry_ratio) << ",1\n";
  out << "chi2," << sci(r.chi2) << ",1\n";
  out << "dof," << r.dof << ",1\n";
  out << "Q_energy," << sci(r.q.energy) << ",1\n";
  out << "Q_field," << sci(r.q.field) << ",1\n";
  out << "converged," << (r.converged ? 1 : 0) << ",1\n";
}

}  // namespace vacrabi
