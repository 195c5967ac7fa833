#include "vacrabi/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace vacrabi {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string where(std::string_view source, int line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

double parse_number(std::string_view value, std::string_view source, int line) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(where(source, line) + "not a number: '" + std::string(value) + "'");
  }
  return out;
}

bool parse_bool(std::string_view value, std::string_view source, int line) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(where(source, line) + "not a boolean: '" + std::string(value) + "'");
}

}  // namespace

ModelConfig default_config() { return parse_config("", "<defaults>"); }

ModelConfig parse_config(std::string_view text, std::string_view source) {
  static const char* const kNumericKeys[] = {
      "omega0_rad_s", "g_rad_s", "temperature_K", "nbar", "geometry_ratio", "w_m", "d_m",
      "gamma1", "gamma2", "gamma3", "gamma4", "gamma5", "gamma6", "gamma7", "gamma8",
      "gamma_a", "gamma_b", "gamma_c", "gamma_e", "epsilon"};

  std::map<std::string, double> values;
  std::optional<bool> renormalize;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(where(source, line_no) + "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError(where(source, line_no) + "missing value for '" + key + "'");

    if (key == "renormalize_thermal") {
      renormalize = parse_bool(value, source, line_no);
      continue;
    }
    bool known = false;
    for (const char* k : kNumericKeys) known = known || key == k;
    if (!known) throw ConfigError(where(source, line_no) + "unknown key '" + key + "'");
    if (values.count(key)) throw ConfigError(where(source, line_no) + "duplicate key '" + key + "'");
    values[key] = parse_number(value, source, line_no);
  }

  auto get = [&](const char* key) -> std::optional<double> {
    if (auto it = values.find(key); it != values.end()) return it->second;
    return std::nullopt;
  };

  ModelConfig cfg;
  PhysicalParams& p = cfg.params;
  p.omega0 = get("omega0_rad_s").value_or(p.omega0);
  p.g = get("g_rad_s").value_or(p.g);
  p.temperature = get("temperature_K").value_or(p.temperature);
  cfg.nbar = get("nbar").value_or(cfg.nbar);
  cfg.renormalize_thermal = renormalize.value_or(false);

  const auto ratio = get("geometry_ratio");
  const auto w = get("w_m");
  const auto d = get("d_m");
  if (ratio && (w || d)) throw ConfigError(std::string(source) + ": give geometry_ratio or w_m/d_m, not both");
  if (w.has_value() != d.has_value()) throw ConfigError(std::string(source) + ": w_m and d_m must be given together");
  try {
    if (ratio) p.geometry_ratio = *ratio;
    if (w) p.geometry_ratio = geometry_ratio_from(*w, *d);
    p.validate();
    if (!(cfg.nbar >= 0.0)) throw std::invalid_argument("nbar must be nonnegative");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }

  const RateTable reference = reference_rates(p);
  RateTable r;
  r.gamma1 = get("gamma1").value_or(reference.gamma1);
  r.gamma2 = get("gamma2").value_or(reference.gamma2);
  r.gamma3 = get("gamma3").value_or(reference.gamma3);
  r.gamma4 = get("gamma4").value_or(reference.gamma4);
  r.gamma5 = get("gamma5").value_or(reference.gamma5);
  r.gamma6 = get("gamma6").value_or(reference.gamma6);
  r.gamma7 = get("gamma7").value_or(reference.gamma7);
  r.gamma8 = get("gamma8").value_or(reference.gamma8);
  try {
    r.validate();
    const RateTable balanced = detailed_balance_rates(p, r);
    const auto eps = get("epsilon");
    if (eps && !(*eps >= 0.0)) throw std::invalid_argument("epsilon must be nonnegative");
    r.gamma_a = get("gamma_a").value_or(eps ? *eps * r.gamma1 : balanced.gamma_a);
    r.gamma_b = get("gamma_b").value_or(eps ? *eps * r.gamma2 : balanced.gamma_b);
    r.gamma_c = get("gamma_c").value_or(balanced.gamma_c);
    r.gamma_e = get("gamma_e").value_or(balanced.gamma_e);
    r.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  cfg.rates = r;
  return cfg;
}

ModelConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

}  // namespace vacrabi
