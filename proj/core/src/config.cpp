#include "hjhomog/config.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hjhomog {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt_double(v[i]);
  }
  return out;
}

double parse_double(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || t.empty())
    throw ConfigError("config: bad number for '" + key + "': " + s);
  return v;
}

long long parse_int(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size() || t.empty())
    throw ConfigError("config: bad integer for '" + key + "': " + s);
  return v;
}

std::uint64_t parse_seed(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  char* end = nullptr;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size() || t.empty() || t[0] == '-')
    throw ConfigError("config: bad seed for '" + key + "': " + s);
  return v;
}

std::vector<double> parse_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, key));
  if (out.empty()) throw ConfigError("config: empty list for '" + key + "'");
  return out;
}

void require_sorted(const std::vector<double>& v, bool ascending, const char* name) {
  if (v.empty()) throw ConfigError(std::string("config: empty ladder '") + name + "'");
  for (std::size_t i = 1; i < v.size(); ++i) {
    const bool ok = ascending ? v[i] > v[i - 1] : v[i] < v[i - 1];
    if (!ok)
      throw ConfigError(std::string("config: ladder '") + name + "' must be strictly " +
                        (ascending ? "ascending" : "descending"));
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    ensemble.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ensemble: ") + e.what());
  }
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string("config: '") + name + "' must be > 0");
  };
  positive(metric_spacing, "metric_spacing");
  positive(metric_target_radius, "metric_target_radius");
  positive(shape_spacing, "shape_spacing");
  positive(cell_spacing, "cell_spacing");
  positive(evolve_spacing_divisor, "evolve_spacing_divisor");
  positive(evolve_inner_radius, "evolve_inner_radius");
  positive(evolve_t_final, "evolve_t_final");
  positive(tol_mu, "tol_mu");
  positive(tol_gap, "tol_gap");
  positive(tol_h, "tol_h");
  positive(tol_cell, "tol_cell");
  positive(tol_hom, "tol_hom");
  positive(p_max, "p_max");
  if (metric_box_factor < 1.0 || shape_box_factor < 1.0)
    throw ConfigError("config: box factors must be >= 1");
  require_sorted(mu_ladder, true, "mu");
  require_sorted(sigma_ladder, true, "sigma");
  require_sorted(delta_ladder, false, "delta");
  require_sorted(epsilon_ladder, false, "epsilon");
  require_sorted(radii, true, "radii");
  require_sorted(cell_p, true, "cell_p");
  if (mu_ladder.front() < 0.0) throw ConfigError("config: mu ladder must be nonnegative");
  if (delta_ladder.back() <= 0.0) throw ConfigError("config: delta ladder must be positive");
  if (epsilon_ladder.back() <= 0.0) throw ConfigError("config: epsilon ladder must be positive");
  if (radii.front() <= 0.0) throw ConfigError("config: radii must be positive");
  if (n_directions < 2) throw ConfigError("config: n_directions must be >= 2");
  if (p_axis < 2) throw ConfigError("config: p_axis must be >= 2");
  if (realizations < 1) throw ConfigError("config: realizations must be >= 1");
  if (out_dir.empty()) throw ConfigError("config: out_dir must be nonempty");
}

std::string ExperimentConfig::serialize() const {
  std::string s;
  s += "[ensemble]\n";
  s += std::string("kind = ") + to_string(ensemble.kind) + "\n";
  s += "dim = " + std::to_string(ensemble.dim) + "\n";
  s += "k0 = " + fmt_double(ensemble.k0) + "\n";
  char seedbuf[32];
  std::snprintf(seedbuf, sizeof seedbuf, "%" PRIu64, ensemble.seed);
  s += std::string("seed = ") + seedbuf + "\n";
  s += "level = " + fmt_double(ensemble.level) + "\n";
  s += "amplitude = " + fmt_double(ensemble.amplitude) + "\n";
  s += "period = " + fmt_double(ensemble.period) + "\n";
  s += "intensity = " + fmt_double(ensemble.intensity) + "\n";
  s += "bump_radius = " + fmt_double(ensemble.bump_radius) + "\n";
  s += "bump_height = " + fmt_double(ensemble.bump_height) + "\n";
  s += "\n[grids]\n";
  s += "metric_spacing = " + fmt_double(metric_spacing) + "\n";
  s += "metric_target_radius = " + fmt_double(metric_target_radius) + "\n";
  s += "metric_box_factor = " + fmt_double(metric_box_factor) + "\n";
  s += "shape_spacing = " + fmt_double(shape_spacing) + "\n";
  s += "shape_box_factor = " + fmt_double(shape_box_factor) + "\n";
  s += "cell_spacing = " + fmt_double(cell_spacing) + "\n";
  s += "evolve_spacing_divisor = " + fmt_double(evolve_spacing_divisor) + "\n";
  s += "evolve_inner_radius = " + fmt_double(evolve_inner_radius) + "\n";
  s += "evolve_t_final = " + fmt_double(evolve_t_final) + "\n";
  s += "\n[ladders]\n";
  s += "mu = " + fmt_list(mu_ladder) + "\n";
  s += "sigma = " + fmt_list(sigma_ladder) + "\n";
  s += "delta = " + fmt_list(delta_ladder) + "\n";
  s += "epsilon = " + fmt_list(epsilon_ladder) + "\n";
  s += "radii = " + fmt_list(radii) + "\n";
  s += "cell_p = " + fmt_list(cell_p) + "\n";
  s += "n_directions = " + std::to_string(n_directions) + "\n";
  s += "p_max = " + fmt_double(p_max) + "\n";
  s += "p_axis = " + std::to_string(p_axis) + "\n";
  s += "\n[tolerances]\n";
  s += "tol_mu = " + fmt_double(tol_mu) + "\n";
  s += "tol_gap = " + fmt_double(tol_gap) + "\n";
  s += "tol_h = " + fmt_double(tol_h) + "\n";
  s += "tol_cell = " + fmt_double(tol_cell) + "\n";
  s += "tol_hom = " + fmt_double(tol_hom) + "\n";
  s += "\n[seeds]\n";
  std::snprintf(seedbuf, sizeof seedbuf, "%" PRIu64, master_seed);
  s += std::string("master = ") + seedbuf + "\n";
  s += "realizations = " + std::to_string(realizations) + "\n";
  s += "\n[output]\n";
  s += "dir = " + out_dir + "\n";
  return s;
}

ExperimentConfig ExperimentConfig::parse_string(const std::string& text) {
  ExperimentConfig cfg;
  std::string section;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("config: line " + std::to_string(lineno) + ": unterminated section");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    const std::string qual = section + "." + key;

    if (qual == "ensemble.kind") {
      try {
        cfg.ensemble.kind = ensemble_kind_from_string(val);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
      }
    } else if (qual == "ensemble.dim") {
      cfg.ensemble.dim = static_cast<int>(parse_int(val, qual));
    } else if (qual == "ensemble.k0") {
      cfg.ensemble.k0 = parse_double(val, qual);
    } else if (qual == "ensemble.seed") {
      cfg.ensemble.seed = parse_seed(val, qual);
    } else if (qual == "ensemble.level") {
      cfg.ensemble.level = parse_double(val, qual);
    } else if (qual == "ensemble.amplitude") {
      cfg.ensemble.amplitude = parse_double(val, qual);
    } else if (qual == "ensemble.period") {
      cfg.ensemble.period = parse_double(val, qual);
    } else if (qual == "ensemble.intensity") {
      cfg.ensemble.intensity = parse_double(val, qual);
    } else if (qual == "ensemble.bump_radius") {
      cfg.ensemble.bump_radius = parse_double(val, qual);
    } else if (qual == "ensemble.bump_height") {
      cfg.ensemble.bump_height = parse_double(val, qual);
    } else if (qual == "grids.metric_spacing") {
      cfg.metric_spacing = parse_double(val, qual);
    } else if (qual == "grids.metric_target_radius") {
      cfg.metric_target_radius = parse_double(val, qual);
    } else if (qual == "grids.metric_box_factor") {
      cfg.metric_box_factor = parse_double(val, qual);
    } else if (qual == "grids.shape_spacing") {
      cfg.shape_spacing = parse_double(val, qual);
    } else if (qual == "grids.shape_box_factor") {
      cfg.shape_box_factor = parse_double(val, qual);
    } else if (qual == "grids.cell_spacing") {
      cfg.cell_spacing = parse_double(val, qual);
    } else if (qual == "grids.evolve_spacing_divisor") {
      cfg.evolve_spacing_divisor = parse_double(val, qual);
    } else if (qual == "grids.evolve_inner_radius") {
      cfg.evolve_inner_radius = parse_double(val, qual);
    } else if (qual == "grids.evolve_t_final") {
      cfg.evolve_t_final = parse_double(val, qual);
    } else if (qual == "ladders.mu") {
      cfg.mu_ladder = parse_list(val, qual);
    } else if (qual == "ladders.sigma") {
      cfg.sigma_ladder = parse_list(val, qual);
    } else if (qual == "ladders.delta") {
      cfg.delta_ladder = parse_list(val, qual);
    } else if (qual == "ladders.epsilon") {
      cfg.epsilon_ladder = parse_list(val, qual);
    } else if (qual == "ladders.radii") {
      cfg.radii = parse_list(val, qual);
    } else if (qual == "ladders.cell_p") {
      cfg.cell_p = parse_list(val, qual);
    } else if (qual == "ladders.n_directions") {
      cfg.n_directions = static_cast<int>(parse_int(val, qual));
    } else if (qual == "ladders.p_max") {
      cfg.p_max = parse_double(val, qual);
    } else if (qual == "ladders.p_axis") {
      cfg.p_axis = static_cast<int>(parse_int(val, qual));
    } else if (qual == "tolerances.tol_mu") {
      cfg.tol_mu = parse_double(val, qual);
    } else if (qual == "tolerances.tol_gap") {
      cfg.tol_gap = parse_double(val, qual);
    } else if (qual == "tolerances.tol_h") {
      cfg.tol_h = parse_double(val, qual);
    } else if (qual == "tolerances.tol_cell") {
      cfg.tol_cell = parse_double(val, qual);
    } else if (qual == "tolerances.tol_hom") {
      cfg.tol_hom = parse_double(val, qual);
    } else if (qual == "seeds.master") {
      cfg.master_seed = parse_seed(val, qual);
    } else if (qual == "seeds.realizations") {
      cfg.realizations = static_cast<int>(parse_int(val, qual));
    } else if (qual == "output.dir") {
      cfg.out_dir = val;
    } else {
      throw ConfigError("config: line " + std::to_string(lineno) + ": unknown key '" + qual +
                        "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

std::string config_digest(const ExperimentConfig& cfg) {
  const std::string s = cfg.serialize();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

}  // namespace hjhomog
