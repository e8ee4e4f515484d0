#include "agewave/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <memory>
#include <set>
#include <sstream>

#include "agewave/errors.hpp"
#include "agewave/textio.hpp"

namespace agewave {

namespace {

const std::set<std::string>& documented_keys() {
  static const std::set<std::string> keys = {
      "model.a_max",      "model.n_a",       "model.mu",        "model.beta",
      "model.kappa",      "model.kernel",    "model.sigma",     "model.b",
      "model.r",          "model.table",     "model.gamma_tol",
      "wave.c",           "wave.L_xi",       "wave.n_xi",       "wave.tol",
      "wave.max_iter",
      "simulate.T",       "simulate.domain", "simulate.n_x",    "simulate.closure",
      "simulate.snapshots", "simulate.u0",   "simulate.u0_amp", "simulate.u0_radius",
      "speed.c_list",
      "spread.experiment", "spread.rho",     "spread.c_frac",   "spread.T",
      "spread.domain",    "spread.n_x",      "spread.rho0",     "spread.x0",
      "spread.c_outer",
      "sweep.kappa",      "sweep.sigma",     "sweep.a_max",
  };
  return keys;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_number(const std::string& key, const std::string& raw) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(raw, &used);
  } catch (const std::exception&) {
    throw ValidationError(key + ": not a number: '" + raw + "'");
  }
  if (used != raw.size()) throw ValidationError(key + ": trailing junk in '" + raw + "'");
  return v;
}

}  // namespace

bool Config::has(const std::string& key) const { return kv.count(key) != 0; }

std::string Config::str(const std::string& key, const std::string& fallback) const {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

double Config::num(const std::string& key, double fallback) const {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : parse_number(key, it->second);
}

int Config::integer(const std::string& key, int fallback) const {
  double v = num(key, static_cast<double>(fallback));
  int n = static_cast<int>(std::llround(v));
  if (std::abs(v - n) > 1e-12) throw ValidationError(key + ": expected an integer, got " + str(key, ""));
  return n;
}

std::vector<double> Config::list(const std::string& key) const {
  auto it = kv.find(key);
  std::vector<double> out;
  if (it == kv.end()) return out;
  std::istringstream row(it->second);
  std::string cell;
  while (std::getline(row, cell, ',')) out.push_back(parse_number(key, trim(cell)));
  if (out.empty()) throw ValidationError(key + ": empty list");
  return out;
}

Config parse_config_text(const std::string& text, const std::string& dir) {
  Config cfg;
  cfg.text = text;
  cfg.dir = dir;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = "config line " + std::to_string(lineno);
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ValidationError(where + ": empty section name");
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(where + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ValidationError(where + ": empty key");
    if (value.empty()) throw ValidationError(where + ": empty value for '" + key + "'");
    if (section.empty()) throw ValidationError(where + ": key '" + key + "' before any [section]");
    std::string full = section + "." + key;
    if (!documented_keys().count(full))
      throw ValidationError(where + ": unknown key '" + full + "'");
    if (!cfg.kv.emplace(full, value).second)
      throw ValidationError(where + ": duplicate key '" + full + "'");
  }
  return cfg;
}

Config parse_config(const std::string& path) {
  std::string text = read_text_file(path);
  std::string dir = std::filesystem::path(path).parent_path().string();
  return parse_config_text(text, dir.empty() ? "." : dir);
}

ModelSpec model_from_config(const Config& cfg) {
  double a_max = cfg.num("model.a_max", 1.0);
  int n_a = cfg.integer("model.n_a", 101);
  double mu = cfg.num("model.mu", 0.0);
  double kappa = cfg.num("model.kappa", 1.0);
  double gamma_tol = cfg.num("model.gamma_tol", 1e-10);
  if (a_max <= 0.0) throw ValidationError("model.a_max must be positive");
  if (mu < 0.0) throw ValidationError("model.mu must be nonnegative");

  std::string beta_raw = cfg.str("model.beta", "auto");
  double beta;
  if (beta_raw == "auto") {
    double pi_mass = mu == 0.0 ? a_max : (1.0 - std::exp(-mu * a_max)) / mu;
    beta = 1.0 / pi_mass;
  } else {
    beta = parse_number("model.beta", beta_raw);
  }

  std::string family = cfg.str("model.kernel", "gaussian");
  KernelPtr kernel;
  if (family == "gaussian") {
    kernel = std::make_shared<GaussianKernel>(cfg.num("model.sigma", 1.0));
  } else if (family == "laplace") {
    kernel = std::make_shared<LaplaceKernel>(cfg.num("model.b", 1.0));
  } else if (family == "compact_bump") {
    kernel = std::make_shared<CompactBumpKernel>(cfg.num("model.r", 1.0));
  } else if (family == "tabulated") {
    if (!cfg.has("model.table"))
      throw ValidationError("model.kernel = tabulated requires model.table");
    std::filesystem::path p(cfg.str("model.table", ""));
    if (p.is_relative()) p = std::filesystem::path(cfg.dir) / p;
    TwoColumnTable table = read_two_column_csv(p.string());
    kernel = std::make_shared<TabulatedKernel>(table.first, table.second);
  } else {
    throw ValidationError("model.kernel: unknown family '" + family + "'");
  }

  return make_model(
      a_max, n_a, [mu](double) { return mu; }, [beta](double) { return beta; }, kernel,
      [kappa](double, double) { return kappa; }, gamma_tol);
}

}  // namespace agewave
