#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "plab/cli.hpp"

namespace plab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + v + "' is not a number");
  }
  if (used != v.size() || !std::isfinite(d)) throw ConfigError(key + ": '" + v + "' is not a number");
  return d;
}

long long to_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long d = 0;
  try {
    d = std::stoll(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + v + "' is not an integer");
  }
  if (used != v.size()) throw ConfigError(key + ": '" + v + "' is not an integer");
  return d;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": '" + v + "' is not a boolean");
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key + ": " + what);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::map<std::string, std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    if (seen.count(key)) throw ConfigError("duplicate key '" + key + "'");
    seen[key] = value;
  }

  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"model.tag",
       [&](auto& k, auto& v) {
         try {
           c.model.tag = parse_model_tag(v);
         } catch (const PreconditionError& e) {
           throw ConfigError(k + ": " + e.what());
         }
       }},
      {"model.a", [&](auto& k, auto& v) { c.model.a = to_double(k, v); }},
      {"model.rho0", [&](auto& k, auto& v) { c.model.rho0 = to_double(k, v); }},
      {"model.hbar0", [&](auto& k, auto& v) { c.model.hbar0 = to_double(k, v); }},
      {"model.s", [&](auto& k, auto& v) { c.model.s = to_double(k, v); }},
      {"model.fmc_periods", [&](auto& k, auto& v) { c.model.fmc_periods = static_cast<int>(to_int(k, v)); }},
      {"model.tension",
       [&](auto& k, auto& v) { require(v == "hookean", k, "only 'hookean' is available"); }},
      {"model.phi",
       [&](auto& k, auto& v) {
         require(v == "zero" || v == "mollified", k, "expected zero or mollified");
         c.phi = v;
       }},
      {"model.phi_width", [&](auto& k, auto& v) { c.phi_width = to_double(k, v); }},
      {"grid.N", [&](auto& k, auto& v) { c.n = static_cast<std::size_t>(to_int(k, v)); }},
      {"grid.L", [&](auto& k, auto& v) { c.length = to_double(k, v); }},
      {"stepper.dt", [&](auto& k, auto& v) { c.stepper.dt = to_double(k, v); }},
      {"stepper.scheme",
       [&](auto& k, auto& v) {
         try {
           c.stepper.scheme = parse_scheme(v);
         } catch (const PreconditionError& e) {
           throw ConfigError(k + ": " + e.what());
         }
       }},
      {"stepper.dealias", [&](auto& k, auto& v) { c.stepper.dealias = to_bool(k, v); }},
      {"stepper.max_picard_iters",
       [&](auto& k, auto& v) { c.stepper.max_picard_iters = static_cast<int>(to_int(k, v)); }},
      {"stepper.picard_tol", [&](auto& k, auto& v) { c.stepper.picard_tol = to_double(k, v); }},
      {"stepper.T", [&](auto& k, auto& v) { c.t_final = to_double(k, v); }},
      {"stepper.ledger_stride",
       [&](auto& k, auto& v) { c.ledger_stride = static_cast<int>(to_int(k, v)); }},
      {"stepper.theta_cap", [&](auto& k, auto& v) { c.stepper.theta_cap = to_double(k, v); }},
      {"stepper.dt_guard", [&](auto& k, auto& v) { c.stepper.dt_guard = to_bool(k, v); }},
      {"initial.preset", [&](auto&, auto& v) { c.initial.preset = v; }},
      {"initial.amplitude", [&](auto& k, auto& v) { c.initial.amplitude = to_double(k, v); }},
      {"initial.mean", [&](auto& k, auto& v) { c.initial.mean = to_double(k, v); }},
      {"initial.mode", [&](auto& k, auto& v) { c.initial.mode = static_cast<int>(to_int(k, v)); }},
      {"initial.rx", [&](auto& k, auto& v) { c.initial.rx = to_double(k, v); }},
      {"initial.ry", [&](auto& k, auto& v) { c.initial.ry = to_double(k, v); }},
      {"initial.file", [&](auto&, auto& v) { c.initial.file = v; }},
      {"ledger.quantities",
       [&](auto& k, auto& v) {
         std::istringstream q(v);
         std::string tok;
         while (std::getline(q, tok, ',')) {
           tok = trim(tok);
           if (tok.empty()) continue;
           try {
             c.quantities.push_back(LedgerQuantity::parse(tok));
           } catch (const std::exception& e) {
             throw ConfigError(k + ": " + e.what());
           }
         }
       }},
      {"output.dir", [&](auto&, auto& v) { c.output_dir = v; }},
      {"output.snapshots", [&](auto& k, auto& v) { c.write_snapshots = to_bool(k, v); }},
      {"seed",
       [&](auto& k, auto& v) {
         const long long s = to_int(k, v);
         require(s >= 0, k, "must be nonnegative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
  };

  for (const auto& [key, value] : seen) {
    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown key '" + key + "'");
    it->second(key, value);
  }

  // range validation
  require(c.n >= 16 && c.n <= (1u << 16) && (c.n & (c.n - 1)) == 0, "grid.N",
          "must be a power of two in [16, 65536]");
  require(c.length > 0.0, "grid.L", "must be positive");
  require(c.stepper.dt > 0.0, "stepper.dt", "must be positive");
  require(c.t_final > 0.0, "stepper.T", "must be positive");
  require(c.ledger_stride >= 1, "stepper.ledger_stride", "must be at least 1");
  require(c.stepper.picard_tol > 0.0, "stepper.picard_tol", "must be positive");
  require(c.stepper.max_picard_iters >= 1, "stepper.max_picard_iters", "must be at least 1");
  require(c.stepper.theta_cap > 0.0, "stepper.theta_cap", "must be positive");
  require(c.model.tag != ModelTag::nonlocal_mcf || (c.model.a > 0.0 && c.model.a < 1.0),
          "model.a", "must lie in (0, 1)");
  require(c.model.fmc_periods >= 1, "model.fmc_periods", "must be at least 1");
  require(c.model.hbar0 > 1.0, "model.hbar0", "must exceed 1");
  require(c.model.s > 0.0, "model.s", "must be positive");
  require(c.phi_width >= 0.0, "model.phi_width", "must be nonnegative");
  const double steps = std::round(c.t_final / c.stepper.dt);
  require(steps >= 1.0 && std::abs(steps * c.stepper.dt - c.t_final) <= 1e-9 * c.t_final,
          "stepper.T", "must be a multiple of stepper.dt");
  static const std::set<std::string> presets = {"cos",    "triangle", "sawtooth", "bump",
                                                "random", "circle",   "ellipse",  "file"};
  require(presets.count(c.initial.preset) > 0, "initial.preset", "unknown preset");
  require(c.initial.preset != "file" || !c.initial.file.empty(), "initial.file",
          "required by preset 'file'");
  const bool contour = c.model.tag == ModelTag::peskin2d;
  const bool contour_preset = c.initial.preset == "circle" || c.initial.preset == "ellipse";
  if (c.initial.preset != "file")
    require(contour == contour_preset, "initial.preset",
            contour ? "peskin2d needs circle or ellipse" : "contour presets need model peskin2d");
  require(c.initial.rx > 0.0 && c.initial.ry > 0.0, "initial.rx", "radii must be positive");

  // canonical echo, sorted by key, with defaults filled in
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::string qs;
  for (const auto& q : c.quantities) qs += (qs.empty() ? "" : ",") + q.column();
  c.entries = {
      {"grid.L", num(c.length)},
      {"grid.N", std::to_string(c.n)},
      {"initial.amplitude", num(c.initial.amplitude)},
      {"initial.file", c.initial.file},
      {"initial.mean", num(c.initial.mean)},
      {"initial.mode", std::to_string(c.initial.mode)},
      {"initial.preset", c.initial.preset},
      {"initial.rx", num(c.initial.rx)},
      {"initial.ry", num(c.initial.ry)},
      {"ledger.quantities", qs},
      {"model.a", num(c.model.a)},
      {"model.fmc_periods", std::to_string(c.model.fmc_periods)},
      {"model.hbar0", num(c.model.hbar0)},
      {"model.phi", c.phi},
      {"model.phi_width", num(c.phi_width)},
      {"model.rho0", num(c.model.rho0)},
      {"model.s", num(c.model.s)},
      {"model.tag", to_string(c.model.tag)},
      {"model.tension", "hookean"},
      {"output.dir", c.output_dir},
      {"output.snapshots", c.write_snapshots ? "true" : "false"},
      {"seed", std::to_string(c.seed)},
      {"stepper.T", num(c.t_final)},
      {"stepper.dealias", c.stepper.dealias ? "true" : "false"},
      {"stepper.dt", num(c.stepper.dt)},
      {"stepper.dt_guard", c.stepper.dt_guard ? "true" : "false"},
      {"stepper.ledger_stride", std::to_string(c.ledger_stride)},
      {"stepper.max_picard_iters", std::to_string(c.stepper.max_picard_iters)},
      {"stepper.picard_tol", num(c.stepper.picard_tol)},
      {"stepper.scheme", to_string(c.stepper.scheme)},
      {"stepper.theta_cap", num(c.stepper.theta_cap)},
  };
  c.model.theta_cap = c.stepper.theta_cap;
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

PeriodicField initial_field(const RunConfig& c) {
  const auto& ini = c.initial;
  const double a = ini.amplitude;
  const double m = ini.mean;
  if (ini.preset == "file") {
    Snapshot s = read_snapshot(ini.file);
    if (s.field.n() != c.n) throw ConfigError("initial.file: grid size differs from grid.N");
    return s.field;
  }
  if (ini.preset == "circle")
    return PeriodicField::from_curve(
        c.n, [&](double x) { return ini.rx * std::cos(x); },
        [&](double x) { return ini.rx * std::sin(x); }, c.length);
  if (ini.preset == "ellipse")
    return PeriodicField::from_curve(
        c.n, [&](double x) { return ini.rx * std::cos(x); },
        [&](double x) { return ini.ry * std::sin(x); }, c.length);
  const double len = c.length;
  const double k = kTwoPi / len * ini.mode;
  if (ini.preset == "cos")
    return PeriodicField::from_function(c.n, [&](double x) { return m + a * std::cos(k * x); }, len);
  if (ini.preset == "triangle" || ini.preset == "sawtooth") {
    // peak a at x = 0, trough -a at x = L/2, kinks on grid nodes
    return PeriodicField::from_function(
        c.n, [&](double x) { return m + a * (4.0 * std::abs(x / len - 0.5) - 1.0); }, len);
  }
  if (ini.preset == "bump") {
    return PeriodicField::from_function(
        c.n,
        [&](double x) {
          const double s = std::sin(0.5 * kTwoPi * x / len);
          return m + a * std::exp(-4.0 * s * s);
        },
        len);
  }
  // random: band-limited, modes 1..8, amplitudes decaying like 1/k
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<std::pair<double, double>> coef;
  for (int q = 1; q <= 8; ++q) coef.emplace_back(uni(rng) / q, uni(rng) / q);
  return PeriodicField::from_function(
      c.n,
      [&](double x) {
        double v = m;
        for (int q = 1; q <= 8; ++q) {
          const double kx = kTwoPi / len * q * x;
          v += a * (coef[q - 1].first * std::cos(kx) + coef[q - 1].second * std::sin(kx));
        }
        return v;
      },
      len);
}

std::filesystem::path resolve_output_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv("PLAB_OUTPUT_ROOT"); root && *root)
      return std::filesystem::path(root) / p;
  }
  return p;
}

}  // namespace plab::cli
