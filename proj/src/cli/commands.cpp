#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "plab/cli.hpp"
#include "plab/ratefit.hpp"

#ifndef PLAB_VERSION
#define PLAB_VERSION "0.0.0"
#endif

namespace plab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string snapshot_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06zu.bin", i);
  return buf;
}

void write_manifest(const fs::path& path, const RunConfig& cfg, const Trajectory& traj) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << "plab " << PLAB_VERSION << '\n';
  for (const auto& [k, v] : cfg.entries) out << k << " = " << v << '\n';
  out << "rows = " << traj.ledger.size() << '\n';
  out << "snapshots = " << traj.snapshots.size() << '\n';
}

}  // namespace

int cmd_run(const std::string& config_path, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  PeriodicField u0;
  fs::path dir;
  std::unique_ptr<SplitModel> model;
  try {
    cfg = load_config(config_path);
    u0 = initial_field(cfg);
    dir = resolve_output_dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
      throw ConfigError("cannot create output directory '" + dir.string() + "'");
    const PeriodicField phi = cfg.phi == "mollified" ? mollify(u0, cfg.phi_width) : PeriodicField{};
    model = make_model(cfg.model, phi);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  EvolveOptions opts;
  opts.ledger_stride = cfg.ledger_stride;
  opts.keep_snapshots = cfg.write_snapshots;
  opts.quantities = cfg.quantities;
  try {
    const Trajectory traj = evolve(*model, u0, cfg.t_final, cfg.stepper, opts);
    write_ledger_csv(dir / "ledger.csv", traj);
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i)
      write_snapshot(dir / snapshot_name(i), traj.snapshots[i], traj.times[i]);
    write_manifest(dir / "manifest.txt", cfg, traj);
    out << "run complete: " << traj.ledger.size() << " ledger rows in " << dir.string() << '\n';
    return 0;
  } catch (const NumericalAbort& e) {
    err << "numerical abort at t = " << e.t << ": " << e.what() << '\n';
    try {
      std::ofstream diag(dir / "diagnostics.txt", std::ios::trunc);
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", e.t);
      diag << "status = aborted\n"
           << "reason = " << e.what() << '\n'
           << "t_last_healthy = " << buf << '\n';
      if (e.last_healthy) {
        write_snapshot(dir / "snap_last_healthy.bin", *e.last_healthy, e.t);
        diag << "snapshot = snap_last_healthy.bin\n";
      }
    } catch (const std::exception& w) {
      err << "could not write diagnostics: " << w.what() << '\n';
    }
    return 3;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

namespace {

struct Expectation {
  std::string column;
  double value = 0.0;
  double tol = 0.0;
};

Expectation parse_expect(const std::string& text) {
  Expectation ex;
  bool have_value = false, have_tol = false;
  std::istringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ConfigError("--expect: expected key=value, got '" + part + "'");
    const std::string k = part.substr(0, eq);
    const std::string v = part.substr(eq + 1);
    double d = 0.0;
    std::size_t used = 0;
    try {
      d = std::stod(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != v.size()) throw ConfigError("--expect: '" + v + "' is not a number");
    if (k == "tol") {
      ex.tol = d;
      have_tol = true;
    } else {
      ex.column = k;
      ex.value = d;
      have_value = true;
    }
  }
  if (!have_value || !have_tol || !(ex.tol >= 0.0))
    throw ConfigError("--expect needs column=value,tol=v");
  return ex;
}

}  // namespace

int cmd_ratefit(const std::string& csv_path, const RatefitOptions& options, std::ostream& out,
                std::ostream& err) {
  CsvTable table;
  std::optional<Expectation> expect;
  FitKind kind = FitKind::power_law;
  try {
    if (options.kind == "exp" || options.kind == "exponential")
      kind = FitKind::exponential;
    else if (options.kind != "power")
      throw ConfigError("--kind must be power or exp");
    if (options.expect) expect = parse_expect(*options.expect);
    table = read_csv(csv_path);
    table.column("t");
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::vector<std::string> columns;
  if (options.column)
    columns.push_back(*options.column);
  else if (expect)
    columns.push_back(expect->column);
  else
    for (const auto& h : table.header)
      if (h != "t") columns.push_back(h);

  const auto t = table.column("t");
  std::pair<double, double> window;
  if (options.window) {
    window = *options.window;
  } else if (kind == FitKind::power_law && t.size() > 1) {
    window = {10.0 * t[1], t.back() / 10.0};
  } else {
    window = {t.size() > 1 ? t[1] : t.front(), t.back()};
  }

  const bool explicit_column = options.column.has_value() || expect.has_value();
  int status = 0;
  for (const auto& col : columns) {
    json rec;
    rec["schema_version"] = kSchemaVersion;
    rec["column"] = col;
    rec["kind"] = to_string(kind);
    try {
      const auto v = table.column(col);
      const RateFit f = kind == FitKind::power_law ? fit_power_law(t, v, window)
                                                   : fit_exponential(t, v, window);
      rec["estimate"] = f.estimate;
      rec["stderr"] = f.stderr_;
      rec["r_squared"] = f.r_squared;
      rec["window"] = {f.window.first, f.window.second};
      rec["n_points"] = f.n_points;
      if (expect && expect->column == col) {
        const bool ok = std::abs(f.estimate - expect->value) <= expect->tol;
        rec["expected"] = expect->value;
        rec["tolerance"] = expect->tol;
        rec["status"] = ok ? "pass" : "fail";
        if (!ok) status = std::max(status, 1);
      }
    } catch (const std::exception& e) {
      if (explicit_column) {
        err << "error: " << col << ": " << e.what() << '\n';
        return 2;
      }
      rec["status"] = "skipped";
      rec["reason"] = e.what();
    }
    out << rec.dump() << '\n';
  }
  return status;
}

int cmd_verify(const std::string& suite, std::ostream& out, std::ostream& err) {
  std::vector<CheckResult> results;
  try {
    results = run_suite(suite);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  int status = 0;
  for (const auto& r : results) {
    json rec;
    rec["schema_version"] = kSchemaVersion;
    rec["suite"] = suite;
    rec["check"] = r.check;
    rec["status"] = r.pass ? "pass" : "fail";
    rec["measured"] = r.measured;
    rec["expected"] = r.expected;
    rec["tolerance"] = r.tolerance;
    out << rec.dump() << '\n';
    if (!r.pass) status = 1;
  }
  return status;
}

}  // namespace plab::cli
