#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plab/grid.hpp"
#include "plab/models.hpp"
#include "plab/stepper.hpp"

namespace plab::cli {

inline constexpr int kSchemaVersion = 1;

/// Config or input file problem; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InitialData {
  std::string preset = "cos";  ///< cos, triangle (alias sawtooth), bump, random, circle, ellipse, file
  double amplitude = 1.0;
  double mean = 0.0;
  int mode = 1;
  double rx = 1.0;
  double ry = 1.0;
  std::string file;
};

struct RunConfig {
  ModelSpec model;
  std::string phi = "zero";  ///< frozen reference: zero or mollified (initial data, Gaussian)
  double phi_width = 4.0;    ///< mollifier width in grid cells
  std::size_t n = 256;
  double length = kTwoPi;
  StepperConfig stepper;
  double t_final = 1.0;
  int ledger_stride = 1;
  InitialData initial;
  std::vector<LedgerQuantity> quantities;
  std::string output_dir = "plab_out";
  bool write_snapshots = true;
  std::uint64_t seed = 0;

  /// Canonical key=value lines in a fixed order (used for the manifest).
  std::vector<std::pair<std::string, std::string>> entries;
};

/// Parses flat `key = value` text; `#` starts a comment. Unknown keys and out-of-range values
/// throw ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Builds the initial field described by the config.
PeriodicField initial_field(const RunConfig& config);

/// Output directory after applying PLAB_OUTPUT_ROOT to relative paths.
std::filesystem::path resolve_output_dir(const std::string& dir);

// Snapshot files: 64-byte header then little-endian f64 samples, component-major.
//   0..5   magic "PLAB1\0"     6..7   u16 components
//   8..15  u64 nx              16..23 u64 ny (1 in 1D)
//   24..31 f64 L               32..39 f64 t
//   40..47 u64 dims            48..63 zero
struct Snapshot {
  PeriodicField field;
  double t = 0.0;
};

void write_snapshot(const std::filesystem::path& path, const PeriodicField& field, double t);
Snapshot read_snapshot(const std::filesystem::path& path);

/// Ledger CSV with the trajectory's columns, values printed with %.17g.
void write_ledger_csv(const std::filesystem::path& path, const Trajectory& traj);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<double> column(const std::string& name) const;
};
CsvTable read_csv(const std::filesystem::path& path);

int cmd_run(const std::string& config_path, std::ostream& out, std::ostream& err);

struct RatefitOptions {
  std::optional<std::string> column;
  std::string kind = "power";  ///< power or exp
  std::optional<std::pair<double, double>> window;
  std::optional<std::string> expect;  ///< "column=value,tol=v"
};
int cmd_ratefit(const std::string& csv_path, const RatefitOptions& options, std::ostream& out,
                std::ostream& err);

int cmd_verify(const std::string& suite, std::ostream& out, std::ostream& err);

struct CheckResult {
  std::string check;
  bool pass = false;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
};
std::vector<CheckResult> run_suite(const std::string& suite);

}  // namespace plab::cli
