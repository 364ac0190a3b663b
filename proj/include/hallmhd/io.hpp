#pragma once

// Run configuration (key=value text), diagnostics CSV and binary snapshots.

#include <string>
#include <string_view>
#include <vector>

#include "hallmhd/dynamics.hpp"
#include "hallmhd/monitors.hpp"

namespace hallmhd {

struct RunConfig {
  int nr = 0;
  int nz = 0;
  double R = 0.0;
  double Lz = 0.0;
  RingParams b_ring{4.0, 1.5, 2.0, 0.8};
  RingParams omega_ring{20.0, 1.5, 2.0, 0.8};
  StepParams step{};
  double T = 0.0;
  double dt_out = 0.01;
  double sigma = 4.0;
  Formulation formulation = Formulation::Primal;
  std::string diagnostics;  // CSV path, empty for none
  std::string snapshot;     // final snapshot path, empty for none
  int snapshot_every = 0;   // also write <snapshot>.<k> at every k-th record

  GridSpec grid() const { return build_grid(nr, nz, R, Lz); }
};

/// Keys that may appear in a config file, in canonical order.
const std::vector<std::string>& config_keys();

/// Parses key=value lines; '#' starts a comment. nr, nz, R, Lz and T are
/// required, everything else has a default. Throws ConfigError carrying the
/// offending line number (0 for whole-file problems such as a missing key).
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Throws ConfigError if any invariant fails.
void validate(const RunConfig& cfg);

/// Canonical key=value echo, one key per line, doubles at 17 digits.
/// parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

bool operator==(const RunConfig& a, const RunConfig& b);

const char* to_string(Formulation f);
const char* to_string(AdvectionScheme a);
const char* to_string(HallFlux h);

inline constexpr int kDiagFormatVersion = 1;
inline constexpr int kSnapshotVersion = 1;

/// Header of column names, one row per record at 17 significant digits,
/// then "# format" and "# config" comment lines.
void write_diagnostics(const std::vector<DiagRecord>& records, const std::string& path,
                       const std::string& config_echo = {});
std::string format_diagnostics(const std::vector<DiagRecord>& records, const std::string& config_echo = {});
/// Exact inverse of write_diagnostics. Throws FormatError.
std::vector<DiagRecord> read_diagnostics(const std::string& path);
std::vector<DiagRecord> parse_diagnostics(std::string_view text);

/// One text line
///   HALLSNAP <version> <nr> <nz> <R> <Lz> <t> <formulation> <parity omega> <parity b> <config bytes>
/// then the config echo, then omega and b as row-major little-endian doubles.
void write_snapshot(const State& s, const std::string& path, const std::string& config_echo = {});

struct Snapshot {
  State state;
  std::string config_echo;
};
/// Bit-exact inverse of write_snapshot. Throws FormatError.
Snapshot read_snapshot(const std::string& path);

}  // namespace hallmhd
