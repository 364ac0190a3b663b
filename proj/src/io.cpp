#include "hallmhd/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "hallmhd/errors.hpp"

namespace hallmhd {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size() && !s.empty();
}

bool parse_int(std::string_view s, int& out) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size() && !s.empty();
}

struct Key {
  std::string name;
  bool required;
  std::function<void(RunConfig&, std::string_view, int)> set;
  std::function<std::string(const RunConfig&)> get;
};

Key real_key(const std::string& name, double RunConfig::*m, bool required = false) {
  return {name, required,
          [name, m](RunConfig& c, std::string_view v, int line) {
            if (!parse_double(v, c.*m)) throw ConfigError("'" + name + "' expects a number, got '" + std::string(v) + "'", line);
          },
          [m](const RunConfig& c) { return fmt(c.*m); }};
}

Key int_key(const std::string& name, int RunConfig::*m, bool required = false) {
  return {name, required,
          [name, m](RunConfig& c, std::string_view v, int line) {
            if (!parse_int(v, c.*m)) throw ConfigError("'" + name + "' expects an integer, got '" + std::string(v) + "'", line);
          },
          [m](const RunConfig& c) { return std::to_string(c.*m); }};
}

template <class Get>
Key nested_real(const std::string& name, Get get) {
  return {name, false,
          [name, get](RunConfig& c, std::string_view v, int line) {
            if (!parse_double(v, get(c))) throw ConfigError("'" + name + "' expects a number, got '" + std::string(v) + "'", line);
          },
          [get](const RunConfig& c) { return fmt(get(const_cast<RunConfig&>(c))); }};
}

Key string_key(const std::string& name, std::string RunConfig::*m) {
  return {name, false, [m](RunConfig& c, std::string_view v, int) { c.*m = std::string(v); },
          [m](const RunConfig& c) { return c.*m; }};
}

template <class E>
Key enum_key(const std::string& name, E RunConfig::*m, std::vector<std::pair<std::string, E>> names) {
  return {name, false,
          [name, m, names](RunConfig& c, std::string_view v, int line) {
            std::string allowed;
            for (const auto& [s, e] : names) {
              if (v == s) {
                c.*m = e;
                return;
              }
              allowed += (allowed.empty() ? "" : "|") + s;
            }
            throw ConfigError("'" + name + "' must be one of " + allowed + ", got '" + std::string(v) + "'", line);
          },
          [m, names](const RunConfig& c) {
            for (const auto& [s, e] : names)
              if (c.*m == e) return s;
            return std::string{};
          }};
}

const std::vector<std::pair<std::string, bool TermToggles::*>> kToggles{
    {"advection", &TermToggles::advection},
    {"stretching", &TermToggles::stretching},
    {"hall", &TermToggles::hall},
    {"lorentz", &TermToggles::lorentz},
};

Key toggles_key() {
  return {"toggles", false,
          [](RunConfig& c, std::string_view v, int line) {
            TermToggles t{false, false, false, false};
            if (v == "all") {
              t = TermToggles{};
            } else if (v != "none") {
              std::size_t pos = 0;
              while (pos <= v.size()) {
                auto comma = v.find(',', pos);
                if (comma == std::string_view::npos) comma = v.size();
                const auto item = trim(v.substr(pos, comma - pos));
                bool found = false;
                for (const auto& [s, m] : kToggles)
                  if (item == s) {
                    t.*m = true;
                    found = true;
                  }
                if (!found)
                  throw ConfigError("unknown term '" + std::string(item) +
                                        "' in toggles (expected advection, stretching, hall, lorentz, all or none)",
                                    line);
                pos = comma + 1;
              }
            }
            c.step.toggles = t;
          },
          [](const RunConfig& c) {
            std::string out;
            for (const auto& [s, m] : kToggles)
              if (c.step.toggles.*m) out += (out.empty() ? "" : ",") + s;
            return out.empty() ? std::string("none") : out;
          }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> k = [] {
    std::vector<Key> v;
    v.push_back(int_key("nr", &RunConfig::nr, true));
    v.push_back(int_key("nz", &RunConfig::nz, true));
    v.push_back(real_key("R", &RunConfig::R, true));
    v.push_back(real_key("Lz", &RunConfig::Lz, true));
    v.push_back(real_key("T", &RunConfig::T, true));
    v.push_back(real_key("dt_out", &RunConfig::dt_out));
    v.push_back(enum_key<Formulation>("formulation", &RunConfig::formulation,
                                      {{"primal", Formulation::Primal}, {"scaled", Formulation::Scaled}}));
    for (const auto& [prefix, ring] : {std::pair{std::string("b_"), &RunConfig::b_ring},
                                       std::pair{std::string("w_"), &RunConfig::omega_ring}}) {
      v.push_back(nested_real(prefix + "amp", [ring](RunConfig& c) -> double& { return (c.*ring).amplitude; }));
      v.push_back(nested_real(prefix + "r0", [ring](RunConfig& c) -> double& { return (c.*ring).r0; }));
      v.push_back(nested_real(prefix + "z0", [ring](RunConfig& c) -> double& { return (c.*ring).z0; }));
      v.push_back(nested_real(prefix + "w", [ring](RunConfig& c) -> double& { return (c.*ring).width; }));
    }
    v.push_back(nested_real("cfl_advect", [](RunConfig& c) -> double& { return c.step.cfl_advect; }));
    v.push_back(nested_real("cfl_hall", [](RunConfig& c) -> double& { return c.step.cfl_hall; }));
    v.push_back(nested_real("dt_max", [](RunConfig& c) -> double& { return c.step.dt_max; }));
    v.push_back(nested_real("nu", [](RunConfig& c) -> double& { return c.step.nu; }));
    v.push_back(nested_real("eta", [](RunConfig& c) -> double& { return c.step.eta; }));
    Key adv{"advection", false,
            [](RunConfig& c, std::string_view s, int line) {
              if (s == "centered") c.step.advection = AdvectionScheme::Centered;
              else if (s == "upwind1") c.step.advection = AdvectionScheme::Upwind1;
              else throw ConfigError("'advection' must be one of centered|upwind1, got '" + std::string(s) + "'", line);
            },
            [](const RunConfig& c) { return std::string(to_string(c.step.advection)); }};
    v.push_back(adv);
    Key flux{"hall_flux", false,
             [](RunConfig& c, std::string_view s, int line) {
               if (s == "auto") c.step.hall_flux = HallFlux::Auto;
               else if (s == "central") c.step.hall_flux = HallFlux::Central;
               else if (s == "llf") c.step.hall_flux = HallFlux::LocalLaxFriedrichs;
               else throw ConfigError("'hall_flux' must be one of auto|central|llf, got '" + std::string(s) + "'", line);
             },
             [](const RunConfig& c) { return std::string(to_string(c.step.hall_flux)); }};
    v.push_back(flux);
    v.push_back(toggles_key());
    v.push_back(real_key("sigma", &RunConfig::sigma));
    v.push_back(string_key("diagnostics", &RunConfig::diagnostics));
    v.push_back(string_key("snapshot", &RunConfig::snapshot));
    v.push_back(int_key("snapshot_every", &RunConfig::snapshot_every));
    return v;
  }();
  return k;
}

void check(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void check_ring(const RunConfig& c, const RingParams& ring, const std::string& prefix) {
  check(std::isfinite(ring.amplitude), prefix + "amp must be finite");
  check(ring.width > 0.0, prefix + "w must be positive");
  check(ring.r0 >= 0.0, prefix + "r0 must be non-negative");
  check(ring.r0 + 3.0 * ring.width < c.R, prefix + "r0 + 3 " + prefix + "w must stay inside R");
  check(std::isfinite(ring.z0), prefix + "z0 must be finite");
}

}  // namespace

const char* to_string(Formulation f) { return f == Formulation::Primal ? "primal" : "scaled"; }
const char* to_string(AdvectionScheme a) { return a == AdvectionScheme::Centered ? "centered" : "upwind1"; }
const char* to_string(HallFlux h) {
  switch (h) {
    case HallFlux::Auto: return "auto";
    case HallFlux::Central: return "central";
    case HallFlux::LocalLaxFriedrichs: return "llf";
  }
  return "";
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& k : keys()) n.push_back(k.name);
    return n;
  }();
  return names;
}

void validate(const RunConfig& c) {
  check(c.nr >= kMinCells && c.nz >= kMinCells, "nr and nz must be at least " + std::to_string(kMinCells));
  check(c.R > 0.0 && std::isfinite(c.R), "R must be positive");
  check(c.Lz > 0.0 && std::isfinite(c.Lz), "Lz must be positive");
  check(c.T >= 0.0 && std::isfinite(c.T), "T must be non-negative");
  check(c.dt_out > 0.0 && std::isfinite(c.dt_out), "dt_out must be positive");
  check(c.sigma > 3.0 && std::isfinite(c.sigma), "sigma must lie in (3, inf)");
  check_ring(c, c.b_ring, "b_");
  check_ring(c, c.omega_ring, "w_");
  check(c.step.cfl_advect > 0.0 && c.step.cfl_hall > 0.0, "cfl numbers must be positive");
  check(c.step.dt_max > 0.0 && std::isfinite(c.step.dt_max), "dt_max must be positive");
  check(c.step.nu >= 0.0 && c.step.eta >= 0.0, "nu and eta must be non-negative");
  check(c.snapshot_every >= 0, "snapshot_every must be non-negative");
  check(c.snapshot_every == 0 || !c.snapshot.empty(), "snapshot_every needs a snapshot path");
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::map<std::string, int, std::less<>> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key=value, got '" + std::string(line) + "'", line_no);
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before '='", line_no);
    const Key* k = nullptr;
    for (const auto& cand : keys())
      if (cand.name == key) k = &cand;
    if (!k) throw ConfigError("unknown key '" + std::string(key) + "'", line_no);
    if (auto it = seen.find(key); it != seen.end())
      throw ConfigError("duplicate key '" + std::string(key) + "' (first set on line " + std::to_string(it->second) + ")",
                        line_no);
    if (value.empty() && k->name != "diagnostics" && k->name != "snapshot")
      throw ConfigError("missing value for '" + std::string(key) + "'", line_no);
    k->set(c, value, line_no);
    seen.emplace(std::string(key), line_no);
  }
  for (const auto& k : keys())
    if (k.required && !seen.contains(k.name)) throw ConfigError("missing required key '" + k.name + "'");
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::string out;
  for (const auto& k : keys()) out += k.name + "=" + k.get(c) + "\n";
  return out;
}

bool operator==(const RunConfig& a, const RunConfig& b) { return serialize_config(a) == serialize_config(b); }

// ---------------------------------------------------------------- diagnostics

std::string format_diagnostics(const std::vector<DiagRecord>& records, const std::string& config_echo) {
  const auto cols = diag_columns();
  std::string out;
  for (std::size_t c = 0; c < cols.size(); ++c) out += (c ? "," : "") + std::string(cols[c].name);
  out += "\n";
  for (const auto& r : records) {
    for (std::size_t c = 0; c < cols.size(); ++c) out += (c ? "," : "") + fmt(r.*(cols[c].member));
    out += "\n";
  }
  out += "# format hallmhd-diagnostics " + std::to_string(kDiagFormatVersion) + "\n";
  std::istringstream echo(config_echo);
  for (std::string line; std::getline(echo, line);) out += "# config " + line + "\n";
  return out;
}

void write_diagnostics(const std::vector<DiagRecord>& records, const std::string& path, const std::string& config_echo) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << format_diagnostics(records, config_echo);
  if (!out) throw FormatError("write failed for '" + path + "'");
}

std::vector<DiagRecord> parse_diagnostics(std::string_view text) {
  const auto cols = diag_columns();
  std::vector<DiagRecord> records;
  bool header = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> cells;
    std::size_t p = 0;
    while (true) {
      const auto comma = line.find(',', p);
      cells.push_back(trim(line.substr(p, comma == std::string_view::npos ? std::string_view::npos : comma - p)));
      if (comma == std::string_view::npos) break;
      p = comma + 1;
    }
    const std::string where = "diagnostics line " + std::to_string(line_no);
    if (cells.size() != cols.size())
      throw FormatError(where + ": expected " + std::to_string(cols.size()) + " columns, got " +
                        std::to_string(cells.size()));
    if (!header) {
      for (std::size_t c = 0; c < cols.size(); ++c)
        if (cells[c] != cols[c].name)
          throw FormatError(where + ": column " + std::to_string(c) + " is '" + std::string(cells[c]) + "', expected '" +
                            cols[c].name + "'");
      header = true;
      continue;
    }
    DiagRecord r;
    for (std::size_t c = 0; c < cols.size(); ++c)
      if (!parse_double(cells[c], r.*(cols[c].member)))
        throw FormatError(where + ": bad number '" + std::string(cells[c]) + "'");
    records.push_back(r);
  }
  if (!header) throw FormatError("diagnostics: missing header line");
  return records;
}

std::vector<DiagRecord> read_diagnostics(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_diagnostics(ss.str());
}

// ------------------------------------------------------------------ snapshots

namespace {

constexpr const char* kMagic = "HALLSNAP";

void put_field(std::ostream& out, const ScalarField& f) {
  std::vector<unsigned char> buf(f.values().size() * 8);
  std::size_t o = 0;
  for (double v : f.values()) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) buf[o++] = static_cast<unsigned char>(bits >> (8 * b));
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

void get_field(std::istream& in, ScalarField& f, const std::string& path) {
  std::vector<unsigned char> buf(f.values().size() * 8);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (in.gcount() != static_cast<std::streamsize>(buf.size())) throw FormatError(path + ": truncated field data");
  std::size_t o = 0;
  for (double& v : f.values()) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(buf[o++]) << (8 * b);
    v = std::bit_cast<double>(bits);
  }
}

Parity parse_parity(const std::string& s, const std::string& path) {
  if (s == "ODD") return Parity::Odd;
  if (s == "EVEN") return Parity::Even;
  throw FormatError(path + ": bad parity tag '" + s + "'");
}

}  // namespace

void write_snapshot(const State& s, const std::string& path, const std::string& config_echo) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path + "'");
  const GridSpec& g = s.grid();
  out << kMagic << ' ' << kSnapshotVersion << ' ' << g.nr << ' ' << g.nz << ' ' << fmt(g.R) << ' ' << fmt(g.Lz) << ' '
      << fmt(s.t) << ' ' << to_string(s.formulation) << ' ' << to_string(s.omega.parity()) << ' '
      << to_string(s.b.parity()) << ' ' << config_echo.size() << '\n';
  out << config_echo;
  put_field(out, s.omega);
  put_field(out, s.b);
  if (!out) throw FormatError("write failed for '" + path + "'");
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::string header;
  if (!std::getline(in, header)) throw FormatError(path + ": empty file");
  std::istringstream h(header);
  std::string magic, form, pw, pb, sR, sLz, st;
  int version = 0, nr = 0, nz = 0;
  std::size_t echo_bytes = 0;
  if (!(h >> magic) || magic != kMagic) throw FormatError(path + ": not a snapshot (bad magic)");
  if (!(h >> version >> nr >> nz >> sR >> sLz >> st >> form >> pw >> pb >> echo_bytes))
    throw FormatError(path + ": malformed snapshot header");
  if (version != kSnapshotVersion) throw FormatError(path + ": unsupported snapshot version " + std::to_string(version));
  double R = 0, Lz = 0, t = 0;
  if (!parse_double(sR, R) || !parse_double(sLz, Lz) || !parse_double(st, t))
    throw FormatError(path + ": malformed snapshot header");
  Formulation f;
  if (form == "primal") f = Formulation::Primal;
  else if (form == "scaled") f = Formulation::Scaled;
  else throw FormatError(path + ": bad formulation '" + form + "'");

  GridSpec g;
  try {
    g = build_grid(nr, nz, R, Lz);
  } catch (const DomainError& e) {
    throw FormatError(path + ": " + e.what());
  }
  Snapshot snap;
  snap.config_echo.resize(echo_bytes);
  in.read(snap.config_echo.data(), static_cast<std::streamsize>(echo_bytes));
  if (in.gcount() != static_cast<std::streamsize>(echo_bytes)) throw FormatError(path + ": truncated config echo");
  snap.state = State{t, f, ScalarField(g, parse_parity(pw, path)), ScalarField(g, parse_parity(pb, path))};
  get_field(in, snap.state.omega, path);
  get_field(in, snap.state.b, path);
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError(path + ": trailing bytes after field data");
  return snap;
}

}  // namespace hallmhd
