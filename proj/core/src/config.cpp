#include "vkdelay/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "vkdelay/series.hpp"
#include "vkdelay/snapshot.hpp"

namespace vkd {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct RawConfig {
  std::string path;
  std::map<std::string, std::map<std::string, Entry>> sections;
  std::vector<std::string> errors;

  void fail(int line, const std::string& msg) {
    errors.push_back(path + ":" + std::to_string(line) + ": " + msg);
  }

  Entry* find(const std::string& sec, const std::string& key) {
    auto s = sections.find(sec);
    if (s == sections.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.used = true;
    return &k->second;
  }

  double get_double(const std::string& sec, const std::string& key, double dflt) {
    Entry* e = find(sec, key);
    if (!e) return dflt;
    try {
      std::size_t pos = 0;
      const double v = std::stod(e->value, &pos);
      if (pos != e->value.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (...) {
      fail(e->line, "[" + sec + "]." + key + ": expected a number, got '" + e->value + "'");
      return dflt;
    }
  }

  long long get_int(const std::string& sec, const std::string& key, long long dflt) {
    Entry* e = find(sec, key);
    if (!e) return dflt;
    long long v = 0;
    auto [p, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
    if (ec != std::errc() || p != e->value.data() + e->value.size()) {
      fail(e->line, "[" + sec + "]." + key + ": expected an integer, got '" + e->value + "'");
      return dflt;
    }
    return v;
  }

  bool get_bool(const std::string& sec, const std::string& key, bool dflt) {
    Entry* e = find(sec, key);
    if (!e) return dflt;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    fail(e->line, "[" + sec + "]." + key + ": expected true or false, got '" + e->value + "'");
    return dflt;
  }

  std::string get_string(const std::string& sec, const std::string& key,
                         const std::string& dflt) {
    Entry* e = find(sec, key);
    return e ? e->value : dflt;
  }

  std::vector<double> get_doubles(const std::string& sec, const std::string& key,
                                  std::vector<double> dflt) {
    Entry* e = find(sec, key);
    if (!e) return dflt;
    std::vector<double> out;
    for (const std::string& part : split(e->value, ',')) {
      try {
        std::size_t pos = 0;
        out.push_back(std::stod(part, &pos));
        if (pos != part.size()) throw std::invalid_argument("trailing");
      } catch (...) {
        fail(e->line, "[" + sec + "]." + key + ": expected numbers, got '" + part + "'");
        return dflt;
      }
    }
    return out;
  }

  std::vector<int> get_ints(const std::string& sec, const std::string& key,
                            std::vector<int> dflt) {
    Entry* e = find(sec, key);
    if (!e) return dflt;
    std::vector<int> out;
    for (const std::string& part : split(e->value, ',')) {
      int v = 0;
      auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
      if (ec != std::errc() || p != part.data() + part.size()) {
        fail(e->line, "[" + sec + "]." + key + ": expected integers, got '" + part + "'");
        return dflt;
      }
      out.push_back(v);
    }
    return out;
  }

  int line_of(const std::string& sec, const std::string& key) {
    auto s = sections.find(sec);
    if (s == sections.end()) return 0;
    auto k = s->second.find(key);
    return k == s->second.end() ? 0 : k->second.line;
  }
};

const std::map<std::string, std::vector<std::string>> kKnownKeys = {
    {"grid", {"lx", "ly", "nx", "ny"}},
    {"physics",
     {"k", "u_flow", "use_reduced_damping", "nonlinear", "delay_force", "f0", "p0", "p0_omega"}},
    {"delay", {"n_theta", "dt", "t_star"}},
    {"run", {"horizon", "stride", "seed", "solver_tol", "snapshot_stride", "ic_u", "ic_ut"}},
    {"ensemble", {"members", "radii", "late_fraction"}},
    {"quasistab", {"pairs", "gap", "transient", "eta"}},
    {"dimension", {"embed_dims", "radii", "delay_lag", "theiler", "max_points", "transient"}},
};

void throw_if_errors(const RawConfig& raw) {
  if (raw.errors.empty()) return;
  std::string all;
  for (const std::string& e : raw.errors) all += (all.empty() ? "" : "\n") + e;
  throw ConfigError(all);
}

RawConfig read_raw(const std::string& path) {
  RawConfig raw;
  raw.path = path;
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string s = trim(line);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        raw.fail(lineno, "malformed section header '" + s + "'");
        continue;
      }
      section = trim(s.substr(1, s.size() - 2));
      if (!kKnownKeys.count(section)) {
        raw.fail(lineno, "unknown section [" + section + "]");
        section.clear();
      } else {
        raw.sections[section];  // note even an empty section
      }
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) {
      raw.fail(lineno, "expected key = value, got '" + s + "'");
      continue;
    }
    if (section.empty()) {
      raw.fail(lineno, "key outside of any section: '" + s + "'");
      continue;
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    const auto& known = kKnownKeys.at(section);
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      raw.fail(lineno, "unknown key '" + key + "' in section [" + section + "]");
      continue;
    }
    auto [it, inserted] = raw.sections[section].emplace(key, Entry{value, lineno, false});
    if (!inserted)
      raw.fail(lineno, "duplicate key '" + key + "' in section [" + section + "] (first at line " +
                           std::to_string(it->second.line) + ")");
  }
  return raw;
}

}  // namespace

FieldSpec FieldSpec::parse(const std::string& text) {
  FieldSpec spec;
  spec.text = text;
  const std::size_t colon = text.find(':');
  const std::string kind = trim(colon == std::string::npos ? text : text.substr(0, colon));
  const std::string args = colon == std::string::npos ? "" : trim(text.substr(colon + 1));
  auto need = [&](bool ok, const std::string& why) {
    if (!ok) throw ConfigError("field spec '" + text + "': " + why);
  };
  if (kind == "zero") {
    need(args.empty(), "'zero' takes no arguments");
    spec.kind = Kind::zero;
  } else if (kind == "constant") {
    need(!args.empty(), "expected constant:<value>");
    try {
      std::size_t pos = 0;
      spec.value = std::stod(args, &pos);
      need(pos == args.size(), "bad number '" + args + "'");
    } catch (const ConfigError&) {
      throw;
    } catch (...) {
      throw ConfigError("field spec '" + text + "': bad number '" + args + "'");
    }
    spec.kind = Kind::constant;
  } else if (kind == "bump") {
    const auto parts = split(args, ',');
    need(parts.size() == 4, "expected bump:<amp>,<cx>,<cy>,<w>");
    double vals[4];
    for (int i = 0; i < 4; ++i) {
      try {
        std::size_t pos = 0;
        vals[i] = std::stod(parts[i], &pos);
        need(pos == parts[i].size(), "bad number '" + parts[i] + "'");
      } catch (const ConfigError&) {
        throw;
      } catch (...) {
        throw ConfigError("field spec '" + text + "': bad number '" + parts[i] + "'");
      }
    }
    spec.amp = vals[0];
    spec.cx = vals[1];
    spec.cy = vals[2];
    spec.width = vals[3];
    need(spec.width > 0.0, "bump width must be positive");
    spec.kind = Kind::bump;
  } else if (kind == "file") {
    need(!args.empty(), "expected file:<path>");
    spec.path = args;
    spec.kind = Kind::file;
  } else {
    throw ConfigError("field spec '" + text + "': unknown kind '" + kind +
                      "' (want zero, constant, bump or file)");
  }
  return spec;
}

ScalarField realize(const FieldSpec& spec, const Grid& g, SnapshotSlot slot) {
  switch (spec.kind) {
    case FieldSpec::Kind::zero:
      return ScalarField(g);
    case FieldSpec::Kind::constant: {
      ScalarField f(g);
      for (std::size_t k = 0; k < f.size(); ++k) f[k] = spec.value;
      return f;
    }
    case FieldSpec::Kind::bump: {
      const double iw2 = 1.0 / (spec.width * spec.width);
      return sample(g, [&](double x, double y) {
        const double dx = x - spec.cx, dy = y - spec.cy;
        return spec.amp * std::exp(-(dx * dx + dy * dy) * iw2);
      });
    }
    case FieldSpec::Kind::file: {
      const PlateState st = read_snapshot(spec.path, g);
      return slot == SnapshotSlot::displacement ? st.u : st.ut;
    }
  }
  throw ConfigError("field spec: invalid kind");
}

RunConfig parse_config(const std::string& path) {
  RawConfig raw = read_raw(path);

  const double lx = raw.get_double("grid", "lx", 1.0);
  const double ly = raw.get_double("grid", "ly", 1.0);
  const long long nx = raw.get_int("grid", "nx", 32);
  const long long ny = raw.get_int("grid", "ny", 32);

  auto key_fail = [&raw](const std::string& sec, const std::string& key, const std::string& msg) {
    raw.fail(raw.line_of(sec, key), "[" + sec + "]." + key + ": " + msg);
  };

  if (!(lx > 0.0)) key_fail("grid", "lx", "must be positive");
  if (!(ly > 0.0)) key_fail("grid", "ly", "must be positive");
  if (nx < 5) key_fail("grid", "nx", "need at least 5 interior nodes");
  if (ny < 5) key_fail("grid", "ny", "need at least 5 interior nodes");
  double h = 0.0;
  if (raw.errors.empty()) {
    const double hx = lx / double(nx + 1), hy = ly / double(ny + 1);
    if (std::abs(hx - hy) > 1e-9 * hx) {
      key_fail("grid", "nx", "mesh must be square: lx/(nx+1) = " + fmt17(hx) +
                                 " differs from ly/(ny+1) = " + fmt17(hy));
    } else {
      h = hx;
    }
  }
  throw_if_errors(raw);

  Grid grid(lx, ly, int(nx), int(ny));
  RunConfig cfg(grid);

  // physics
  cfg.phys.k = raw.get_double("physics", "k", 0.0);
  cfg.phys.u_flow = raw.get_double("physics", "u_flow", 0.5);
  cfg.phys.use_reduced_damping = raw.get_bool("physics", "use_reduced_damping", true);
  cfg.phys.enable_nonlinearity = raw.get_bool("physics", "nonlinear", true);
  cfg.phys.enable_delay = raw.get_bool("physics", "delay_force", true);
  cfg.phys.p0_omega = raw.get_double("physics", "p0_omega", 0.0);
  if (cfg.phys.k < 0.0) key_fail("physics", "k", "damping must be >= 0");
  if (cfg.phys.u_flow < 0.0) key_fail("physics", "u_flow", "flow speed must be >= 0");
  if (cfg.phys.u_flow == 1.0)
    key_fail("physics", "u_flow", "flow speed 1 is the singular characteristic speed");

  const std::string f0_text = raw.get_string("physics", "f0", "zero");
  const std::string p0_text = raw.get_string("physics", "p0", "zero");
  try {
    cfg.f0_spec = FieldSpec::parse(f0_text);
  } catch (const ConfigError& e) {
    key_fail("physics", "f0", e.what());
  }
  try {
    cfg.p0_spec = FieldSpec::parse(p0_text);
  } catch (const ConfigError& e) {
    key_fail("physics", "p0", e.what());
  }

  // delay
  const long long n_theta = raw.get_int("delay", "n_theta", 32);
  if (n_theta < 8) key_fail("delay", "n_theta", "need n_theta >= 8");
  const double u = cfg.phys.u_flow;
  const double cfl = h / std::max(1.0, u);
  std::string dt_text = raw.get_string("delay", "dt", "auto");
  double dt = 0.0;
  if (dt_text == "auto") {
    dt = 0.5 * cfl;
  } else {
    try {
      std::size_t pos = 0;
      dt = std::stod(dt_text, &pos);
      if (pos != dt_text.size()) throw std::invalid_argument("trailing");
    } catch (...) {
      key_fail("delay", "dt", "expected a number or 'auto', got '" + dt_text + "'");
      dt = 0.5 * cfl;
    }
  }
  if (!(dt > 0.0)) key_fail("delay", "dt", "must be positive");
  if (dt > cfl * (1.0 + 1e-12))
    key_fail("delay", "dt",
             "dt = " + fmt17(dt) + " violates the transport bound h/max(1,U) = " + fmt17(cfl));

  const std::string ts_text = raw.get_string("delay", "t_star", "auto");
  double t_star = -1.0;
  if (ts_text != "auto") {
    try {
      std::size_t pos = 0;
      t_star = std::stod(ts_text, &pos);
      if (pos != ts_text.size()) throw std::invalid_argument("trailing");
    } catch (...) {
      key_fail("delay", "t_star", "expected a number or 'auto', got '" + ts_text + "'");
      t_star = -1.0;
    }
  }
  if (raw.errors.empty()) {
    try {
      if (t_star < 0.0) {
        cfg.delay = DelayConfig::certified(u, grid, int(n_theta), dt);
      } else {
        const double certified = compute_t_star(u, grid);
        if (t_star < certified * (1.0 - 1e-12))
          key_fail("delay", "t_star",
                   "t_star = " + fmt17(t_star) + " is below the certified memory length " +
                       fmt17(certified));
        else
          cfg.delay = DelayConfig(u, t_star, int(n_theta), dt);
      }
    } catch (const Error& e) {
      key_fail("delay", "t_star", e.what());
    }
  }

  // run
  cfg.run.horizon = raw.get_double("run", "horizon", 10.0);
  cfg.run.stride = int(raw.get_int("run", "stride", 8));
  cfg.run.seed = std::uint64_t(raw.get_int("run", "seed", 1));
  cfg.run.solver_tol = raw.get_double("run", "solver_tol", 1e-8);
  cfg.run.snapshot_stride = int(raw.get_int("run", "snapshot_stride", 0));
  if (!(cfg.run.horizon > 0.0)) key_fail("run", "horizon", "must be positive");
  if (cfg.run.stride < 1) key_fail("run", "stride", "must be >= 1");
  if (!(cfg.run.solver_tol > 0.0)) key_fail("run", "solver_tol", "must be positive");
  if (cfg.run.snapshot_stride < 0) key_fail("run", "snapshot_stride", "must be >= 0");
  try {
    cfg.run.ic_u = FieldSpec::parse(raw.get_string("run", "ic_u", "zero"));
  } catch (const ConfigError& e) {
    key_fail("run", "ic_u", e.what());
  }
  try {
    cfg.run.ic_ut = FieldSpec::parse(raw.get_string("run", "ic_ut", "zero"));
  } catch (const ConfigError& e) {
    key_fail("run", "ic_ut", e.what());
  }

  // ensemble
  cfg.ensemble.members = int(raw.get_int("ensemble", "members", 8));
  cfg.ensemble.radii = raw.get_doubles("ensemble", "radii", {1.0, 2.0, 4.0});
  cfg.ensemble.late_fraction = raw.get_double("ensemble", "late_fraction", 0.25);
  if (cfg.ensemble.members < 1) key_fail("ensemble", "members", "need at least one member");
  if (cfg.ensemble.radii.empty()) key_fail("ensemble", "radii", "need at least one radius");
  for (double r : cfg.ensemble.radii)
    if (!(r > 0.0)) {
      key_fail("ensemble", "radii", "radii must be positive");
      break;
    }
  if (!(cfg.ensemble.late_fraction > 0.0 && cfg.ensemble.late_fraction <= 1.0))
    key_fail("ensemble", "late_fraction", "must lie in (0, 1]");

  // quasistab
  cfg.quasistab.pairs = int(raw.get_int("quasistab", "pairs", 5));
  cfg.quasistab.gap = raw.get_double("quasistab", "gap", 1e-3);
  cfg.quasistab.transient = raw.get_double("quasistab", "transient", 5.0);
  cfg.quasistab.eta = raw.get_double("quasistab", "eta", 2.0);
  if (cfg.quasistab.pairs < 1) key_fail("quasistab", "pairs", "need at least one pair");
  if (!(cfg.quasistab.gap > 0.0)) key_fail("quasistab", "gap", "must be positive");
  if (cfg.quasistab.transient < 0.0) key_fail("quasistab", "transient", "must be >= 0");
  if (cfg.quasistab.eta != 1.0 && cfg.quasistab.eta != 2.0)
    key_fail("quasistab", "eta", "lower-order norm selector must be 1 or 2");

  // dimension
  cfg.dimension.embed_dims = raw.get_ints("dimension", "embed_dims", {2, 3, 4, 5});
  cfg.dimension.radii = raw.get_doubles("dimension", "radii", {});
  cfg.dimension.delay_lag = int(raw.get_int("dimension", "delay_lag", 0));
  cfg.dimension.theiler = int(raw.get_int("dimension", "theiler", 0));
  cfg.dimension.max_points = int(raw.get_int("dimension", "max_points", 6000));
  cfg.dimension.transient = raw.get_double("dimension", "transient", 5.0);
  if (cfg.dimension.embed_dims.empty())
    key_fail("dimension", "embed_dims", "need at least one embedding dimension");
  for (std::size_t k = 0; k < cfg.dimension.embed_dims.size(); ++k) {
    if (cfg.dimension.embed_dims[k] < 1 ||
        (k > 0 && cfg.dimension.embed_dims[k] <= cfg.dimension.embed_dims[k - 1])) {
      key_fail("dimension", "embed_dims", "must be a strictly increasing list of dims >= 1");
      break;
    }
  }
  if (cfg.dimension.max_points < 100) key_fail("dimension", "max_points", "need >= 100");
  if (cfg.dimension.delay_lag < 0) key_fail("dimension", "delay_lag", "must be >= 0");
  if (cfg.dimension.theiler < 0) key_fail("dimension", "theiler", "must be >= 0");
  if (cfg.dimension.transient < 0.0) key_fail("dimension", "transient", "must be >= 0");

  // Referenced files must exist up front.
  const std::tuple<std::string, std::string, const FieldSpec*> file_refs[] = {
      {"physics", "f0", &cfg.f0_spec},
      {"physics", "p0", &cfg.p0_spec},
      {"run", "ic_u", &cfg.run.ic_u},
      {"run", "ic_ut", &cfg.run.ic_ut},
  };
  for (const auto& [sec, key, spec] : file_refs) {
    if (spec->kind == FieldSpec::Kind::file && !std::filesystem::exists(spec->path))
      key_fail(sec, key, "referenced file does not exist: " + spec->path);
  }

  throw_if_errors(raw);

  // Realize physics fields once everything checks out.
  cfg.phys.f0 = realize(cfg.f0_spec, grid);
  cfg.phys.p0 = realize(cfg.p0_spec, grid);
  return cfg;
}

void print_config(const RunConfig& cfg, std::ostream& os) {
  os << "[grid]\n";
  os << "lx = " << fmt17(cfg.grid.lx()) << "\n";
  os << "ly = " << fmt17(cfg.grid.ly()) << "\n";
  os << "nx = " << cfg.grid.nx() << "\n";
  os << "ny = " << cfg.grid.ny() << "\n";
  os << "# h = " << fmt17(cfg.grid.h()) << "\n";
  os << "\n[physics]\n";
  os << "k = " << fmt17(cfg.phys.k) << "\n";
  os << "u_flow = " << fmt17(cfg.phys.u_flow) << "\n";
  os << "use_reduced_damping = " << (cfg.phys.use_reduced_damping ? "true" : "false") << "\n";
  os << "nonlinear = " << (cfg.phys.enable_nonlinearity ? "true" : "false") << "\n";
  os << "delay_force = " << (cfg.phys.enable_delay ? "true" : "false") << "\n";
  os << "f0 = " << cfg.f0_spec.text << "\n";
  os << "p0 = " << cfg.p0_spec.text << "\n";
  os << "p0_omega = " << fmt17(cfg.phys.p0_omega) << "\n";
  os << "# k_eff = " << fmt17(cfg.phys.k_eff()) << "\n";
  os << "\n[delay]\n";
  os << "n_theta = " << cfg.delay.n_theta << "\n";
  os << "dt = " << fmt17(cfg.delay.dt) << "\n";
  os << "t_star = " << fmt17(cfg.delay.t_star()) << "\n";
  os << "# n_lag = " << cfg.delay.n_lag << "\n";
  os << "# certified lower bound = " << fmt17(compute_t_star(cfg.phys.u_flow, cfg.grid)) << "\n";
  os << "\n[run]\n";
  os << "horizon = " << fmt17(cfg.run.horizon) << "\n";
  os << "stride = " << cfg.run.stride << "\n";
  os << "seed = " << cfg.run.seed << "\n";
  os << "solver_tol = " << fmt17(cfg.run.solver_tol) << "\n";
  os << "snapshot_stride = " << cfg.run.snapshot_stride << "\n";
  os << "ic_u = " << cfg.run.ic_u.text << "\n";
  os << "ic_ut = " << cfg.run.ic_ut.text << "\n";
  os << "\n[ensemble]\n";
  os << "members = " << cfg.ensemble.members << "\n";
  os << "radii = ";
  for (std::size_t k = 0; k < cfg.ensemble.radii.size(); ++k)
    os << (k ? "," : "") << fmt17(cfg.ensemble.radii[k]);
  os << "\n";
  os << "late_fraction = " << fmt17(cfg.ensemble.late_fraction) << "\n";
  os << "\n[quasistab]\n";
  os << "pairs = " << cfg.quasistab.pairs << "\n";
  os << "gap = " << fmt17(cfg.quasistab.gap) << "\n";
  os << "transient = " << fmt17(cfg.quasistab.transient) << "\n";
  os << "eta = " << fmt17(cfg.quasistab.eta) << "\n";
  os << "\n[dimension]\n";
  os << "embed_dims = ";
  for (std::size_t k = 0; k < cfg.dimension.embed_dims.size(); ++k)
    os << (k ? "," : "") << cfg.dimension.embed_dims[k];
  os << "\n";
  os << "radii = ";
  if (cfg.dimension.radii.empty()) {
    os << "auto";
  } else {
    for (std::size_t k = 0; k < cfg.dimension.radii.size(); ++k)
      os << (k ? "," : "") << fmt17(cfg.dimension.radii[k]);
  }
  os << "\n";
  os << "delay_lag = " << cfg.dimension.delay_lag << "\n";
  os << "theiler = " << cfg.dimension.theiler << "\n";
  os << "max_points = " << cfg.dimension.max_points << "\n";
  os << "transient = " << fmt17(cfg.dimension.transient) << "\n";
}

}  // namespace vkd
