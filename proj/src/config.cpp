#include "fnls/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "fnls/error.hpp"

namespace fnls {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) throw Error(ErrorKind::ConfigError, key + ": expected a number, got '" + v + "'");
  return out;
}

long long parse_integer(const std::string& key, const std::string& v) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw Error(ErrorKind::ConfigError, key + ": expected an integer, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw Error(ErrorKind::ConfigError, key + ": expected true or false, got '" + v + "'");
}

std::string parse_string(const std::string& key, const std::string& v) {
  if (v.size() < 2 || v.front() != '"' || v.back() != '"')
    throw Error(ErrorKind::ConfigError, key + ": expected a quoted string, got '" + v + "'");
  return v.substr(1, v.size() - 2);
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw Error(ErrorKind::ConfigError, key + ": expected [a, b, ...], got '" + v + "'");
  std::vector<double> out;
  std::stringstream ss(v.substr(1, v.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_number(key, item));
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [&](const std::string& k, double ExperimentConfig::*m) {
      t[k] = [m](ExperimentConfig& c, const std::string& key, const std::string& v) { c.*m = parse_number(key, v); };
    };
    auto integer = [&](const std::string& k, int ExperimentConfig::*m) {
      t[k] = [m](ExperimentConfig& c, const std::string& key, const std::string& v) {
        c.*m = static_cast<int>(parse_integer(key, v));
      };
    };
    auto boolean = [&](const std::string& k, bool ExperimentConfig::*m) {
      t[k] = [m](ExperimentConfig& c, const std::string& key, const std::string& v) { c.*m = parse_bool(key, v); };
    };
    auto str = [&](const std::string& k, std::string ExperimentConfig::*m) {
      t[k] = [m](ExperimentConfig& c, const std::string& key, const std::string& v) { c.*m = parse_string(key, v); };
    };
    auto list = [&](const std::string& k, std::vector<double> ExperimentConfig::*m) {
      t[k] = [m](ExperimentConfig& c, const std::string& key, const std::string& v) { c.*m = parse_list(key, v); };
    };
    t["seed"] = [](ExperimentConfig& c, const std::string& key, const std::string& v) {
      const long long s = parse_integer(key, v);
      if (s < 0) throw Error(ErrorKind::ConfigError, "seed must be nonnegative");
      c.seed = static_cast<std::uint64_t>(s);
    };
    integer("threads", &ExperimentConfig::threads);
    integer("model.dim", &ExperimentConfig::dim);
    num("model.s", &ExperimentConfig::s);
    str("model.kind", &ExperimentConfig::kind);
    num("model.exponent", &ExperimentConfig::exponent);
    num("model.mass", &ExperimentConfig::mass);
    num("grid.half_extent", &ExperimentConfig::half_extent);
    integer("grid.points_per_dim", &ExperimentConfig::points_per_dim);
    num("solver.gradient_tol", &ExperimentConfig::gradient_tol);
    num("solver.q_tol", &ExperimentConfig::q_tol);
    integer("solver.max_iterations", &ExperimentConfig::max_iterations);
    boolean("solver.warm_start", &ExperimentConfig::warm_start);
    str("solver.grid_policy", &ExperimentConfig::grid_policy);
    num("solver.init_width", &ExperimentConfig::init_width);
    num("dynamics.dt", &ExperimentConfig::dt);
    num("dynamics.horizon", &ExperimentConfig::horizon);
    num("dynamics.energy_tol", &ExperimentConfig::energy_tol);
    num("dynamics.blowup_factor", &ExperimentConfig::blowup_factor);
    num("dynamics.dt_min", &ExperimentConfig::dt_min);
    integer("dynamics.sample_every", &ExperimentConfig::sample_every);
    num("dynamics.virial_R", &ExperimentConfig::virial_R);
    num("dynamics.virial_epsilon", &ExperimentConfig::virial_epsilon);
    boolean("dynamics.boundary_guard", &ExperimentConfig::boundary_guard);
    num("dynamics.guard_threshold", &ExperimentConfig::guard_threshold);
    num("dynamics.lambda", &ExperimentConfig::lambda);
    str("dynamics.ground_state", &ExperimentConfig::ground_state);
    list("sweep.c_list", &ExperimentConfig::c_list);
    list("sweep.lambda_list", &ExperimentConfig::lambda_list);
    integer("gn.samples", &ExperimentConfig::gn_samples);
    num("gn.omega", &ExperimentConfig::gn_omega);
    str("output.directory", &ExperimentConfig::directory);
    integer("output.snapshot_every", &ExperimentConfig::snapshot_every);
    return t;
  }();
  return table;
}

void validate(const ExperimentConfig& c) {
  if (c.kind != "power" && c.kind != "hartree")
    throw Error(ErrorKind::ConfigError, "model.kind must be \"power\" or \"hartree\"");
  if (c.grid_policy != "fixed" && c.grid_policy != "scaled")
    throw Error(ErrorKind::ConfigError, "solver.grid_policy must be \"fixed\" or \"scaled\"");
  const std::string problem = validate_params(
      ModelParams{c.dim, c.s, c.kind == "power" ? Nonlinearity(Power{c.exponent}) : Nonlinearity(Hartree{c.exponent}),
                  c.mass},
      ParamsMode::Variational);
  if (!problem.empty()) throw Error(ErrorKind::ConfigError, problem);
  if (!(c.half_extent > 0.0)) throw Error(ErrorKind::ConfigError, "grid.half_extent > 0 violated");
  if (c.points_per_dim < 8 || c.points_per_dim % 2)
    throw Error(ErrorKind::ConfigError, "grid.points_per_dim must be even and >= 8");
  if (!(c.gradient_tol > 0.0) || !(c.q_tol > 0.0)) throw Error(ErrorKind::ConfigError, "solver tolerances must be > 0");
  if (c.max_iterations < 0) throw Error(ErrorKind::ConfigError, "solver.max_iterations >= 0 violated");
  if (!(c.init_width > 0.0)) throw Error(ErrorKind::ConfigError, "solver.init_width > 0 violated");
  if (!(c.dt > 0.0) || !(c.horizon > 0.0)) throw Error(ErrorKind::ConfigError, "dynamics.dt and horizon must be > 0");
  if (!(c.energy_tol > 0.0)) throw Error(ErrorKind::ConfigError, "dynamics.energy_tol > 0 violated");
  if (!(c.blowup_factor > 1.0)) throw Error(ErrorKind::ConfigError, "dynamics.blowup_factor > 1 violated");
  if (!(c.dt_min > 0.0)) throw Error(ErrorKind::ConfigError, "dynamics.dt_min > 0 violated");
  if (c.sample_every < 1) throw Error(ErrorKind::ConfigError, "dynamics.sample_every >= 1 violated");
  if (c.virial_R < 0.0) throw Error(ErrorKind::ConfigError, "dynamics.virial_R >= 0 violated");
  if (!(c.lambda > 0.0)) throw Error(ErrorKind::ConfigError, "dynamics.lambda > 0 violated");
  if (c.threads < 1) throw Error(ErrorKind::ConfigError, "threads >= 1 violated");
  if (c.gn_samples < 1 || !(c.gn_omega > 0.0)) throw Error(ErrorKind::ConfigError, "gn.samples >= 1 and gn.omega > 0 required");
  for (double v : c.c_list)
    if (!(v > 0.0)) throw Error(ErrorKind::ConfigError, "sweep.c_list entries must be > 0");
  for (double v : c.lambda_list)
    if (!(v > 0.0)) throw Error(ErrorKind::ConfigError, "sweep.lambda_list entries must be > 0");
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    // strip comments outside quotes
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": bad section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;
    const auto it = setters().find(full);
    if (it == setters().end()) throw Error(ErrorKind::ConfigError, "unknown key '" + full + "'");
    it->second(cfg, full, value);
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::ConfigError, "cannot read config " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str());
}

std::string canonical_text(const ExperimentConfig& c) {
  std::ostringstream os;
  auto list = [](const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt_double(v[i]);
    return s + "]";
  };
  auto b = [](bool v) { return v ? "true" : "false"; };
  os << "seed = " << c.seed << "\n"
     << "threads = " << c.threads << "\n"
     << "[model]\n"
     << "dim = " << c.dim << "\ns = " << fmt_double(c.s) << "\nkind = \"" << c.kind << "\"\nexponent = "
     << fmt_double(c.exponent) << "\nmass = " << fmt_double(c.mass) << "\n"
     << "[grid]\n"
     << "half_extent = " << fmt_double(c.half_extent) << "\npoints_per_dim = " << c.points_per_dim << "\n"
     << "[solver]\n"
     << "gradient_tol = " << fmt_double(c.gradient_tol) << "\nq_tol = " << fmt_double(c.q_tol)
     << "\nmax_iterations = " << c.max_iterations << "\nwarm_start = " << b(c.warm_start) << "\ngrid_policy = \""
     << c.grid_policy << "\"\ninit_width = " << fmt_double(c.init_width) << "\n"
     << "[dynamics]\n"
     << "dt = " << fmt_double(c.dt) << "\nhorizon = " << fmt_double(c.horizon) << "\nenergy_tol = "
     << fmt_double(c.energy_tol) << "\nblowup_factor = " << fmt_double(c.blowup_factor)
     << "\ndt_min = " << fmt_double(c.dt_min) << "\nsample_every = " << c.sample_every
     << "\nvirial_R = " << fmt_double(c.virial_R) << "\nvirial_epsilon = " << fmt_double(c.virial_epsilon)
     << "\nboundary_guard = " << b(c.boundary_guard) << "\nguard_threshold = " << fmt_double(c.guard_threshold)
     << "\nlambda = " << fmt_double(c.lambda) << "\nground_state = \"" << c.ground_state << "\"\n"
     << "[sweep]\n"
     << "c_list = " << list(c.c_list) << "\nlambda_list = " << list(c.lambda_list) << "\n"
     << "[gn]\n"
     << "samples = " << c.gn_samples << "\nomega = " << fmt_double(c.gn_omega) << "\n"
     << "[output]\n"
     << "directory = \"" << c.directory << "\"\nsnapshot_every = " << c.snapshot_every << "\n";
  return os.str();
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["model"] = {{"dim", c.dim}, {"s", c.s}, {"kind", c.kind}, {"exponent", c.exponent}, {"mass", c.mass}};
  j["grid"] = {{"half_extent", c.half_extent}, {"points_per_dim", c.points_per_dim}};
  j["solver"] = {{"gradient_tol", c.gradient_tol}, {"q_tol", c.q_tol},         {"max_iterations", c.max_iterations},
                 {"warm_start", c.warm_start},     {"grid_policy", c.grid_policy}, {"init_width", c.init_width}};
  j["dynamics"] = {{"dt", c.dt},
                   {"horizon", c.horizon},
                   {"energy_tol", c.energy_tol},
                   {"blowup_factor", c.blowup_factor},
                   {"dt_min", c.dt_min},
                   {"sample_every", c.sample_every},
                   {"virial_R", c.virial_R},
                   {"virial_epsilon", c.virial_epsilon},
                   {"boundary_guard", c.boundary_guard},
                   {"guard_threshold", c.guard_threshold},
                   {"lambda", c.lambda},
                   {"ground_state", c.ground_state}};
  j["sweep"] = {{"c_list", c.c_list}, {"lambda_list", c.lambda_list}};
  j["gn"] = {{"samples", c.gn_samples}, {"omega", c.gn_omega}};
  j["output"] = {{"directory", c.directory}, {"snapshot_every", c.snapshot_every}};
  return j;
}

std::string content_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ModelParams model_params(const ExperimentConfig& c, ParamsMode mode) {
  const Nonlinearity kind = c.kind == "power" ? Nonlinearity(Power{c.exponent}) : Nonlinearity(Hartree{c.exponent});
  return make_params(c.dim, c.s, kind, c.mass, mode);
}

GridPtr make_config_grid(const ExperimentConfig& c) { return make_grid(c.dim, c.half_extent, c.points_per_dim); }

}  // namespace fnls
