#include "blowup/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "blowup/profile.hpp"

namespace blowup::config {

namespace {

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// field table shared by the parsers and canonical(); keeps the three in sync
struct Field {
  const char* key;
  enum { Real, Int, Str } kind;
  std::function<void(RunSpec&, double)> set_num;
  std::function<void(RunSpec&, const std::string&)> set_str;
  std::function<std::string(const RunSpec&)> get;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    auto real = [&](const char* k, double RunSpec::* p) {
      f.push_back({k, Field::Real, [p](RunSpec& s, double v) { s.*p = v; }, {},
                   [p](const RunSpec& s) { return fmt_double(s.*p); }});
    };
    real("q", &RunSpec::q);
    f.push_back({"n", Field::Int, [](RunSpec& s, double v) { s.n = int(v); }, {},
                 [](const RunSpec& s) { return std::to_string(s.n); }});
    real("dx_min", &RunSpec::dx_min);
    real("stretch", &RunSpec::stretch);
    real("extent", &RunSpec::extent);
    real("cfl", &RunSpec::cfl);
    real("u_stop", &RunSpec::u_stop);
    real("u_gate", &RunSpec::u_gate);
    real("t_max", &RunSpec::t_max);
    real("snapshot_ds", &RunSpec::snapshot_ds);
    f.push_back({"u0_family", Field::Str, {},
                 [](RunSpec& s, const std::string& v) { s.u0_family = v; },
                 [](const RunSpec& s) { return s.u0_family; }});
    real("amplitude", &RunSpec::amplitude);
    real("width", &RunSpec::width);
    real("t_offset", &RunSpec::t_offset);
    real("resolved_cells", &RunSpec::resolved_cells);
    real("plateau_tol", &RunSpec::plateau_tol);
    real("drift_tol", &RunSpec::drift_tol);
    real("r2_min", &RunSpec::r2_min);
    real("span_factor", &RunSpec::span_factor);
    return f;
  }();
  return table;
}

const Field& field_named(const std::string& key) {
  for (const auto& f : fields())
    if (key == f.key) return f;
  throw std::invalid_argument("config: unknown key '" + key + "'");
}

}  // namespace

simulator::SimConfig RunSpec::sim_config() const {
  simulator::SimConfig cfg;
  cfg.params = spectrum::Parameters::make(q, n);
  cfg.dx_min = dx_min;
  cfg.stretch = stretch;
  cfg.extent = extent;
  cfg.cfl = cfl;
  cfg.u_stop = u_stop;
  cfg.u_gate = u_gate;
  cfg.t_max = t_max;
  cfg.snapshot_ds = snapshot_ds;
  if (u0_family == "gaussian") {
    const double a = amplitude, w2 = width * width;
    cfg.u0 = [a, w2](double r, double z) { return a * std::exp(-(r * r + z * z) / w2); };
  } else if (u0_family == "exact_1d") {
    if (n != 1) throw std::invalid_argument("config: exact_1d initial data needs n = 1");
    profile::StationaryProfile f(cfg.params);
    const double T0 = t_offset, mm = cfg.params.m;
    cfg.u0 = [f, T0, mm](double, double z) {
      return std::pow(T0, -mm) * f(z / std::sqrt(T0));
    };
  } else {
    throw std::invalid_argument("config: unknown u0_family '" + u0_family + "'");
  }
  return cfg;
}

analyzer::ClassifyOptions RunSpec::classify_options() const {
  analyzer::ClassifyOptions opt;
  opt.plateau_tol = plateau_tol;
  opt.drift_tol = drift_tol;
  opt.r2_min = r2_min;
  opt.span_factor = span_factor;
  return opt;
}

std::string RunSpec::canonical() const {
  std::string out;
  for (const auto& f : fields()) {
    out += f.key;
    out += '=';
    out += f.get(*this);
    out += '\n';
  }
  return out;
}

std::string RunSpec::hash() const {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunSpec parse_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: bad JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: JSON root must be an object");
  RunSpec spec;
  // accepts a flat object or one level of grouping sections
  std::function<void(const nlohmann::json&)> absorb = [&](const nlohmann::json& obj) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (it.value().is_object()) {
        absorb(it.value());
        continue;
      }
      const Field& f = field_named(it.key());
      if (f.kind == Field::Str) {
        if (!it.value().is_string())
          throw std::invalid_argument("config: '" + it.key() + "' must be a string");
        f.set_str(spec, it.value().get<std::string>());
      } else {
        if (!it.value().is_number())
          throw std::invalid_argument("config: '" + it.key() + "' must be a number");
        f.set_num(spec, it.value().get<double>());
      }
    }
  };
  absorb(j);
  return spec;
}

RunSpec parse_toml(const std::string& text) {
  RunSpec spec;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const char* ws = " \t\r";
    s.erase(0, s.find_first_not_of(ws));
    if (auto p = s.find_last_not_of(ws); p != std::string::npos) s.erase(p + 1);
    else s.clear();
    return s;
  };
  while (std::getline(in, line)) {
    ++lineno;
    // strip comments outside of quotes
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.erase(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config: malformed section at line " + std::to_string(lineno));
      continue;  // sections are organizational only; keys are globally unique
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (val.empty())
      throw std::invalid_argument("config: missing value at line " + std::to_string(lineno));
    const Field& f = field_named(key);
    if (f.kind == Field::Str) {
      if (val.size() < 2 || val.front() != '"' || val.back() != '"')
        throw std::invalid_argument("config: '" + key + "' must be a quoted string");
      f.set_str(spec, val.substr(1, val.size() - 2));
    } else {
      size_t used = 0;
      double v;
      try {
        v = std::stod(val, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number for '" + key + "'");
      }
      if (used != val.size())
        throw std::invalid_argument("config: trailing junk after value of '" + key + "'");
      f.set_num(spec, v);
    }
  }
  return spec;
}

RunSpec load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return json ? parse_json(buf.str()) : parse_toml(buf.str());
}

}  // namespace blowup::config
