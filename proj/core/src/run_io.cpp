#include "blowup/run_io.hpp"

#include <bit>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace blowup::io {

static_assert(std::endian::native == std::endian::little,
              "snapshot files are written as raw little-endian float64");

namespace {

constexpr const char* kToolVersion = "1.0.0";

void write_f64(const std::string& path, const std::vector<double>& v) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("io: cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(v.data()), std::streamsize(v.size() * sizeof(double)));
  if (!out) throw std::runtime_error("io: short write to '" + path + "'");
}

std::vector<double> read_f64(const std::string& path, size_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("io: cannot open '" + path + "'");
  std::vector<double> v(count);
  in.read(reinterpret_cast<char*>(v.data()), std::streamsize(count * sizeof(double)));
  if (size_t(in.gcount()) != count * sizeof(double))
    throw std::runtime_error("io: '" + path + "' is shorter than its sidecar claims");
  return v;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("io: cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("io: cannot open '" + path + "'");
  nlohmann::json j;
  in >> j;
  return j;
}

std::string snap_name(size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%04zu", k);
  return buf;
}

}  // namespace

void write_csv(const std::string& path, const std::string& hash, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("io: cannot write '" + path + "'");
  out << "# config_hash=" << hash << '\n' << header << '\n';
  char buf[32];
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
}

void save_run(const std::string& dir, const simulator::RunResult& res,
              const simulator::Mesh1D& mr, const simulator::Mesh1D& mz,
              const config::RunSpec& spec) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const std::string hash = spec.hash();
  const fs::path root(dir);
  const size_t nr = mr.centers.size();
  const size_t nz = mz.centers.size();

  nlohmann::json echo;  // canonical key=value pairs, echoed as strings
  {
    std::istringstream in(spec.canonical());
    std::string line;
    while (std::getline(in, line)) {
      const auto eq = line.find('=');
      echo[line.substr(0, eq)] = line.substr(eq + 1);
    }
  }
  write_json((root / "manifest.json").string(), {{"tool_version", kToolVersion},
                                                 {"config_hash", hash},
                                                 {"subcommand", "simulate"},
                                                 {"config", echo}});

  write_json((root / "grid.json").string(),
             {{"config_hash", hash},
              {"nr", nr},
              {"nz", nz},
              {"dx_min", spec.dx_min},
              {"stretch", spec.stretch},
              {"extent", spec.extent},
              {"one_dimensional", spec.n < 2}});

  std::vector<std::vector<double>> index;
  for (size_t k = 0; k < res.snapshots.size(); ++k) {
    const auto& s = res.snapshots[k];
    if (s.u.size() != nr * nz) throw std::runtime_error("io: snapshot size does not match grid");
    write_f64((root / (snap_name(k) + ".f64")).string(), s.u);
    write_json((root / (snap_name(k) + ".json")).string(),
               {{"config_hash", hash}, {"t", s.t}, {"umax", s.umax}, {"nr", nr}, {"nz", nz}});
    index.push_back({double(k), s.t, s.umax});
  }
  write_csv((root / "index.csv").string(), hash, "idx,t,umax", index);

  std::vector<double> flat;
  std::vector<std::vector<double>> tindex;
  flat.reserve(res.trace.t.size() * nr);
  for (size_t k = 0; k < res.trace.t.size(); ++k) {
    if (res.trace.wall[k].size() != nr) throw std::runtime_error("io: wall row size mismatch");
    flat.insert(flat.end(), res.trace.wall[k].begin(), res.trace.wall[k].end());
    tindex.push_back({double(k), res.trace.t[k], res.trace.umax[k]});
  }
  write_f64((root / "trace.f64").string(), flat);
  write_csv((root / "trace_index.csv").string(), hash, "idx,t,umax", tindex);

  const auto& e = res.estimate;
  write_json((root / "estimate.json").string(),
             {{"config_hash", hash},
              {"blew_up", e.blew_up},
              {"T", e.T},
              {"r2", e.r2},
              {"window_lo", e.window_lo},
              {"window_hi", e.window_hi},
              {"verdict", e.verdict}});
}

LoadedRun load_run(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  if (!fs::exists(root / "manifest.json"))
    throw std::invalid_argument("io: '" + dir + "' is not a run directory (no manifest.json)");

  LoadedRun run;
  const auto manifest = read_json((root / "manifest.json").string());
  run.hash = manifest.at("config_hash").get<std::string>();
  {
    // the manifest echoes canonical() as strings; rebuild the RunSpec from it
    std::string toml;
    for (auto it = manifest.at("config").begin(); it != manifest.at("config").end(); ++it) {
      const std::string v = it.value().get<std::string>();
      const bool numeric = !v.empty() && (std::isdigit(v[0]) || v[0] == '-' || v[0] == '+' || v[0] == '.');
      toml += it.key() + " = " + (numeric ? v : '"' + v + '"') + "\n";
    }
    run.spec = config::parse_toml(toml);
  }
  if (run.spec.hash() != run.hash)
    throw std::runtime_error("io: manifest config does not reproduce its recorded hash");

  const auto grid = read_json((root / "grid.json").string());
  const size_t nr = grid.at("nr").get<size_t>();
  const size_t nz = grid.at("nz").get<size_t>();
  run.mesh_z = simulator::Mesh1D::geometric(run.spec.dx_min, run.spec.stretch, run.spec.extent);
  if (grid.at("one_dimensional").get<bool>()) {
    run.mesh_r.centers = {0.0};  // the simulator's single-cell sentinel
    run.mesh_r.faces = {0.0, 1.0};
    run.mesh_r.widths = {1.0};
  } else {
    run.mesh_r = run.mesh_z;
  }
  if (run.mesh_z.centers.size() != nz || run.mesh_r.centers.size() != nr)
    throw std::runtime_error("io: regenerated mesh does not match recorded grid.json");

  for (size_t k = 0;; ++k) {
    const fs::path side = root / (snap_name(k) + ".json");
    if (!fs::exists(side)) break;
    const auto meta = read_json(side.string());
    simulator::Snapshot s;
    s.t = meta.at("t").get<double>();
    s.umax = meta.at("umax").get<double>();
    s.u = read_f64((root / (snap_name(k) + ".f64")).string(), nr * nz);
    run.result.snapshots.push_back(std::move(s));
  }

  if (fs::exists(root / "trace_index.csv")) {
    std::ifstream in((root / "trace_index.csv").string());
    std::string line;
    size_t nt = 0;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 'i') continue;
      double idx, t, umax;
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &idx, &t, &umax) != 3)
        throw std::runtime_error("io: malformed trace_index.csv row");
      run.result.trace.t.push_back(t);
      run.result.trace.umax.push_back(umax);
      ++nt;
    }
    const auto flat = read_f64((root / "trace.f64").string(), nt * nr);
    run.result.trace.wall.resize(nt);
    for (size_t k = 0; k < nt; ++k)
      run.result.trace.wall[k].assign(flat.begin() + long(k * nr), flat.begin() + long((k + 1) * nr));
  }

  const auto est = read_json((root / "estimate.json").string());
  auto& e = run.result.estimate;
  e.blew_up = est.at("blew_up").get<bool>();
  e.T = est.at("T").get<double>();
  e.r2 = est.at("r2").get<double>();
  e.window_lo = est.at("window_lo").get<double>();
  e.window_hi = est.at("window_hi").get<double>();
  e.verdict = est.at("verdict").get<std::string>();
  return run;
}

}  // namespace blowup::io
