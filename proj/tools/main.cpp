#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "blowup/analyzer.hpp"
#include "blowup/config.hpp"
#include "blowup/kernels.hpp"
#include "blowup/profile.hpp"
#include "blowup/run_io.hpp"
#include "blowup/spectrum.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace blowup;

namespace {

constexpr int kOk = 0, kInvalid = 1, kNoConverge = 2;

// --out paths are taken relative to $BLOWUP_OUT when set
fs::path resolve_out(const std::string& out) {
  fs::path p(out);
  if (p.is_absolute()) return p;
  if (const char* root = std::getenv("BLOWUP_OUT")) return fs::path(root) / p;
  return p;
}

void dump_json(const fs::path& path, const json& j) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

json report_of(const kernels::BoundReport& b) {
  return {{"id", b.id},
          {"max_ratio", b.max_ratio},
          {"fitted_constant", b.fitted_constant},
          {"pass", b.pass},
          {"n_samples", b.n_samples}};
}

int cmd_eigen(double q, int n, int kmax) {
  const auto p = spectrum::Parameters::make(q, n);
  std::printf("q = %g  n = %d  m = %.12g  B = %.12g  K0 = %.12g\n", q, n, p.m, p.B, p.K0);
  std::printf("%4s %18s\n", "k", "kappa_k");
  const auto pairs = spectrum::solve_kappa(p, kmax);
  for (const auto& e : pairs) std::printf("%4d %18.12f\n", e.k, e.kappa);
  std::printf("closed form kappa_1 = -(m+1) = %.12f\n", -(p.m + 1.0));
  std::printf("%12s %10s\n", "lambda", "indices");
  for (const auto& ev : spectrum::enumerate_lambda(p, 2, 2)) {
    std::printf("%12.6f  (", ev.lambda);
    for (size_t i = 0; i < ev.alpha.size(); ++i) std::printf("%s%d", i ? "," : "", ev.alpha[i]);
    std::printf(")\n");
  }
  return kOk;
}

int cmd_profile(double q, const std::string& csv, double xi_max) {
  const auto p = spectrum::Parameters::make(q, 1);
  profile::StationaryProfile f(p);
  const auto far = profile::cB_fit(f);
  json out{{"q", q},        {"m", p.m},
           {"B", p.B},      {"c_B", far.prefactor},
           {"exponent", far.exponent}};
  std::cout << out.dump(2) << '\n';
  if (!csv.empty()) {
    std::vector<std::vector<double>> rows;
    const int npts = 400;
    for (int k = 0; k <= npts; ++k) {
      const double xi = xi_max * k / npts;
      rows.push_back({xi, f(xi)});
    }
    io::write_csv(resolve_out(csv).string(), "none", "xi,phi0", rows);
  }
  return kOk;
}

int cmd_kernels(double q, const std::string& out_dir) {
  const auto p = spectrum::Parameters::make(q, 1);
  const double K = p.K0;
  json bounds = json::array();
  for (const auto& b : {kernels::check_uniform_bound(K), kernels::check_comparison_bound(K),
                        kernels::check_gaussian_domination(K), kernels::check_weighted_smoothing(K)})
    bounds.push_back(report_of(b));

  const fs::path dir = resolve_out(out_dir);
  fs::create_directories(dir);
  dump_json(dir / "bounds.json", {{"q", q}, {"K", K}, {"bounds", bounds}});

  kernels::HalfLineKernel kern(K);
  const auto slice = kern.slice(2.0, {0.25, 0.5, 1.0, 2.0});
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < slice.z.size(); ++i) {
    std::vector<double> row{slice.z[i]};
    for (size_t j = 0; j < slice.s.size(); ++j) row.push_back(slice.theta[j][i]);
    rows.push_back(std::move(row));
  }
  io::write_csv((dir / "kernel_slice.csv").string(), "none",
                "z,s_0.25,s_0.5,s_1,s_2", rows);
  bool all = true;
  for (const auto& b : bounds) all = all && b.at("pass").get<bool>();
  std::printf("kernel bounds: %s (mass drift %.3g)\n", all ? "pass" : "FAIL", slice.mass_drift);
  return all ? kOk : kNoConverge;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  config::RunSpec spec;
  try {
    spec = config::load(config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kInvalid;
  }
  simulator::SimConfig cfg;
  try {
    cfg = spec.sim_config();
    cfg.validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return kInvalid;
  }
  simulator::Simulator sim(cfg);
  const auto res = sim.run_to_blowup();
  io::save_run(resolve_out(out_dir).string(), res, sim.mesh_r(), sim.mesh_z(), spec);
  std::printf("verdict: %s  T = %.8g  r2 = %.6f  snapshots = %zu\n", res.estimate.verdict.c_str(),
              res.estimate.T, res.estimate.r2, res.snapshots.size());
  if (res.estimate.blew_up && res.estimate.r2 < 0.99) {
    std::fprintf(stderr, "blow-up time fit did not converge (r2 = %.4f)\n", res.estimate.r2);
    return kNoConverge;
  }
  return kOk;
}

int cmd_analyze(const std::string& run_dir, const std::string& out_dir) {
  io::LoadedRun run;
  try {
    run = io::load_run(resolve_out(run_dir).string());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kInvalid;
  }
  const auto& spec = run.spec;
  const auto p = spectrum::Parameters::make(spec.q, spec.n);
  const fs::path dir = resolve_out(out_dir.empty() ? run_dir : out_dir);
  fs::create_directories(dir);

  json verdict{{"config_hash", run.hash}, {"q", spec.q}, {"n", spec.n}};

  verdict["estimate"] = {{"verdict", run.result.estimate.verdict},
                         {"T", run.result.estimate.T},
                         {"r2", run.result.estimate.r2}};
  // one-dimensional runs have no tangential neutral mode; only the blow-up
  // time fit is reported
  if (!run.result.estimate.blew_up || spec.n < 2) {
    dump_json(dir / "verdict.json", verdict);
    std::printf("verdict: %s\n", run.result.estimate.verdict.c_str());
    return kOk;
  }

  const double T = run.result.estimate.T;
  profile::StationaryProfile phi0(p);
  const auto mode = spectrum::neutral_mode(p);
  const auto rule = quad::half_space_rule(spec.n);
  const double nu = spectrum::nu_q(p);

  const auto tr = analyzer::build_trace(run.result, run.mesh_r, run.mesh_z, p, phi0, mode, rule,
                                        spec.resolved_cells);
  if (tr.s.empty()) {
    verdict["dichotomy"] = {{"case", "inconclusive"}, {"notes", "no resolved snapshots"}};
    dump_json(dir / "verdict.json", verdict);
    return kOk;
  }
  {
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < tr.s.size(); ++i)
      rows.push_back({tr.s[i], tr.a0[i], tr.s[i] * tr.a0[i], tr.vnorm[i]});
    io::write_csv((dir / "trace.csv").string(), run.hash, "s,a0,s_a0,norm_v_rho", rows);
  }

  // a trace too short to classify is an inconclusive verdict, not a failure
  analyzer::Verdict v;
  try {
    v = analyzer::classify(tr, nu, spec.classify_options());
  } catch (const std::exception& e) {
    v.kind = analyzer::Case::Inconclusive;
    v.notes = e.what();
  }
  const char* kind = v.kind == analyzer::Case::I    ? "I"
                     : v.kind == analyzer::Case::II ? "II"
                                                    : "inconclusive";
  verdict["dichotomy"] = {{"case", kind},       {"plateau", v.plateau}, {"plateau_raw", v.plateau_raw},
                          {"drift", v.drift},   {"gamma", v.gamma},     {"r2", v.r2},
                          {"nu_q", nu},         {"notes", v.notes}};

  const double s_hi = tr.s.back(), s_lo = s_hi / 2;
  json bands = json::array();
  double theta_found = 0.0;
  for (const auto& b : analyzer::scan_boundary_band(run.result.trace, run.mesh_r, p, T, s_lo, s_hi)) {
    bands.push_back({{"theta", b.theta},
                     {"k1", b.k1},
                     {"k2", b.k2},
                     {"found", b.found},
                     {"degenerate", b.degenerate}});
    if (b.found && theta_found == 0.0) theta_found = b.theta;
  }
  verdict["boundary_band"] = bands;

  // wall trace of the secondary rescaling stays inside one fixed band
  if (theta_found > 0.0) {
    double c_lo = 1e300, c_hi = 0.0;
    bool ok = true;
    for (double s : {0.55 * s_hi, 0.7 * s_hi, 0.85 * s_hi}) {
      try {
        for (const auto& [t, val] : simulator::rescale_vs(run.result.trace, run.mesh_r, p, T,
                                                          theta_found, s, 0.2, 60)) {
          if (t > 0.95) continue;  // endpoint enters the unresolved last cells
          c_lo = std::min(c_lo, val);
          c_hi = std::max(c_hi, val);
        }
      } catch (const std::exception&) {
        ok = false;
      }
    }
    verdict["wall_trace_band"] = {{"theta", theta_found}, {"c_lo", c_lo},
                                  {"c_hi", c_hi},          {"bounded", ok && c_lo > 0.0}};
  }

  const auto& last = run.result.snapshots.back();
  if (spec.n >= 2) {
    try {
      // fit window clears both the grid scale and the self-similar core width
      const double r_lo =
          std::max(8 * spec.dx_min, 4 * std::sqrt(run.result.estimate.T - last.t));
      const auto bf = analyzer::fit_boundary_singularity(last, run.mesh_r, run.mesh_z, spec.q,
                                                         r_lo, 0.5);
      verdict["boundary_singularity"] = {{"slope", bf.slope},   {"r2", bf.r2},
                                         {"r2_pure", bf.r2_pure}, {"c1", bf.c1},
                                         {"c2", bf.c2}};
      std::vector<std::vector<double>> rows;  // gnuplot-ready: log model vs log u
      const quad::GridFunction g(run.mesh_r.centers, run.mesh_z.centers, last.u);
      const double z0 = run.mesh_z.centers.front();
      for (int k = 0; k < 64; ++k) {
        const double r = bf.window_lo * std::pow(bf.window_hi / bf.window_lo, k / 63.0);
        rows.push_back({std::log(std::log(1.0 / r) / (r * r)), std::log(g(r, z0))});
      }
      io::write_csv((dir / "boundary_fit.csv").string(), run.hash, "log_model,log_u", rows);
    } catch (const std::exception& e) {
      verdict["boundary_singularity"] = {{"error", e.what()}};
    }
    try {
      const auto f0 = analyzer::fit_interior_profile(last, run.mesh_r, run.mesh_z, spec.q, 0.0,
                                                     16 * spec.dx_min, 0.5);
      const auto f4 = analyzer::fit_interior_profile(last, run.mesh_r, run.mesh_z, spec.q,
                                                     M_PI / 4, 16 * spec.dx_min, 0.5);
      verdict["interior_profile"] = {
          {"slope_axis", f0.slope},       {"slope_diag", f4.slope},
          {"prefactor_axis", f0.prefactor}, {"prefactor_diag", f4.prefactor},
          {"prefactor_ratio", f4.prefactor / f0.prefactor}};
    } catch (const std::exception& e) {
      verdict["interior_profile"] = {{"error", e.what()}};
    }
  }

  dump_json(dir / "verdict.json", verdict);
  std::printf("case %s  plateau %.4f (raw %.4f)  nu_q %.4f  drift %.3f\n", kind, v.plateau,
              v.plateau_raw, nu, v.drift);
  return kOk;
}

int cmd_report(const std::vector<std::string>& run_dirs, const std::string& kernels_dir,
               const std::string& out_dir) {
  json claims;
  auto set_claim = [&](const std::string& name, const std::string& status, json detail) {
    detail["status"] = status;
    claims[name] = std::move(detail);
  };

  double q0 = 0.0;
  int n0 = 0;
  json runs = json::array();
  for (const auto& d : run_dirs) {
    const fs::path vp = resolve_out(d) / "verdict.json";
    std::ifstream in(vp);
    if (!in) {
      std::fprintf(stderr, "missing %s (run `analyze` first)\n", vp.string().c_str());
      return kInvalid;
    }
    json v;
    in >> v;
    const double q = v.at("q").get<double>();
    const int n = v.at("n").get<int>();
    if (q0 == 0.0) q0 = q, n0 = n;
    else if (q != q0 || n != n0) {
      std::fprintf(stderr, "runs use inconsistent parameters (q, n)\n");
      return kInvalid;
    }
    runs.push_back(v);
  }
  if (runs.empty()) {
    std::fprintf(stderr, "no runs given\n");
    return kInvalid;
  }

  // dichotomy and neutral-coefficient plateau, from the first blow-up run
  bool have_dich = false;
  for (const auto& v : runs) {
    if (!v.contains("dichotomy")) continue;
    have_dich = true;
    const auto& d = v["dichotomy"];
    const std::string kind = d.at("case").get<std::string>();
    const double nu = d.at("nu_q").get<double>();
    const double pl = d.at("plateau").get<double>();
    const bool plateau_ok = std::abs(std::abs(pl) - nu) <= 0.25 * nu;
    set_claim("dichotomy_case",
              kind == "inconclusive" ? "inconclusive" : "pass",
              {{"case", kind}});
    set_claim("neutral_coefficient_plateau",
              kind == "I" ? (plateau_ok ? "pass" : "fail") : "inconclusive",
              {{"plateau", pl}, {"nu_q", nu}});
    if (v.contains("boundary_band")) {
      bool found = false;
      for (const auto& b : v["boundary_band"]) found = found || b.at("found").get<bool>();
      set_claim("boundary_plateau_band", found ? "pass" : "fail", {{"scan", v["boundary_band"]}});
    }
    if (v.contains("wall_trace_band")) {
      const auto& w = v["wall_trace_band"];
      set_claim("wall_trace_band", w.at("bounded").get<bool>() ? "pass" : "fail", w);
    }
    if (v.contains("boundary_singularity") && !v["boundary_singularity"].contains("error")) {
      const auto& b = v["boundary_singularity"];
      const double target = 1.0 / (2.0 * (q0 - 1.0));
      const bool ok = std::abs(b.at("slope").get<double>() - target) <= 0.05 &&
                      b.at("r2").get<double>() > b.at("r2_pure").get<double>();
      set_claim("boundary_singularity_rate", ok ? "pass" : "fail", b);
    }
    if (v.contains("interior_profile") && !v["interior_profile"].contains("error")) {
      const auto& f = v["interior_profile"];
      const double target = -1.0 / (q0 - 1.0);
      const double ratio_target = std::pow(std::cos(M_PI / 4), target);
      const bool ok =
          std::abs(f.at("slope_axis").get<double>() - target) <= 0.1 * std::abs(target) &&
          std::abs(f.at("prefactor_ratio").get<double>() - ratio_target) <= 0.25 * ratio_target;
      set_claim("interior_decay_profile", ok ? "pass" : "fail", f);
    }
    break;
  }
  if (!have_dich) set_claim("dichotomy_case", "inconclusive", {{"reason", "no blow-up run"}});

  if (!kernels_dir.empty()) {
    std::ifstream in(resolve_out(kernels_dir) / "bounds.json");
    if (!in) {
      std::fprintf(stderr, "missing bounds.json under %s\n", kernels_dir.c_str());
      return kInvalid;
    }
    json b;
    in >> b;
    bool all = true;
    for (const auto& r : b.at("bounds")) all = all && r.at("pass").get<bool>();
    set_claim("kernel_bounds", all ? "pass" : "fail", {{"bounds", b["bounds"]}});
  } else {
    set_claim("kernel_bounds", "not run", json::object());
  }

  const fs::path dir = resolve_out(out_dir);
  fs::create_directories(dir);
  dump_json(dir / "report.json", {{"q", q0}, {"n", n0}, {"runs", runs}, {"claims", claims}});

  std::ofstream txt(dir / "report.txt");
  txt << "verification summary (q = " << q0 << ", n = " << n0 << ")\n";
  for (auto it = claims.begin(); it != claims.end(); ++it) {
    txt << "  " << it.key() << ": " << it.value().at("status").get<std::string>() << '\n';
    std::printf("%-28s %s\n", it.key().c_str(), it.value().at("status").get<std::string>().c_str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for boundary-driven blow-up"};
  app.require_subcommand(1);

  double q = 2.0;
  int n = 2, kmax = 4;
  double xi_max = 10.0;
  std::string csv, config_path, run_dir, out_dir = ".", kernels_dir;
  std::vector<std::string> run_dirs;

  auto* eig = app.add_subcommand("eigen", "eigenvalue table of the linearized boundary problem");
  eig->add_option("--q", q)->check(CLI::Range(1.0001, 100.0));
  eig->add_option("--n", n)->check(CLI::Range(1, 3));
  eig->add_option("--kmax", kmax);

  auto* prof = app.add_subcommand("profile", "stationary self-similar profile and far field");
  prof->add_option("--q", q)->check(CLI::Range(1.0001, 100.0));
  prof->add_option("--csv", csv, "also write (xi, phi0) samples");
  prof->add_option("--xi-max", xi_max);

  auto* ker = app.add_subcommand("kernels", "boundary heat kernel bounds and slices");
  ker->add_option("--q", q)->check(CLI::Range(1.0001, 100.0));
  ker->add_option("--out", out_dir);

  auto* sim = app.add_subcommand("simulate", "integrate to blow-up and store the run");
  sim->add_option("--config", config_path)->required();
  sim->add_option("--out", out_dir)->required();

  auto* ana = app.add_subcommand("analyze", "rescale, project, classify a stored run");
  ana->add_option("--run", run_dir)->required();
  ana->add_option("--out", out_dir, "output directory (defaults to the run directory)");

  auto* rep = app.add_subcommand("report", "aggregate verdicts into one summary");
  rep->add_option("--runs", run_dirs)->required();
  rep->add_option("--kernels", kernels_dir, "kernels output directory");
  rep->add_option("--out", out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kOk : kInvalid;
  }

  try {
    if (eig->parsed()) return cmd_eigen(q, n, kmax);
    if (prof->parsed()) return cmd_profile(q, csv, xi_max);
    if (ker->parsed()) return cmd_kernels(q, out_dir);
    if (sim->parsed()) return cmd_simulate(config_path, out_dir);
    if (ana->parsed()) return cmd_analyze(run_dir, ana->count("--out") ? out_dir : "");
    if (rep->parsed()) return cmd_report(run_dirs, kernels_dir, out_dir);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kNoConverge;
  }
  return kInvalid;
}
