#include "biot_mortar/bench.hpp"
#include "biot_mortar/config.hpp"
#include "biot_mortar/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace bm = biot_mortar;
using ordered_json = nlohmann::ordered_json;

namespace {

enum Exit { ok = 0, usage = 1, numerical = 2 };

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw bm::InputError("cannot write " + path);
  out << text;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text << std::flush;
  else write_file(path, text);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct ConvergenceArgs {
  std::string mortar = "linear";
  double c0 = 1.0;
  double dt = 1e-4;
  int steps = 100;
  int levels = 4;
  std::string msb = "on";
  double gmres_tol = 1e-6;
  std::string output;
};

int cmd_convergence(const ConvergenceArgs& a) {
  bm::ConvergenceOptions o;
  if (a.mortar == "linear") o.degree = 1;
  else if (a.mortar == "quadratic") o.degree = 2;
  else throw bm::InputError("--mortar must be linear or quadratic");
  if (a.levels < 1) throw bm::InputError("--levels must be at least 1");
  if (o.degree == 2 && a.levels > 3) throw bm::InputError("the quadratic schedule has at most 3 levels");
  if (!(a.dt > 0.0) || a.steps < 1 || !(a.c0 >= 0.0)) throw bm::InputError("need dt > 0, steps >= 1 and c0 >= 0");
  o.c0 = a.c0;
  o.dt = a.dt;
  o.steps = a.steps;
  o.levels = a.levels;
  o.use_msb = a.msb == "on";
  o.gmres_tol = a.gmres_tol;
  const bm::RateTable table = bm::run_convergence(o, [](const bm::ConvergenceRow& r) {
    std::fprintf(stderr, "h=%.6g gmres=%d e_sigma=%.3e e_u=%.3e e_p=%.3e\n", r.h, r.gmres, r.errors[0], r.errors[3],
                 r.errors[6]);
  });
  emit(a.output, table.to_csv());
  return ok;
}

struct BenchArgs {
  std::string fields;
  std::uint64_t seed = 42;
  std::string mortars = "all";
  std::string msb = "both";
  int steps = 100;
  double dt = 1e-3;
  double poisson = 0.2;
  double gmres_tol = 1e-6;
  std::string metrics = "bench_metrics.json";
  std::string vtk_dir;
};

ordered_json run_json(const bm::BenchRun& r) {
  ordered_json j;
  j["config"] = r.config;
  j["msb"] = r.msb;
  j["mortar_elements"] = r.mortar_elements;
  j["mortar_degree"] = r.mortar_degree;
  j["interface_dofs"] = r.interface_dofs;
  j["steps"] = r.steps;
  j["gmres"] = {{"per_step", r.gmres_per_step},
                {"total", r.gmres_total},
                {"max", r.gmres_max},
                {"average", r.gmres_average}};
  j["solves"] = {{"max", r.solves_max},
                 {"total", r.solves_total},
                 {"msb_build", r.msb_build_solves},
                 {"initialization", r.initialization_solves}};
  j["continuity_residual"] = r.continuity_residual;
  return j;
}

int cmd_bench(const BenchArgs& a) {
  std::string kpath, phipath;
  if (!a.fields.empty()) {
    const auto parts = split(a.fields, ',');
    if (parts.size() != 2) throw bm::InputError("--fields expects PERM,PORO");
    kpath = parts[0];
    phipath = parts[1];
  }
  std::vector<bm::MortarConfig> configs;
  if (a.mortars == "all") configs = bm::bench_mortar_configs();
  else
    for (const std::string& name : split(a.mortars, ',')) configs.push_back(bm::bench_mortar_config(name));
  if (configs.empty()) throw bm::InputError("--mortars selects no configuration");
  std::vector<bool> modes;
  if (a.msb == "on") modes = {true};
  else if (a.msb == "off") modes = {false};
  else modes = {true, false};

  bm::BenchOptions o;
  o.steps = a.steps;
  o.dt = a.dt;
  o.poisson_ratio = a.poisson;
  o.gmres_tol = a.gmres_tol;
  if (o.steps < 1 || !(o.dt > 0.0)) throw bm::InputError("need steps >= 1 and dt > 0");
  const bm::BenchFields fields = bm::load_fields(kpath, phipath, a.seed, o.c_crit);
  for (const std::string& w : fields.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

  ordered_json runs = ordered_json::array(), summary = ordered_json::array();
  for (const bm::MortarConfig& cfg : configs) {
    ordered_json row;
    row["config"] = cfg.name;
    for (bool msb : modes) {
      const bm::BenchRun r = bm::run_bench(fields, o, cfg, msb);
      std::fprintf(stderr, "%s msb=%s gmres avg %.2f max %d solves %ld\n", cfg.name.c_str(), msb ? "on" : "off",
                   r.gmres_average, r.gmres_max, r.solves_max);
      runs.push_back(run_json(r));
      row["gmres_average"] = r.gmres_average;
      row[msb ? "solves_msb" : "solves_no_msb"] = r.solves_max;
      if (!a.vtk_dir.empty())
        write_file((std::filesystem::path(a.vtk_dir) / (cfg.name + (msb ? "_msb" : "") + ".vtk")).string(),
                   bm::to_vtk(r.fields, "biot_mortar bench " + cfg.name));
    }
    summary.push_back(row);
  }

  ordered_json m;
  m["schema_version"] = bm::run_config_schema_version;
  m["fields"] = {{"synthetic", fields.synthetic},
                 {"permeability_checksum", bm::field_checksum(fields.permeability)},
                 {"porosity_checksum", bm::field_checksum(fields.porosity)},
                 {"warnings", fields.warnings}};
  m["options"] = {{"poisson_ratio", o.poisson_ratio}, {"c0", o.c0},   {"alpha", o.alpha},
                  {"dt", o.dt},                       {"steps", o.steps}, {"gmres_tol", o.gmres_tol}};
  m["summary"] = summary;
  m["runs"] = runs;
  emit(a.metrics, m.dump(2) + "\n");
  return ok;
}

struct RunArgs {
  std::string config;
  std::string metrics;
  std::string vtk;
};

int cmd_run(const RunArgs& a) {
  bm::RunConfig c = bm::load_run_config(a.config);
  if (!a.metrics.empty()) c.metrics_path = a.metrics;
  if (!a.vtk.empty()) c.vtk_path = a.vtk;
  const bm::RunResult r = bm::run_simulation(c);
  for (const std::string& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  emit(c.metrics_path, r.metrics_json);
  if (!c.vtk_path.empty()) write_file(c.vtk_path, r.vtk);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed finite element Biot solver with multiscale mortar domain decomposition"};
  app.require_subcommand(1);

  ConvergenceArgs ca;
  auto* conv = app.add_subcommand("convergence", "Manufactured-solution refinement study, CSV rate table");
  conv->add_option("--mortar", ca.mortar, "linear (H = 2h) or quadratic (H = sqrt h)")
      ->check(CLI::IsMember({"linear", "quadratic"}));
  conv->add_option("--c0", ca.c0, "Storativity");
  conv->add_option("--dt", ca.dt, "Time step");
  conv->add_option("--steps", ca.steps, "Number of time steps");
  conv->add_option("--levels", ca.levels, "Refinement levels");
  conv->add_option("--msb", ca.msb, "Use the multiscale basis")->check(CLI::IsMember({"on", "off"}));
  conv->add_option("--gmres-tol", ca.gmres_tol, "Relative GMRES tolerance");
  conv->add_option("-o,--output", ca.output, "CSV file (default stdout)");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Heterogeneous benchmark over mortar configurations");
  bench->add_option("--fields", ba.fields, "PERM,PORO text files (60x220 values each)");
  bench->add_option("--seed", ba.seed, "Seed of the synthetic fallback fields");
  bench->add_option("--mortars", ba.mortars, "all or a list of fine,1lin,1quad,2lin,2quad");
  bench->add_option("--msb", ba.msb, "on, off or both")->check(CLI::IsMember({"on", "off", "both"}));
  bench->add_option("--steps", ba.steps, "Number of time steps");
  bench->add_option("--dt", ba.dt, "Time step");
  bench->add_option("--poisson", ba.poisson, "Poisson ratio");
  bench->add_option("--gmres-tol", ba.gmres_tol, "Relative GMRES tolerance");
  bench->add_option("--metrics", ba.metrics, "Metrics JSON file ('-' for stdout)");
  bench->add_option("--vtk-dir", ba.vtk_dir, "Directory for VTK field dumps");

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Single simulation from a JSON config");
  run->add_option("config", ra.config, "Config file")->required();
  run->add_option("--metrics", ra.metrics, "Override the metrics path ('-' for stdout)");
  run->add_option("--vtk", ra.vtk, "Override the VTK path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  try {
    if (*conv) return cmd_convergence(ca);
    if (*bench) return cmd_bench(ba);
    return cmd_run(ra);
  } catch (const bm::InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return usage;
  } catch (const bm::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return numerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return numerical;
  }
}
