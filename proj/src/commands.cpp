#include "delaysir/commands.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <mutex>
#include <thread>

#include "delaysir/bounds.hpp"
#include "delaysir/io.hpp"
#include "delaysir/sharpness.hpp"

namespace delaysir {

namespace fs = std::filesystem;
using nlohmann::json;
using io::format_number;

namespace {

// Runs fn(0..n-1) on a small worker pool.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct Job {
  std::size_t case_index{0};
  SchemeSpec scheme;
  ModelParams params;
};

std::vector<Job> make_jobs(const RunConfig& cfg) {
  std::vector<Job> jobs;
  const auto cases = cfg.effective_cases();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    for (const auto& s : cfg.schemes) jobs.push_back({i, s, cfg.model_for(cases[i])});
  }
  return jobs;
}

std::string run_id(std::size_t index, const Job& job) {
  return "run" + std::to_string(index) + "_" + job.scheme.id + "_delta" +
         format_number(job.params.kernel.delta) + "_sigma" + format_number(job.params.sigma) + "_b" +
         format_number(job.params.b);
}

json params_json(const ModelParams& p) {
  return {{"a", p.kernel.a}, {"delta", p.kernel.delta}, {"sigma", p.sigma}, {"b", p.b}, {"c", p.c}};
}

json bounds_json(const BoundReport& r) {
  return {{"M", r.M},           {"T_bar", r.T_bar},       {"C", r.C},
          {"tau_theory", r.tau_theory}, {"m_tilde", r.m_tilde}, {"tau_actual", r.tau_actual}};
}

json violation_json(const std::optional<Violation>& v) {
  if (!v) return nullptr;
  return {{"step", v->step},
          {"k", v->k},
          {"l", v->l},
          {"property", property_name(v->property)},
          {"magnitude", v->magnitude}};
}

json verdict_json(const PropertyVerdict& v) {
  return {{"D1", v.d1},
          {"D2", v.d2},
          {"D3", v.d3},
          {"D4", v.d4},
          {"max_drift", v.max_drift},
          {"first_violation", violation_json(v.first_violation)}};
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory '" + dir.string() + "'");
  }
}

struct RunResult {
  BoundReport bounds;
  Trajectory traj;
};

void write_manifest(const fs::path& out, json manifest) {
  io::write_text(out / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  cfg.validate();
  ensure_dir(out);
  const GridSpec grid = cfg.grid();
  const std::vector<Job> jobs = make_jobs(cfg);
  std::vector<RunResult> results(jobs.size());

  parallel_for(jobs.size(), [&](std::size_t i) {
    const Job& job = jobs[i];
    const Scheme scheme = job.scheme.build();
    const DiscCubature cub = build_disc_cubature(job.params.kernel.delta, cfg.cubature_order);
    results[i].bounds = compute_bounds(job.params, grid, cub, cfg.history, scheme.ssp());
    const std::size_t m = cfg.m ? *cfg.m : results[i].bounds.m_tilde;
    SimulationOptions opts;
    opts.snapshot_every = cfg.snapshot_every;
    opts.coupling = cfg.coupling;
    results[i].traj = simulate(job.params, grid, cub, cfg.history, scheme, m, cfg.final_time, opts);
  });

  // Heatmap scales per compartment for the sweep-wide mode.
  std::array<io::GrayScale, 3> sweep_scale{};
  if (cfg.heatmap_scale == HeatmapScaleMode::sweep) {
    std::array<double, 3> lo{INFINITY, INFINITY, INFINITY}, hi{-INFINITY, -INFINITY, -INFINITY};
    for (const auto& r : results) {
      for (const auto& snap : r.traj.snapshots) {
        const Field* f[3] = {&snap.S, &snap.I, &snap.R};
        for (int c = 0; c < 3; ++c) {
          lo[c] = std::min(lo[c], f[c]->min());
          hi[c] = std::max(hi[c], f[c]->max());
        }
      }
    }
    for (int c = 0; c < 3; ++c) {
      Field probe(1, 2);
      probe[0] = lo[c];
      probe[1] = hi[c];
      sweep_scale[c] = io::min_max_scale(probe);
    }
  }

  json manifest;
  manifest["command"] = "simulate";
  manifest["config"] = to_json(cfg);
  manifest["runs"] = json::array();
  json all_files = json::array();
  bool violations = false;

  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Job& job = jobs[i];
    const RunResult& r = results[i];
    const std::string id = run_id(i, job);
    const fs::path dir = out / id;
    ensure_dir(dir);
    json run;
    run["id"] = id;
    run["scheme"] = job.scheme.id;
    run["case"] = job.case_index;
    run["params"] = params_json(job.params);
    run["coupling"] = cfg.coupling == DelayCoupling::frozen ? "frozen" : "stage_aligned";
    run["m"] = r.traj.m;
    run["m_source"] = cfg.m ? "config" : "auto";
    run["tau"] = r.traj.tau;
    run["tau_within_bound"] = r.traj.tau <= r.bounds.tau_theory;
    run["bounds"] = bounds_json(r.bounds);
    run["requested_final_time"] = r.traj.requested_final_time;
    run["final_time"] = r.traj.final_time;
    run["rounded_down"] = r.traj.rounded_down;
    run["stopped_early"] = r.traj.stopped_early;
    run["steps"] = r.traj.steps;
    run["verdict"] = verdict_json(r.traj.verdict);
    violations = violations || !r.traj.verdict.all_pass();

    json files = json::array();
    auto add_file = [&](const fs::path& p) {
      const std::string rel = fs::relative(p, out).generic_string();
      files.push_back(rel);
      all_files.push_back(rel);
    };
    json snaps = json::array();
    for (const auto& snap : r.traj.snapshots) {
      const long n = std::lround(snap.t / r.traj.tau);
      char stem[32];
      std::snprintf(stem, sizeof stem, "n%06ld", n);
      json snap_files = json::object();
      const std::pair<const char*, const Field*> comps[3] = {
          {"S", &snap.S}, {"I", &snap.I}, {"R", &snap.R}};
      for (int c = 0; c < 3; ++c) {
        const auto& [name, field] = comps[c];
        const fs::path csv = dir / (std::string(name) + "_" + stem + ".csv");
        const fs::path pgm = dir / (std::string(name) + "_" + stem + ".pgm");
        io::write_field_csv(csv, *field);
        io::GrayScale scale;
        switch (cfg.heatmap_scale) {
          case HeatmapScaleMode::per_file: scale = io::min_max_scale(*field); break;
          case HeatmapScaleMode::sweep: scale = sweep_scale[c]; break;
          case HeatmapScaleMode::fixed: scale = {cfg.heatmap_min, cfg.heatmap_max}; break;
        }
        io::write_pgm(pgm, *field, scale);
        add_file(csv);
        add_file(pgm);
        add_file(pgm.string() + ".txt");
        snap_files[std::string(name) + "_csv"] = fs::relative(csv, out).generic_string();
        snap_files[std::string(name) + "_pgm"] = fs::relative(pgm, out).generic_string();
      }
      snaps.push_back({{"t", snap.t},
                       {"n", n},
                       {"mass_I", field_mass(snap.I, grid)},
                       {"mass_total", total_mass(snap, grid)},
                       {"files", snap_files}});
    }
    run["snapshots"] = snaps;

    std::string props = io::csv_line({"step", "t", "D1", "D2", "D3", "D4", "max_drift", "violation",
                                      "k", "l", "magnitude"});
    for (const auto& rec : r.traj.step_log) {
      const auto& v = rec.verdict;
      const auto& fv = v.first_violation;
      props += io::csv_line({std::to_string(rec.step), format_number(rec.t), v.d1 ? "1" : "0",
                             v.d2 ? "1" : "0", v.d3 ? "1" : "0", v.d4 ? "1" : "0",
                             format_number(v.max_drift), fv ? property_name(fv->property) : "",
                             fv ? std::to_string(fv->k) : "", fv ? std::to_string(fv->l) : "",
                             fv ? format_number(fv->magnitude) : ""});
    }
    io::write_text(dir / "properties.csv", props);
    add_file(dir / "properties.csv");
    run["files"] = files;
    manifest["runs"].push_back(run);

    log << id << ": m=" << r.traj.m << " tau=" << format_number(r.traj.tau)
        << " bound=" << format_number(r.bounds.tau_theory) << " steps=" << r.traj.steps
        << (r.traj.verdict.all_pass() ? " D1-D4 pass" : " D1-D4 VIOLATED") << "\n";
  }
  all_files.push_back("manifest.json");
  manifest["files"] = all_files;
  const int code = violations ? kExitViolations : kExitOk;
  manifest["exit_code"] = code;
  write_manifest(out, manifest);
  return code;
}

int cmd_bounds(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  cfg.validate();
  ensure_dir(out);
  const GridSpec grid = cfg.grid();
  const std::vector<Job> jobs = make_jobs(cfg);
  std::string csv = io::csv_line({"scheme", "delta", "sigma", "b", "c", "theor_b", "time_step", "M",
                                  "T_bar", "C", "m_tilde"});
  json manifest;
  manifest["command"] = "bounds";
  manifest["config"] = to_json(cfg);
  manifest["rows"] = json::array();
  for (const Job& job : jobs) {
    const Scheme scheme = job.scheme.build();
    const DiscCubature cub = build_disc_cubature(job.params.kernel.delta, cfg.cubature_order);
    const BoundReport r = compute_bounds(job.params, grid, cub, cfg.history, scheme.ssp());
    csv += io::csv_line({job.scheme.id, format_number(r.delta), format_number(r.sigma),
                         format_number(r.b), format_number(r.c), format_number(r.tau_theory),
                         format_number(r.tau_actual), format_number(r.M), format_number(r.T_bar),
                         format_number(r.C), std::to_string(r.m_tilde)});
    json row = bounds_json(r);
    row["scheme"] = job.scheme.id;
    row["params"] = params_json(job.params);
    manifest["rows"].push_back(row);
    char line[160];
    std::snprintf(line, sizeof line, "%-8s delta=%-6g sigma=%-5g b=%-6g theor.b=%.4f time step=%.4f\n",
                  job.scheme.id.c_str(), r.delta, r.sigma, r.b, r.tau_theory, r.tau_actual);
    log << line;
  }
  io::write_text(out / "bounds.csv", csv);
  manifest["files"] = {"bounds.csv", "manifest.json"};
  manifest["exit_code"] = kExitOk;
  write_manifest(out, manifest);
  return kExitOk;
}

int cmd_sharpness(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  cfg.validate();
  ensure_dir(out);
  const std::vector<Job> jobs = make_jobs(cfg);
  std::string table = io::csv_line({"scheme", "delta", "sigma", "b", "theor_b", "time_step", "real_b",
                                    "diff", "ratio", "m_tilde", "m_exp", "valid"});
  std::string scan = io::csv_line({"scheme", "delta", "sigma", "b", "m", "tau", "pass", "violation",
                                   "step", "k", "l", "magnitude"});
  json manifest;
  manifest["command"] = "sharpness";
  manifest["config"] = to_json(cfg);
  manifest["rows"] = json::array();
  bool violations = false;
  for (const Job& job : jobs) {
    ProblemSetup setup;
    setup.grid = cfg.grid();
    setup.params = job.params;
    setup.history = cfg.history;
    setup.cubature_order = cfg.cubature_order;
    setup.final_time = cfg.final_time;
    setup.coupling = cfg.coupling;
    const Scheme scheme = job.scheme.build();
    const SharpnessRow row =
        find_experimental_bound(setup, scheme, cfg.scan_start.value_or(0), cfg.scan_floor);
    table += io::csv_line({job.scheme.id, format_number(row.delta), format_number(row.sigma),
                           format_number(row.b), format_number(row.theor_bound),
                           format_number(row.time_step),
                           row.valid ? format_number(row.real_bound) : "",
                           row.valid ? std::to_string(row.diff) : "",
                           row.valid ? format_number(row.ratio) : "", std::to_string(row.m_tilde),
                           row.valid ? std::to_string(row.m_exp) : "", row.valid ? "1" : "0"});
    json scan_json = json::array();
    for (const auto& p : row.scan) {
      violations = violations || !p.pass;
      const auto& v = p.violation;
      scan += io::csv_line({job.scheme.id, format_number(row.delta), format_number(row.sigma),
                            format_number(row.b), std::to_string(p.m),
                            format_number(row.sigma / static_cast<double>(p.m)), p.pass ? "1" : "0",
                            v ? property_name(v->property) : "", v ? std::to_string(v->step) : "",
                            v ? std::to_string(v->k) : "", v ? std::to_string(v->l) : "",
                            v ? format_number(v->magnitude) : ""});
      scan_json.push_back({{"m", p.m}, {"pass", p.pass}, {"violation", violation_json(v)}});
    }
    manifest["rows"].push_back({{"scheme", job.scheme.id},
                                {"params", params_json(job.params)},
                                {"theor_b", row.theor_bound},
                                {"m_tilde", row.m_tilde},
                                {"m_exp", row.valid ? json(row.m_exp) : json(nullptr)},
                                {"valid", row.valid},
                                {"scan", scan_json}});
    char line[200];
    if (row.valid) {
      std::snprintf(line, sizeof line,
                    "%-8s delta=%-6g sigma=%-5g b=%-6g theor.b=%.4f time step=%.4f real b.=%.4f "
                    "diff=%ld ratio=%.4f\n",
                    job.scheme.id.c_str(), row.delta, row.sigma, row.b, row.theor_bound,
                    row.time_step, row.real_bound, row.diff, row.ratio);
    } else {
      violations = true;
      std::snprintf(line, sizeof line,
                    "%-8s delta=%-6g sigma=%-5g b=%-6g theor.b=%.4f: no valid step (m=%zu fails)\n",
                    job.scheme.id.c_str(), row.delta, row.sigma, row.b, row.theor_bound,
                    row.scan.front().m);
    }
    log << line;
  }
  io::write_text(out / "sharpness.csv", table);
  io::write_text(out / "sharpness_scan.csv", scan);
  manifest["files"] = {"sharpness.csv", "sharpness_scan.csv", "manifest.json"};
  const int code = violations ? kExitViolations : kExitOk;
  manifest["exit_code"] = code;
  write_manifest(out, manifest);
  return code;
}

}  // namespace delaysir
