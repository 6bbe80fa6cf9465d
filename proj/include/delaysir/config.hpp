// Run configuration: a JSON document with nested sections. Unknown keys are rejected.
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "delaysir/integrators.hpp"
#include "delaysir/model.hpp"

namespace delaysir {

/// A scheme as written in the config: a built-in id or a named custom tableau.
struct SchemeSpec {
  std::string id;                        // "euler", "ssprk2", "ssprk3" or the custom name
  std::optional<ButcherTableau> tableau;  // set for custom schemes

  Scheme build() const;
};

/// Per-case overrides of the base physical parameters.
struct CaseOverride {
  std::optional<double> delta;
  std::optional<double> sigma;
  std::optional<double> b;
  std::optional<double> c;
};

enum class HeatmapScaleMode { per_file, sweep, fixed };

struct RunConfig {
  double A{1.0};
  double B{1.0};
  std::size_t K{20};
  std::size_t L{20};
  ModelParams model{0.05, 0.01, 1.0, KernelParams{100.0, 0.13}};
  HistorySpec history;
  std::size_t cubature_order{40};
  std::vector<SchemeSpec> schemes{SchemeSpec{"euler", std::nullopt}};
  DelayCoupling coupling{DelayCoupling::stage_aligned};
  std::optional<std::size_t> m;  // nullopt: use m_tilde
  double final_time{15.0};

  std::filesystem::path output_dir{"out"};
  std::size_t snapshot_every{0};
  HeatmapScaleMode heatmap_scale{HeatmapScaleMode::per_file};
  double heatmap_min{0.0};
  double heatmap_max{20.0};

  /// Absent: one run with the base parameters. Present (possibly empty): one run per entry.
  std::optional<std::vector<CaseOverride>> cases;

  std::size_t scan_floor{1};
  std::optional<std::size_t> scan_start;  // nullopt: m_tilde

  /// Base parameters with one case applied.
  ModelParams model_for(const CaseOverride& c) const;
  std::vector<CaseOverride> effective_cases() const;
  GridSpec grid() const;

  /// Throws ConfigError naming the first offending key.
  void validate() const;
};

/// Parses and validates. Throws ConfigError with the key path on any problem.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// The fully resolved configuration in the same document format.
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace delaysir
