#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "femto/sweep.hpp"

namespace femto {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Effective experiment configuration: Table-2-style defaults plus any
/// overrides, kept as validated typed fields.
struct ExperimentConfig {
  // Geometry and radio.
  double macro_radius = 1000.0;
  double femto_radius = 10.0;
  double reference_distance = 200.0;
  double neighbor_radius = 100.0;
  double carrier_hz = 900e6;
  double macro_tx_power = 1.5;
  double fap_max_power = 0.01;
  double macro_height = 50.0;
  double fap_height = 2.0;
  std::size_t n_sectors = 3;

  // Propagation model.
  double eta_desired = 2.0;
  double eta_femto_interf = 2.0;
  double eta_macro = 3.5;
  double macro_loss_at_1km_db = 128.0;
  double wall_loss_db = 10.0;
  int walls_between_femtos = 1;

  // Spectrum.
  std::uint64_t band_lower_hz = 0;
  std::uint64_t band_upper_hz = 60'000'000;
  double femto_fraction = 1.0 / 3.0;
  double edge_split = 0.5;

  // Outage evaluation.
  double gamma_db = 9.0;
  double ue_distance = 5.0;
  std::string ue_region = "auto";  ///< auto | center | edge
  double inner_radius_fraction = 0.5;
  std::string ue_direction = "nearest";  ///< nearest | random
  std::size_t n_trials = 100000;
  std::size_t shards = 8;
  std::size_t n_deployments = 20;

  // Experiment selection.
  std::vector<Scheme> schemes{Scheme::Dedicated, Scheme::Same, Scheme::Partial, Scheme::DynamicReuse};
  std::vector<std::size_t> densities{100, 300, 1000, 3000};
  std::size_t n_faps = 1000;
  std::uint64_t seed = 1;
  std::string out = "results.csv";

  /// Applies one key=value assignment; unknown keys and malformed values throw.
  void set(std::string_view key, std::string_view value);
  /// Parses a key=value file body ('#' comments and blank lines ignored).
  static ExperimentConfig parse(std::string_view text);
  static ExperimentConfig load(const std::filesystem::path& path);

  /// Canonical key=value listing of every field, in a fixed order.
  std::string to_text(bool include_output = true) const;
  /// FNV-1a of to_text(false), as 16 hex digits. The output path is not hashed.
  std::string hash() const;

  void validate() const;

  PropagationParams propagation() const;
  DeploymentParams deployment() const;
  PlanOptions plan() const;
  OutageConfig outage() const;
};

/// Thrown for configuration problems, as opposed to runtime failures.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

std::vector<std::string> experiment_names();

SweepSettings sweep_settings(const ExperimentConfig& config, std::string_view experiment,
                             std::size_t workers);

/// Full CSV text: '#' provenance lines, column header, one row per result.
std::string render_csv(const ExperimentConfig& config, std::string_view experiment,
                       const std::vector<SweepRow>& rows);

std::string run_experiment(const ExperimentConfig& config, std::string_view experiment,
                           std::size_t workers);

/// Writes to a sibling temporary file, then renames over `path`.
void write_atomically(const std::filesystem::path& path, std::string_view contents);

}  // namespace femto
