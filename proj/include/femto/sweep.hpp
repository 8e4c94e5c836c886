#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "femto/channel.hpp"
#include "femto/outage.hpp"
#include "femto/spectrum.hpp"
#include "femto/topology.hpp"

namespace femto {

/// How edge colors are chosen for a DynamicReuse arm.
enum class ColoringMode { Greedy, UniformRandom, SharedEdge };

struct SweepArm {
  Scheme scheme = Scheme::DynamicReuse;
  ColoringMode coloring = ColoringMode::Greedy;

  /// Scheme name, suffixed with the coloring mode for non-greedy DynamicReuse arms.
  std::string label() const;
};

struct SweepSettings {
  std::vector<std::size_t> densities{1000};  ///< FAP counts in the macro disc
  std::vector<SweepArm> arms;
  DeploymentParams deployment;
  PlanOptions plan;
  OutageConfig outage;
  PropagationParams propagation = PropagationParams::presets();
  /// Trials are split across this many independent deployments per density.
  std::size_t n_deployments = 20;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
};

struct SweepRow {
  std::string label;
  std::size_t density = 0;
  OutageEstimate estimate;
  std::uint64_t seed = 0;
};

/// For every density, regenerates `n_deployments` deployments (FAP 0 is the
/// reference) and evaluates every arm on the same geometry and fading streams.
/// Rows are ordered by density, then by arm order.
std::vector<SweepRow> density_sweep(const SweepSettings& settings);

}  // namespace femto
