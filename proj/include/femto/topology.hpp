#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "femto/spectrum.hpp"

namespace femto {

using Point = Eigen::Vector2d;

struct FapId {
  std::uint32_t value = 0;
  auto operator<=>(const FapId&) const = default;
};

/// Macro base station at the origin of the deployment frame.
struct MacroBs {
  Point position = Point::Zero();
  double height = 50.0;
  double tx_power = 1.5;
  double radius = 1000.0;
  std::size_t n_sectors = 3;
};

struct Fap {
  FapId id;
  Point position = Point::Zero();
  double height = 2.0;
  double tx_power = 0.01;
  double radius = 10.0;
  std::size_t sector_index = 0;
  FemtoAllocation allocation{Band{0, 1}};
};

enum class ScenarioKind { A, B, C, D };

std::string_view to_string(ScenarioKind s);
ScenarioKind scenario_from_string(std::string_view name);

struct DeploymentParams {
  double macro_radius = 1000.0;
  double macro_height = 50.0;
  double macro_tx_power = 1.5;
  std::size_t n_sectors = 3;
  std::size_t n_faps = 1000;
  double femto_radius = 10.0;
  double fap_height = 2.0;
  double fap_max_power = 0.01;
  double neighbor_radius = 100.0;
  /// FAP 0 is the reference femtocell, pinned at this distance from the BS in
  /// the middle of sector 0. Non-positive disables pinning.
  double reference_distance = 200.0;
  /// Scenario D requires at least this many FAPs.
  std::size_t dense_threshold = 1000;
  /// Scenario C requires mean neighbor degree below this.
  double sparse_degree_limit = 2.0;
  std::size_t max_resample_attempts = 100000;
};

struct Deployment {
  std::optional<MacroBs> macro;
  std::vector<Fap> faps;
  ScenarioKind scenario = ScenarioKind::D;
  std::uint64_t rng_seed = 0;

  const Fap& fap(FapId id) const;
  Fap& fap(FapId id);
  bool contains(FapId id) const { return id.value < faps.size(); }
};

/// Symmetric, irreflexive adjacency over FAP ids (ids index `adjacency`).
struct NeighborGraph {
  std::vector<std::vector<FapId>> adjacency;
  double neighbor_radius = 0.0;

  const std::vector<FapId>& neighbors(FapId id) const { return adjacency.at(id.value); }
  std::size_t edge_count() const;
  double mean_degree() const;
};

Deployment generate(ScenarioKind scenario, const DeploymentParams& params, std::uint64_t seed);

/// Wedge index floor(angle / (2 pi / N)) of `position` around the BS.
std::size_t sector_of(const MacroBs& macro, const Point& position);

/// Exact center-to-center adjacency within `radius`, accelerated by a uniform grid.
NeighborGraph neighbor_graph(const Deployment& deployment, double radius);

/// Sets every FAP's allocation to its sector's center band with no edge choice.
void assign_plan(Deployment& deployment, const FrequencyPlan& plan);

/// CSV columns: id,x,y,sector,tx_power,edge_choice,radius,height, preceded by
/// '#' metadata lines. Doubles are written in shortest round-trip form.
void write_csv(std::ostream& os, const Deployment& deployment);

/// Inverse of write_csv. Allocation center bands are restored from `plan`
/// when given.
Deployment read_csv(std::istream& is, const FrequencyPlan* plan = nullptr);

}  // namespace femto
