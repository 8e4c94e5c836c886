#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "femto/channel.hpp"
#include "femto/spectrum.hpp"
#include "femto/topology.hpp"

namespace femto {

enum class UeDirection { TowardNearestNeighbor, Random };

struct OutageConfig {
  double gamma_db = 9.0;
  std::size_t n_trials = 100000;
  double ue_distance = 5.0;
  UeRegion ue_region = UeRegion::Edge;
  UeDirection ue_direction = UeDirection::TowardNearestNeighbor;
  /// Fixed number of independent RNG streams; results depend on this, never
  /// on the number of worker threads.
  std::size_t shards = 8;

  void validate() const;
};

/// Running sums over Monte Carlo trials; merging is order-sensitive only in
/// the floating-point sense, so callers merge in a fixed order.
struct OutageTally {
  std::uint64_t n = 0;
  double sum_closed = 0.0;    ///< sum of the conditional closed-form outage
  double sumsq_closed = 0.0;
  std::uint64_t hits = 0;     ///< trials with SIR < gamma
  double sum_diff = 0.0;      ///< sum of (indicator - conditional)
  double sumsq_diff = 0.0;

  void merge(const OutageTally& other);
};

struct OutageEstimate {
  double p_out_closed = 0.0;
  double p_out_mc = 0.0;
  /// 1.96 * sqrt(p(1 - p) / n) for the Monte Carlo estimate.
  double ci95_halfwidth = 0.0;
  std::size_t n_trials = 0;
  double se_closed = 0.0;
  double se_mc = 0.0;
  /// Standard error of the paired per-trial difference indicator - conditional.
  double se_paired_diff = 0.0;

  static OutageEstimate from_tally(const OutageTally& t);
};

double gamma_linear(double gamma_db);

/// 1 - exp(-gamma * I / S-bar): outage given the interference, with the
/// desired link's unit-mean exponential fast fading integrated out.
double conditional_outage(double s_bar, double total_interference, double gamma_linear);

/// Same quantity from individual interference terms as 1 - prod exp(-gamma t_i / S-bar).
double conditional_outage_product(double s_bar, std::span<const double> terms, double gamma_linear);

/// UE position `distance` meters from the reference FAP.
Point place_ue(const Deployment& deployment, const NeighborGraph& graph, FapId reference,
               double distance, UeDirection direction, std::uint64_t seed);

/// Sharded trials over one fixed link budget. Workers only affect wall time.
OutageTally accumulate(const LinkBudget& budget, const OutageConfig& config, std::uint64_t seed,
                       std::size_t workers = 1);

OutageEstimate estimate(const Deployment& deployment, const NeighborGraph& graph, FapId reference,
                        const FrequencyPlan& plan, const OutageConfig& config,
                        const PropagationParams& params, std::uint64_t seed, std::size_t workers = 1);

}  // namespace femto
