#pragma once

#include <Eigen/Core>

#include <cstddef>

#include "femto/random.hpp"
#include "femto/spectrum.hpp"
#include "femto/topology.hpp"

namespace femto {

/// Generic log-distance model P_R = P_T * P_0 * d^-eta * xi * Z per link class.
struct PropagationParams {
  double carrier_hz = 900e6;
  double eta_desired = 2.0;
  double eta_femto_interf = 2.0;
  double eta_macro = 3.5;
  double p0_femto = 0.0;  ///< linear gain at 1 m
  double p0_macro = 0.0;  ///< linear gain at 1 m
  double wall_loss_db = 10.0;
  int walls_between_femtos = 1;

  /// Femto links: free-space gain at 1 m for the carrier. Macro link: constant
  /// chosen so that path loss at 1 km is `macro_loss_at_1km_db`.
  static PropagationParams presets(double carrier_hz = 900e6, double macro_loss_at_1km_db = 128.0);

  void validate() const;
};

/// Free-space power gain (lambda / 4 pi)^2 at 1 m.
double free_space_gain_1m(double carrier_hz);

double db_to_linear(double db);
double linear_to_db(double lin);

/// One fading realization. Desired link carries fast fading only.
struct ChannelSample {
  double z0 = 1.0;
  Eigen::ArrayXd femto_slow;  ///< xi_i
  Eigen::ArrayXd femto_fast;  ///< Z_i
  double macro_slow = 1.0;    ///< xi_m
  double macro_fast = 1.0;    ///< Z_m

  std::size_t neighbor_count() const { return static_cast<std::size_t>(femto_slow.size()); }
  static ChannelSample unit(std::size_t neighbor_count);
};

/// Draws z0, then (xi_i, Z_i) per neighbor in order, then (xi_m, Z_m), all
/// unit-mean exponential.
ChannelSample draw_sample(std::size_t neighbor_count, Rng& rng);

struct LinkPowers {
  double s_bar = 0.0;
  Eigen::ArrayXd i_femto;
  double i_macro = 0.0;

  double total_interference() const { return i_femto.sum() + i_macro; }
};

/// Deterministic part of every link seen by one UE: S-bar plus per-interferer
/// mean powers with co-channel indicators and wall loss folded in.
struct LinkBudget {
  double s_bar = 0.0;
  Eigen::ArrayXd femto_mean;   ///< P_Tf(i) P_0f d_i^-eta2 X_i wall
  Eigen::ArrayXd femto_x;      ///< X_i as 0/1
  double macro_mean = 0.0;     ///< P_Tm P_0m d_m^-eta3 Y
  bool macro_y = false;
  std::vector<FapId> neighbors;

  std::size_t neighbor_count() const { return neighbors.size(); }
};

double mean_desired_power(const Fap& fap, double ue_distance, const PropagationParams& params);

LinkBudget link_budget(const Deployment& deployment, const NeighborGraph& graph, FapId reference,
                       const Point& ue_position, const FrequencyPlan& plan, UeRegion region,
                       const PropagationParams& params);

/// Applies one fading realization to a budget.
LinkPowers realize(const LinkBudget& budget, const ChannelSample& sample);

/// Interference sum for one realization without materializing LinkPowers.
inline double realized_interference(const LinkBudget& b, const ChannelSample& s) {
  return (b.femto_mean * s.femto_slow * s.femto_fast).sum() + b.macro_mean * s.macro_slow * s.macro_fast;
}

LinkPowers interference_powers(const Deployment& deployment, const NeighborGraph& graph,
                               FapId reference, const Point& ue_position, const FrequencyPlan& plan,
                               UeRegion region, const PropagationParams& params,
                               const ChannelSample& sample);

}  // namespace femto
