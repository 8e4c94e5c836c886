#include "femto/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace femto {

namespace {
constexpr double kSpeedOfLight = 299'792'458.0;
}

double free_space_gain_1m(double carrier_hz) {
  const double lambda = kSpeedOfLight / carrier_hz;
  const double g = lambda / (4.0 * std::numbers::pi);
  return g * g;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

PropagationParams PropagationParams::presets(double carrier_hz, double macro_loss_at_1km_db) {
  PropagationParams p;
  p.carrier_hz = carrier_hz;
  p.p0_femto = free_space_gain_1m(carrier_hz);
  p.p0_macro = db_to_linear(-macro_loss_at_1km_db) * std::pow(1000.0, p.eta_macro);
  return p;
}

void PropagationParams::validate() const {
  auto exponent_ok = [](double e) { return e >= 1.5 && e <= 6.0; };
  if (!exponent_ok(eta_desired) || !exponent_ok(eta_femto_interf) || !exponent_ok(eta_macro)) {
    throw InvalidArgument("path-loss exponents must lie in [1.5, 6]");
  }
  if (!(p0_femto > 0.0) || !(p0_macro > 0.0) || !(carrier_hz > 0.0)) {
    throw InvalidArgument("propagation constants must be positive");
  }
  if (!(wall_loss_db >= 0.0) || walls_between_femtos < 0) {
    throw InvalidArgument("wall loss and wall count must be non-negative");
  }
}

ChannelSample ChannelSample::unit(std::size_t k) {
  ChannelSample s;
  s.femto_slow = Eigen::ArrayXd::Ones(static_cast<Eigen::Index>(k));
  s.femto_fast = Eigen::ArrayXd::Ones(static_cast<Eigen::Index>(k));
  return s;
}

ChannelSample draw_sample(std::size_t k, Rng& rng) {
  std::exponential_distribution<double> exp1(1.0);
  ChannelSample s;
  s.z0 = exp1(rng);
  s.femto_slow.resize(static_cast<Eigen::Index>(k));
  s.femto_fast.resize(static_cast<Eigen::Index>(k));
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(k); ++i) {
    s.femto_slow[i] = exp1(rng);
    s.femto_fast[i] = exp1(rng);
  }
  s.macro_slow = exp1(rng);
  s.macro_fast = exp1(rng);
  return s;
}

double mean_desired_power(const Fap& fap, double ue_distance, const PropagationParams& params) {
  if (!(ue_distance > 0.0)) throw InvalidArgument("UE distance must be positive");
  return fap.tx_power * params.p0_femto * std::pow(ue_distance, -params.eta_desired);
}

LinkBudget link_budget(const Deployment& deployment, const NeighborGraph& graph, FapId reference,
                       const Point& ue_position, const FrequencyPlan& plan, UeRegion region,
                       const PropagationParams& params) {
  const Fap& ref = deployment.fap(reference);
  const double d0 = (ue_position - ref.position).norm();
  if (d0 > ref.radius * (1.0 + 1e-12)) {
    throw InvalidArgument("UE lies outside the reference femtocell");
  }

  LinkBudget b;
  b.s_bar = mean_desired_power(ref, d0, params);
  b.neighbors = graph.neighbors(reference);

  const auto k = static_cast<Eigen::Index>(b.neighbors.size());
  b.femto_mean.resize(k);
  b.femto_x.resize(k);
  const double wall = std::pow(10.0, -params.walls_between_femtos * params.wall_loss_db / 10.0);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Fap& n = deployment.fap(b.neighbors[static_cast<std::size_t>(i)]);
    const bool x = cochannel(plan, ref.allocation, region, n.allocation);
    const double di = (ue_position - n.position).norm();
    if (!(di > 0.0)) throw InvalidArgument("UE coincides with an interfering FAP");
    b.femto_x[i] = x ? 1.0 : 0.0;
    b.femto_mean[i] = x ? n.tx_power * params.p0_femto * std::pow(di, -params.eta_femto_interf) * wall : 0.0;
  }

  if (deployment.macro) {
    const MacroBs& m = *deployment.macro;
    b.macro_y = cochannel(plan, ref.allocation, region, MacroSector{ref.sector_index});
    if (b.macro_y) {
      const double dm = (ue_position - m.position).norm();
      if (!(dm > 0.0)) throw InvalidArgument("UE coincides with the macro BS");
      b.macro_mean = m.tx_power * params.p0_macro * std::pow(dm, -params.eta_macro);
    }
  }
  return b;
}

LinkPowers realize(const LinkBudget& b, const ChannelSample& s) {
  if (s.neighbor_count() != b.neighbor_count()) {
    throw InvalidArgument("channel sample has " + std::to_string(s.neighbor_count()) +
                          " fading pairs for " + std::to_string(b.neighbor_count()) + " neighbors");
  }
  LinkPowers p;
  p.s_bar = b.s_bar;
  p.i_femto = b.femto_mean * s.femto_slow * s.femto_fast;
  p.i_macro = b.macro_mean * s.macro_slow * s.macro_fast;
  return p;
}

LinkPowers interference_powers(const Deployment& deployment, const NeighborGraph& graph,
                               FapId reference, const Point& ue_position, const FrequencyPlan& plan,
                               UeRegion region, const PropagationParams& params,
                               const ChannelSample& sample) {
  return realize(link_budget(deployment, graph, reference, ue_position, plan, region, params), sample);
}

}  // namespace femto
