#pragma once

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "femto/channel.hpp"
#include "femto/random.hpp"
#include "femto/spectrum.hpp"
#include "femto/topology.hpp"

namespace femto {

enum class SonEventKind { Reconfigure, PowerRequest, NewFap, ColorConflict };

std::string_view to_string(SonEventKind kind);
SonEventKind son_event_kind_from_string(std::string_view name);

struct SonEvent {
  std::uint64_t seq = 0;
  SonEventKind kind = SonEventKind::Reconfigure;
  FapId subject;
  nlohmann::json payload = nlohmann::json::object();

  nlohmann::json to_json() const;
  static SonEvent from_json(const nlohmann::json& j);
};

/// Append-only event log with monotone sequence numbers.
class EventLog {
 public:
  const SonEvent& append(SonEventKind kind, FapId subject, nlohmann::json payload);
  const std::vector<SonEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }

  /// One JSON object per line: {"seq","kind","subject","payload"}.
  void write_ndjson(std::ostream& os) const;
  static std::vector<SonEvent> read_ndjson(std::istream& is);

 private:
  std::vector<SonEvent> events_;
  std::uint64_t next_seq_ = 0;
};

using FapPair = std::pair<FapId, FapId>;

struct ColoringState {
  std::vector<EdgeChoice> colors;  ///< indexed by FAP id
  std::set<FapPair> conflicts;     ///< adjacent same-color pairs, first < second
};

/// All graph edges whose endpoints share an edge color.
std::set<FapPair> find_conflicts(const NeighborGraph& graph, const std::vector<EdgeChoice>& colors);

/// Greedy edge-band coloring in descending-degree order (ties by id). Writes
/// the colors into the deployment, logging one Reconfigure per FAP and one
/// ColorConflict per FAP that could not avoid its neighbors' colors.
ColoringState configure_frequencies(Deployment& deployment, const NeighborGraph& graph,
                                    const FrequencyPlan& plan, EventLog& log);

/// Baseline: independent uniform colors.
ColoringState random_coloring(Deployment& deployment, const NeighborGraph& graph,
                              const FrequencyPlan& plan, Rng& rng);

/// Baseline: every FAP on edge band X.
ColoringState shared_edge_coloring(Deployment& deployment, const NeighborGraph& graph,
                                   const FrequencyPlan& plan);

/// Fraction of ordered neighbor pairs (i, j) with X_i = 0 for a UE of i in `region`.
double non_cochannel_fraction(const Deployment& deployment, const NeighborGraph& graph,
                              const FrequencyPlan& plan, UeRegion region);

struct VictimUe {
  FapId master;
  Point position = Point::Zero();
  UeRegion region = UeRegion::Edge;
};

struct PowerControlOptions {
  double step_db = 1.0;
  double margin_db = 3.0;
  double floor_w = 1e-4;
};

/// Fading-averaged SIR S-bar / E[I] in linear units (infinite without interference).
double mean_sir(const LinkBudget& budget);

/// Steps the strongest co-channel interferer down by `step_db` (clamped at the
/// floor) until the victim's mean SIR reaches gamma + margin or every
/// co-channel interferer sits at the floor. Each step shrinks that cell's
/// radius so its own edge sees unchanged power.
std::vector<SonEvent> adjust_power(Deployment& deployment, const NeighborGraph& graph,
                                   const VictimUe& victim, const FrequencyPlan& plan,
                                   const PropagationParams& params, double gamma_db,
                                   const PowerControlOptions& options, EventLog& log);

struct NewFapRequest {
  Point position = Point::Zero();
  double tx_power = 0.01;
  double radius = 10.0;
  double height = 2.0;
};

/// Installs a FAP: sector from its position, sniffed neighbors within the
/// graph radius, and an edge color absent among them (else the minority one).
/// Existing FAPs are untouched apart from gaining the new neighbor.
std::vector<SonEvent> admit_fap(Deployment& deployment, NeighborGraph& graph,
                                const NewFapRequest& request, const FrequencyPlan& plan,
                                EventLog& log);

/// Re-applies logged state changes to a copy of the pre-state.
void replay(Deployment& deployment, const FrequencyPlan& plan, const std::vector<SonEvent>& events);

}  // namespace femto
