#include "femto/son.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

namespace femto {

std::string_view to_string(SonEventKind kind) {
  switch (kind) {
    case SonEventKind::Reconfigure: return "Reconfigure";
    case SonEventKind::PowerRequest: return "PowerRequest";
    case SonEventKind::NewFap: return "NewFap";
    case SonEventKind::ColorConflict: return "ColorConflict";
  }
  return "?";
}

SonEventKind son_event_kind_from_string(std::string_view name) {
  for (auto k : {SonEventKind::Reconfigure, SonEventKind::PowerRequest, SonEventKind::NewFap,
                 SonEventKind::ColorConflict}) {
    if (name == to_string(k)) return k;
  }
  throw InvalidArgument("unknown SON event kind '" + std::string(name) + "'");
}

nlohmann::json SonEvent::to_json() const {
  return {{"seq", seq}, {"kind", to_string(kind)}, {"subject", subject.value}, {"payload", payload}};
}

SonEvent SonEvent::from_json(const nlohmann::json& j) {
  SonEvent e;
  e.seq = j.at("seq").get<std::uint64_t>();
  e.kind = son_event_kind_from_string(j.at("kind").get<std::string>());
  e.subject = FapId{j.at("subject").get<std::uint32_t>()};
  e.payload = j.at("payload");
  return e;
}

const SonEvent& EventLog::append(SonEventKind kind, FapId subject, nlohmann::json payload) {
  events_.push_back(SonEvent{next_seq_++, kind, subject, std::move(payload)});
  return events_.back();
}

void EventLog::write_ndjson(std::ostream& os) const {
  for (const auto& e : events_) os << e.to_json().dump() << '\n';
}

std::vector<SonEvent> EventLog::read_ndjson(std::istream& is) {
  std::vector<SonEvent> out;
  for (std::string line; std::getline(is, line);) {
    if (line.empty()) continue;
    out.push_back(SonEvent::from_json(nlohmann::json::parse(line)));
  }
  return out;
}

std::set<FapPair> find_conflicts(const NeighborGraph& graph, const std::vector<EdgeChoice>& colors) {
  std::set<FapPair> out;
  for (std::uint32_t i = 0; i < graph.adjacency.size(); ++i) {
    for (FapId j : graph.adjacency[i]) {
      if (i < j.value && colors[i] != EdgeChoice::None && colors[i] == colors[j.value]) {
        out.emplace(FapId{i}, j);
      }
    }
  }
  return out;
}

namespace {

void require_edges(const FrequencyPlan& plan, const Deployment& d, const NeighborGraph& g) {
  if (!plan.has_edges()) {
    throw InvalidArgument(std::string("scheme ") + std::string(to_string(plan.scheme)) +
                          " has no edge bands to configure");
  }
  if (g.adjacency.size() != d.faps.size()) {
    throw InvalidArgument("neighbor graph does not cover every FAP");
  }
}

void write_colors(Deployment& d, const std::vector<EdgeChoice>& colors) {
  for (std::size_t i = 0; i < d.faps.size(); ++i) d.faps[i].allocation.edge_choice = colors[i];
}

/// Index of the smallest entry of `primary`, ties broken by `secondary`, then by index.
std::size_t pick_color(const std::array<std::size_t, 3>& primary,
                       const std::array<std::size_t, 3>& secondary) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < 3; ++c) {
    if (primary[c] < primary[best] ||
        (primary[c] == primary[best] && secondary[c] < secondary[best])) {
      best = c;
    }
  }
  return best;
}

}  // namespace

ColoringState configure_frequencies(Deployment& deployment, const NeighborGraph& graph,
                                    const FrequencyPlan& plan, EventLog& log) {
  require_edges(plan, deployment, graph);
  const std::size_t n = deployment.faps.size();

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return graph.adjacency[a].size() > graph.adjacency[b].size();
  });

  std::vector<EdgeChoice> colors(n, EdgeChoice::None);
  std::array<std::size_t, 3> usage{};
  for (std::uint32_t v : order) {
    std::array<std::size_t, 3> taken{};
    for (FapId u : graph.adjacency[v]) {
      if (colors[u.value] != EdgeChoice::None) ++taken[edge_index(colors[u.value])];
    }
    const std::size_t c = pick_color(taken, usage);
    colors[v] = edge_from_index(c);
    ++usage[c];
    if (taken[c] > 0) {
      nlohmann::json partners = nlohmann::json::array();
      for (FapId u : graph.adjacency[v]) {
        if (colors[u.value] == colors[v]) partners.push_back(u.value);
      }
      log.append(SonEventKind::ColorConflict, FapId{v},
                 {{"edge", to_string(colors[v])}, {"partners", partners}});
    }
  }

  for (std::uint32_t i = 0; i < n; ++i) {
    log.append(SonEventKind::Reconfigure, FapId{i}, {{"edge", to_string(colors[i])}});
  }
  write_colors(deployment, colors);
  ColoringState state{std::move(colors), {}};
  state.conflicts = find_conflicts(graph, state.colors);
  return state;
}

ColoringState random_coloring(Deployment& deployment, const NeighborGraph& graph,
                              const FrequencyPlan& plan, Rng& rng) {
  require_edges(plan, deployment, graph);
  std::uniform_int_distribution<std::size_t> pick(0, 2);
  std::vector<EdgeChoice> colors(deployment.faps.size());
  for (auto& c : colors) c = edge_from_index(pick(rng));
  write_colors(deployment, colors);
  ColoringState state{std::move(colors), {}};
  state.conflicts = find_conflicts(graph, state.colors);
  return state;
}

ColoringState shared_edge_coloring(Deployment& deployment, const NeighborGraph& graph,
                                   const FrequencyPlan& plan) {
  require_edges(plan, deployment, graph);
  std::vector<EdgeChoice> colors(deployment.faps.size(), EdgeChoice::X);
  write_colors(deployment, colors);
  ColoringState state{std::move(colors), {}};
  state.conflicts = find_conflicts(graph, state.colors);
  return state;
}

double non_cochannel_fraction(const Deployment& deployment, const NeighborGraph& graph,
                              const FrequencyPlan& plan, UeRegion region) {
  std::size_t pairs = 0;
  std::size_t clear = 0;
  for (std::uint32_t i = 0; i < graph.adjacency.size(); ++i) {
    const auto& ai = deployment.faps[i].allocation;
    for (FapId j : graph.adjacency[i]) {
      ++pairs;
      if (!cochannel(plan, ai, region, deployment.faps[j.value].allocation)) ++clear;
    }
  }
  return pairs == 0 ? 1.0 : static_cast<double>(clear) / static_cast<double>(pairs);
}

double mean_sir(const LinkBudget& b) {
  const double i = b.femto_mean.sum() + b.macro_mean;
  return i > 0.0 ? b.s_bar / i : std::numeric_limits<double>::infinity();
}

std::vector<SonEvent> adjust_power(Deployment& deployment, const NeighborGraph& graph,
                                   const VictimUe& victim, const FrequencyPlan& plan,
                                   const PropagationParams& params, double gamma_db,
                                   const PowerControlOptions& options, EventLog& log) {
  if (!(options.step_db > 0.0) || !(options.floor_w > 0.0)) {
    throw InvalidArgument("power step and floor must be positive");
  }
  const double target = db_to_linear(gamma_db + options.margin_db);
  std::vector<SonEvent> emitted;

  for (;;) {
    const LinkBudget b =
        link_budget(deployment, graph, victim.master, victim.position, plan, victim.region, params);
    if (mean_sir(b) >= target) break;

    // Strongest co-channel interferer still above the floor; first id wins ties.
    std::optional<Eigen::Index> strongest;
    for (Eigen::Index i = 0; i < b.femto_mean.size(); ++i) {
      const Fap& f = deployment.fap(b.neighbors[static_cast<std::size_t>(i)]);
      if (b.femto_x[i] == 0.0 || f.tx_power <= options.floor_w) continue;
      if (!strongest || b.femto_mean[i] > b.femto_mean[*strongest]) strongest = i;
    }
    if (!strongest) break;

    Fap& f = deployment.fap(b.neighbors[static_cast<std::size_t>(*strongest)]);
    const double new_power = std::max(options.floor_w, f.tx_power * db_to_linear(-options.step_db));
    const double delta_db = linear_to_db(new_power / f.tx_power);
    f.radius *= std::pow(10.0, delta_db / (10.0 * params.eta_desired));
    f.tx_power = new_power;
    emitted.push_back(log.append(
        SonEventKind::PowerRequest, f.id,
        {{"master", victim.master.value}, {"delta_db", delta_db}, {"tx_power", f.tx_power}, {"radius", f.radius}}));
  }
  return emitted;
}

std::vector<SonEvent> admit_fap(Deployment& deployment, NeighborGraph& graph,
                                const NewFapRequest& request, const FrequencyPlan& plan,
                                EventLog& log) {
  if (!deployment.macro) throw InvalidArgument("admission needs an overlaying macrocell");
  const MacroBs& macro = *deployment.macro;
  if ((request.position - macro.position).norm() > macro.radius) {
    throw InvalidArgument("new FAP lies outside the macro disc");
  }
  require_edges(plan, deployment, graph);

  Fap fap;
  fap.id = FapId{static_cast<std::uint32_t>(deployment.faps.size())};
  fap.position = request.position;
  fap.height = request.height;
  fap.tx_power = request.tx_power;
  fap.radius = request.radius;
  fap.sector_index = sector_of(macro, request.position);
  fap.allocation =
      FemtoAllocation{plan.center_band_per_sector.at(fap.sector_index), EdgeChoice::None, fap.sector_index};

  // Sniff: every existing FAP within the neighbor radius.
  std::vector<FapId> heard;
  std::array<std::size_t, 3> seen{};
  for (const Fap& other : deployment.faps) {
    if ((other.position - fap.position).norm() <= graph.neighbor_radius) {
      heard.push_back(other.id);
      if (other.allocation.edge_choice != EdgeChoice::None) {
        ++seen[edge_index(other.allocation.edge_choice)];
      }
    }
  }
  fap.allocation.edge_choice = edge_from_index(pick_color(seen, {0, 1, 2}));

  std::vector<SonEvent> emitted;
  nlohmann::json neighbor_ids = nlohmann::json::array();
  for (FapId h : heard) neighbor_ids.push_back(h.value);
  emitted.push_back(log.append(SonEventKind::NewFap, fap.id,
                               {{"x", fap.position.x()},
                                {"y", fap.position.y()},
                                {"sector", fap.sector_index},
                                {"tx_power", fap.tx_power},
                                {"radius", fap.radius},
                                {"height", fap.height},
                                {"neighbors", neighbor_ids}}));
  emitted.push_back(log.append(SonEventKind::Reconfigure, fap.id,
                               {{"edge", to_string(fap.allocation.edge_choice)}}));

  graph.adjacency.emplace_back(heard);
  for (FapId h : heard) {
    auto& adj = graph.adjacency[h.value];
    adj.insert(std::upper_bound(adj.begin(), adj.end(), fap.id), fap.id);
  }
  deployment.faps.push_back(fap);
  return emitted;
}

void replay(Deployment& deployment, const FrequencyPlan& plan, const std::vector<SonEvent>& events) {
  for (const SonEvent& e : events) {
    switch (e.kind) {
      case SonEventKind::Reconfigure:
        deployment.fap(e.subject).allocation.edge_choice =
            edge_choice_from_string(e.payload.at("edge").get<std::string>());
        break;
      case SonEventKind::PowerRequest: {
        Fap& f = deployment.fap(e.subject);
        f.tx_power = e.payload.at("tx_power").get<double>();
        f.radius = e.payload.at("radius").get<double>();
        break;
      }
      case SonEventKind::NewFap: {
        if (e.subject.value != deployment.faps.size()) {
          throw InvalidArgument("NewFap event out of order for id " + std::to_string(e.subject.value));
        }
        Fap f;
        f.id = e.subject;
        f.position = Point(e.payload.at("x").get<double>(), e.payload.at("y").get<double>());
        f.sector_index = e.payload.at("sector").get<std::size_t>();
        f.tx_power = e.payload.at("tx_power").get<double>();
        f.radius = e.payload.at("radius").get<double>();
        f.height = e.payload.at("height").get<double>();
        f.allocation = FemtoAllocation{plan.center_band_per_sector.at(f.sector_index), EdgeChoice::None,
                                       f.sector_index};
        deployment.faps.push_back(f);
        break;
      }
      case SonEventKind::ColorConflict:
        break;
    }
  }
}

}  // namespace femto
