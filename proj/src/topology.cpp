#include "femto/topology.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <unordered_map>

#include "femto/random.hpp"
#include "text.hpp"

namespace femto {

std::string_view to_string(ScenarioKind s) {
  switch (s) {
    case ScenarioKind::A: return "A";
    case ScenarioKind::B: return "B";
    case ScenarioKind::C: return "C";
    case ScenarioKind::D: return "D";
  }
  return "?";
}

ScenarioKind scenario_from_string(std::string_view name) {
  for (auto s : {ScenarioKind::A, ScenarioKind::B, ScenarioKind::C, ScenarioKind::D}) {
    if (name == to_string(s)) return s;
  }
  throw InvalidArgument("unknown scenario '" + std::string(name) + "'");
}

const Fap& Deployment::fap(FapId id) const {
  if (!contains(id)) throw InvalidArgument("no FAP with id " + std::to_string(id.value));
  return faps[id.value];
}

Fap& Deployment::fap(FapId id) {
  if (!contains(id)) throw InvalidArgument("no FAP with id " + std::to_string(id.value));
  return faps[id.value];
}

std::size_t NeighborGraph::edge_count() const {
  std::size_t deg = 0;
  for (const auto& a : adjacency) deg += a.size();
  return deg / 2;
}

double NeighborGraph::mean_degree() const {
  if (adjacency.empty()) return 0.0;
  return 2.0 * static_cast<double>(edge_count()) / static_cast<double>(adjacency.size());
}

std::size_t sector_of(const MacroBs& macro, const Point& position) {
  const Point rel = position - macro.position;
  if (rel.x() == 0.0 && rel.y() == 0.0) {
    throw InvalidArgument("position coincides with the macro BS");
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double angle = std::atan2(rel.y(), rel.x());
  if (angle < 0.0) angle += two_pi;
  const double wedge = two_pi / static_cast<double>(macro.n_sectors);
  const auto s = static_cast<std::size_t>(std::floor(angle / wedge));
  return std::min(s, macro.n_sectors - 1);
}

namespace {

Point uniform_in_disc(Rng& rng, const Point& center, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  for (;;) {
    const Point p(u(rng), u(rng));
    if (p.squaredNorm() <= radius * radius && (p.x() != 0.0 || p.y() != 0.0)) return center + p;
  }
}

bool within(const Point& a, const Point& b, double r) { return (a - b).norm() <= r; }

Fap make_fap(const DeploymentParams& p, const MacroBs& macro, std::uint32_t id, const Point& pos) {
  Fap f;
  f.id = FapId{id};
  f.position = pos;
  f.height = p.fap_height;
  f.tx_power = p.fap_max_power;
  f.radius = p.femto_radius;
  f.sector_index = sector_of(macro, pos);
  f.allocation.sector_index = f.sector_index;
  return f;
}

}  // namespace

Deployment generate(ScenarioKind scenario, const DeploymentParams& p, std::uint64_t seed) {
  if (!(p.macro_radius > 0.0) || !(p.neighbor_radius > 0.0) || !(p.femto_radius > 0.0) ||
      !(p.fap_max_power > 0.0) || !(p.macro_tx_power > 0.0) || p.n_sectors == 0) {
    throw InvalidArgument("deployment parameters must be positive");
  }
  Deployment d;
  d.scenario = scenario;
  d.rng_seed = seed;
  Rng rng = make_rng(seed, {stream::kDeployment});

  if (scenario == ScenarioKind::A) {
    Fap f;
    f.id = FapId{0};
    f.height = p.fap_height;
    f.tx_power = p.fap_max_power;
    f.radius = p.femto_radius;
    d.faps.push_back(f);
    return d;
  }

  if (p.n_faps == 0) throw InvalidArgument("n_faps must be positive");
  if (scenario == ScenarioKind::D && p.n_faps < p.dense_threshold) {
    throw InvalidArgument("scenario D needs at least " + std::to_string(p.dense_threshold) +
                          " FAPs, got " + std::to_string(p.n_faps));
  }
  if (p.reference_distance > p.macro_radius) {
    throw InvalidArgument("reference distance lies outside the macro disc");
  }

  MacroBs macro;
  macro.height = p.macro_height;
  macro.tx_power = p.macro_tx_power;
  macro.radius = p.macro_radius;
  macro.n_sectors = p.n_sectors;
  d.macro = macro;
  d.faps.reserve(p.n_faps);

  std::size_t first_random = 0;
  if (p.reference_distance > 0.0) {
    const double angle = std::numbers::pi / static_cast<double>(p.n_sectors);
    const Point ref = p.reference_distance * Point(std::cos(angle), std::sin(angle));
    d.faps.push_back(make_fap(p, macro, 0, ref));
    first_random = 1;
  }

  for (std::size_t i = first_random; i < p.n_faps; ++i) {
    Point pos = uniform_in_disc(rng, macro.position, p.macro_radius);
    if (scenario == ScenarioKind::B) {
      std::size_t attempts = 0;
      auto clashes = [&](const Point& q) {
        return std::any_of(d.faps.begin(), d.faps.end(),
                           [&](const Fap& f) { return within(f.position, q, p.neighbor_radius); });
      };
      while (clashes(pos)) {
        if (++attempts >= p.max_resample_attempts) {
          throw InvalidArgument("scenario B packing infeasible: could not place FAP " +
                                std::to_string(i) + " after " + std::to_string(attempts) +
                                " attempts");
        }
        pos = uniform_in_disc(rng, macro.position, p.macro_radius);
      }
    }
    d.faps.push_back(make_fap(p, macro, static_cast<std::uint32_t>(i), pos));
  }

  if (scenario == ScenarioKind::C) {
    if (d.faps.size() < 2) throw InvalidArgument("scenario C needs at least two FAPs");
    NeighborGraph g = neighbor_graph(d, p.neighbor_radius);
    if (g.edge_count() == 0) {
      // Pull the last FAP next to the first so at least one pair overlaps.
      Fap& last = d.faps.back();
      Point pos;
      do {
        pos = uniform_in_disc(rng, d.faps.front().position, p.neighbor_radius);
      } while (pos.norm() > p.macro_radius || pos == macro.position);
      last = make_fap(p, macro, last.id.value, pos);
      g = neighbor_graph(d, p.neighbor_radius);
    }
    if (g.mean_degree() >= p.sparse_degree_limit) {
      throw InvalidArgument("scenario C deployment too dense: mean degree " +
                            std::to_string(g.mean_degree()));
    }
  }
  return d;
}

NeighborGraph neighbor_graph(const Deployment& deployment, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("neighbor radius must be positive");
  NeighborGraph g;
  g.neighbor_radius = radius;
  const auto n = deployment.faps.size();
  g.adjacency.resize(n);

  auto cell_of = [radius](const Point& p) {
    return std::pair<std::int64_t, std::int64_t>{static_cast<std::int64_t>(std::floor(p.x() / radius)),
                                                 static_cast<std::int64_t>(std::floor(p.y() / radius))};
  };
  auto key = [](std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(cx) << 32) ^ (static_cast<std::uint64_t>(cy) & 0xffffffffULL);
  };

  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> grid;
  for (std::uint32_t i = 0; i < n; ++i) {
    auto [cx, cy] = cell_of(deployment.faps[i].position);
    grid[key(cx, cy)].push_back(i);
  }

  for (std::uint32_t i = 0; i < n; ++i) {
    const Point& pi = deployment.faps[i].position;
    auto [cx, cy] = cell_of(pi);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = grid.find(key(cx + dx, cy + dy));
        if (it == grid.end()) continue;
        for (std::uint32_t j : it->second) {
          if (j != i && within(pi, deployment.faps[j].position, radius)) {
            g.adjacency[i].push_back(FapId{j});
          }
        }
      }
    }
    std::sort(g.adjacency[i].begin(), g.adjacency[i].end());
  }
  return g;
}

void assign_plan(Deployment& deployment, const FrequencyPlan& plan) {
  for (Fap& f : deployment.faps) {
    if (f.sector_index >= plan.n_sectors()) {
      throw InvalidArgument("FAP sector exceeds plan sector count");
    }
    f.allocation = FemtoAllocation{plan.center_band_per_sector[f.sector_index], EdgeChoice::None,
                                   f.sector_index};
  }
}

void write_csv(std::ostream& os, const Deployment& d) {
  using text::fmt;
  os << "# scenario=" << to_string(d.scenario) << '\n';
  os << "# rng_seed=" << d.rng_seed << '\n';
  if (d.macro) {
    const MacroBs& m = *d.macro;
    os << "# macro=" << fmt(m.position.x()) << ',' << fmt(m.position.y()) << ',' << fmt(m.height)
       << ',' << fmt(m.tx_power) << ',' << fmt(m.radius) << ',' << m.n_sectors << '\n';
  } else {
    os << "# macro=none\n";
  }
  os << "id,x,y,sector,tx_power,edge_choice,radius,height\n";
  for (const Fap& f : d.faps) {
    os << f.id.value << ',' << fmt(f.position.x()) << ',' << fmt(f.position.y()) << ','
       << f.sector_index << ',' << fmt(f.tx_power) << ',' << to_string(f.allocation.edge_choice)
       << ',' << fmt(f.radius) << ',' << fmt(f.height) << '\n';
  }
}

Deployment read_csv(std::istream& is, const FrequencyPlan* plan) {
  Deployment d;
  bool header_seen = false;
  for (std::string line; std::getline(is, line);) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const std::string_view body = std::string_view(line).substr(2);
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      const auto k = body.substr(0, eq);
      const auto v = body.substr(eq + 1);
      if (k == "scenario") {
        d.scenario = scenario_from_string(v);
      } else if (k == "rng_seed") {
        d.rng_seed = text::parse_int<std::uint64_t>(v);
      } else if (k == "macro" && v != "none") {
        const auto f = text::split(v, ',');
        if (f.size() != 6) throw InvalidArgument("malformed macro metadata");
        MacroBs m;
        m.position = Point(text::parse_double(f[0]), text::parse_double(f[1]));
        m.height = text::parse_double(f[2]);
        m.tx_power = text::parse_double(f[3]);
        m.radius = text::parse_double(f[4]);
        m.n_sectors = text::parse_int<std::size_t>(f[5]);
        d.macro = m;
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto f = text::split(line, ',');
    if (f.size() != 8) throw InvalidArgument("malformed deployment row '" + line + "'");
    Fap fap;
    fap.id = FapId{text::parse_int<std::uint32_t>(f[0])};
    if (fap.id.value != d.faps.size()) throw InvalidArgument("deployment ids must be contiguous");
    fap.position = Point(text::parse_double(f[1]), text::parse_double(f[2]));
    fap.sector_index = text::parse_int<std::size_t>(f[3]);
    fap.tx_power = text::parse_double(f[4]);
    fap.radius = text::parse_double(f[6]);
    fap.height = text::parse_double(f[7]);
    fap.allocation.edge_choice = edge_choice_from_string(f[5]);
    fap.allocation.sector_index = fap.sector_index;
    if (plan) fap.allocation.center = plan->center_band_per_sector.at(fap.sector_index);
    d.faps.push_back(fap);
  }
  return d;
}

}  // namespace femto
