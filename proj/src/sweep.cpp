#include "femto/sweep.hpp"

#include <algorithm>

#include "femto/random.hpp"
#include "femto/son.hpp"

namespace femto {

std::string SweepArm::label() const {
  std::string name(to_string(scheme));
  if (scheme == Scheme::DynamicReuse) {
    if (coloring == ColoringMode::UniformRandom) name += "/random";
    if (coloring == ColoringMode::SharedEdge) name += "/shared";
  }
  return name;
}

std::vector<SweepRow> density_sweep(const SweepSettings& s) {
  if (s.densities.empty()) throw InvalidArgument("density list is empty");
  if (!std::is_sorted(s.densities.begin(), s.densities.end()) ||
      std::adjacent_find(s.densities.begin(), s.densities.end()) != s.densities.end()) {
    throw InvalidArgument("densities must be strictly increasing");
  }
  if (s.arms.empty()) throw InvalidArgument("no schemes to evaluate");
  if (s.n_deployments < 1 || s.n_deployments > s.outage.n_trials) {
    throw InvalidArgument("n_deployments must lie in [1, n_trials]");
  }
  s.outage.validate();
  s.propagation.validate();

  std::vector<FrequencyPlan> plans;
  for (const SweepArm& arm : s.arms) {
    PlanOptions po = s.plan;
    po.scheme = arm.scheme;
    plans.push_back(build_plan(po));
  }

  std::vector<std::vector<OutageTally>> tallies(s.densities.size(),
                                                std::vector<OutageTally>(s.arms.size()));
  for (std::size_t di = 0; di < s.densities.size(); ++di) {
    DeploymentParams dp = s.deployment;
    dp.n_faps = s.densities[di];
    // Every density is evaluated under uniform dense-style placement.
    dp.dense_threshold = 1;
    for (std::size_t r = 0; r < s.n_deployments; ++r) {
      // Seeds are independent of density: lower densities are prefixes of higher ones.
      const std::uint64_t dep_seed = derive_seed(s.seed, r);
      const Deployment base = generate(ScenarioKind::D, dp, dep_seed);
      const NeighborGraph graph = neighbor_graph(base, dp.neighbor_radius);

      OutageConfig oc = s.outage;
      oc.n_trials = s.outage.n_trials / s.n_deployments + (r < s.outage.n_trials % s.n_deployments ? 1 : 0);

      for (std::size_t a = 0; a < s.arms.size(); ++a) {
        Deployment d = base;
        assign_plan(d, plans[a]);
        if (plans[a].has_edges()) {
          switch (s.arms[a].coloring) {
            case ColoringMode::Greedy: {
              EventLog log;
              configure_frequencies(d, graph, plans[a], log);
              break;
            }
            case ColoringMode::UniformRandom: {
              Rng rng = make_rng(dep_seed, {stream::kColoring});
              random_coloring(d, graph, plans[a], rng);
              break;
            }
            case ColoringMode::SharedEdge:
              shared_edge_coloring(d, graph, plans[a]);
              break;
          }
        }
        const Point ue = place_ue(d, graph, FapId{0}, oc.ue_distance, oc.ue_direction, dep_seed);
        const LinkBudget budget = link_budget(d, graph, FapId{0}, ue, plans[a], oc.ue_region, s.propagation);
        tallies[di][a].merge(accumulate(budget, oc, dep_seed, s.workers));
      }
    }
  }

  std::vector<SweepRow> rows;
  for (std::size_t di = 0; di < s.densities.size(); ++di) {
    for (std::size_t a = 0; a < s.arms.size(); ++a) {
      rows.push_back(SweepRow{s.arms[a].label(), s.densities[di],
                              OutageEstimate::from_tally(tallies[di][a]), s.seed});
    }
  }
  return rows;
}

}  // namespace femto
