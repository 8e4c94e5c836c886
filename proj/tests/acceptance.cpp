// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "femto/experiment.hpp"
#include "femto/outage.hpp"
#include "femto/son.hpp"
#include "femto/sweep.hpp"
#include "stats.hpp"

using namespace femto;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Default deployment with FAP 0 as reference.
struct Scene {
  Deployment d;
  NeighborGraph g;
  FrequencyPlan plan;
};

Scene default_scene(Scheme scheme, std::uint64_t seed) {
  const ExperimentConfig c;
  Scene s;
  const auto dp = c.deployment();
  s.d = generate(ScenarioKind::D, dp, seed);
  auto po = c.plan();
  po.scheme = scheme;
  s.plan = build_plan(po);
  assign_plan(s.d, s.plan);
  s.g = neighbor_graph(s.d, dp.neighbor_radius);
  if (s.plan.has_edges()) {
    EventLog log;
    configure_frequencies(s.d, s.g, s.plan, log);
  }
  return s;
}

Verdict closed_vs_mc() {
  const ExperimentConfig c;
  auto oc = c.outage();
  oc.n_trials = 100000;
  Verdict v{true, ""};
  for (Scheme scheme : {Scheme::Same, Scheme::Dedicated}) {
    const auto s = default_scene(scheme, 2024);
    const auto e = estimate(s.d, s.g, FapId{0}, s.plan, oc, c.propagation(), 2024);
    const double se = std::hypot(e.se_closed, e.se_mc);
    const double gap = std::abs(e.p_out_closed - e.p_out_mc);
    v.pass = v.pass && gap < 3.0 * se;
    v.detail += std::string(to_string(scheme)) + ": closed=" + num(e.p_out_closed) + " mc=" + num(e.p_out_mc) +
                " |diff|=" + num(gap) + " 3se=" + num(3.0 * se) + "; ";
  }
  return v;
}

Verdict scheme_ordering() {
  ExperimentConfig c;
  c.n_faps = 1000;
  const auto rows = density_sweep(sweep_settings(c, "fig5", 1));
  std::map<std::string, OutageEstimate> by;
  for (const auto& r : rows) by[r.label] = r.estimate;
  const auto& dyn = by.at("DynamicReuse");
  const auto& ded = by.at("Dedicated");
  const auto& same = by.at("Same");
  const auto& part = by.at("Partial");
  const bool order = dyn.p_out_closed < ded.p_out_closed && ded.p_out_closed < same.p_out_closed;
  const bool partial_eq = std::abs(part.p_out_closed - same.p_out_closed) <= same.se_closed;
  const double factor = ded.p_out_closed / dyn.p_out_closed;
  const bool factor_ok = factor >= 2.0;
  return {order && partial_eq && factor_ok,
          "dynamic=" + num(dyn.p_out_closed) + " dedicated=" + num(ded.p_out_closed) + " same=" +
              num(same.p_out_closed) + " partial=" + num(part.p_out_closed) + " dedicated/dynamic=" + num(factor)};
}

Verdict zero_interference() {
  const ExperimentConfig c;
  auto oc = c.outage();
  oc.n_trials = 20000;
  const auto params = c.propagation();
  std::vector<double> values;

  Deployment a = generate(ScenarioKind::A, c.deployment(), 1);
  const auto same = build_plan(PlanOptions{Scheme::Same});
  assign_plan(a, same);
  auto e = estimate(a, neighbor_graph(a, 100.0), FapId{0}, same, oc, params, 1);
  values.insert(values.end(), {e.p_out_closed, e.p_out_mc});

  // Dense deployment, reference on edge band X and every neighbor moved off it.
  auto s = default_scene(Scheme::DynamicReuse, 7);
  s.d.faps[0].allocation.edge_choice = EdgeChoice::X;
  std::size_t k = 0;
  for (FapId n : s.g.neighbors(FapId{0})) s.d.fap(n).allocation.edge_choice = (k++ % 2) ? EdgeChoice::Y : EdgeChoice::Z;
  e = estimate(s.d, s.g, FapId{0}, s.plan, oc, params, 7);
  values.insert(values.end(), {e.p_out_closed, e.p_out_mc});

  bool pass = k > 0;
  std::string detail = "neighbors=" + std::to_string(k);
  for (double x : values) {
    pass = pass && x == 0.0;
    detail += " " + num(x);
  }
  return {pass, detail};
}

Verdict coloring_floor() {
  const ExperimentConfig c;
  const auto dp = c.deployment();
  const auto plan = build_plan(c.plan());
  std::vector<double> greedy, random, diff;
  for (std::uint64_t r = 0; r < 20; ++r) {
    const std::uint64_t seed = derive_seed(c.seed, r);
    Deployment d = generate(ScenarioKind::D, dp, seed);
    assign_plan(d, plan);
    const auto g = neighbor_graph(d, dp.neighbor_radius);
    Deployment dr = d;
    EventLog log;
    configure_frequencies(d, g, plan, log);
    Rng rng = make_rng(seed, {stream::kColoring});
    random_coloring(dr, g, plan, rng);
    greedy.push_back(non_cochannel_fraction(d, g, plan, UeRegion::Edge));
    random.push_back(non_cochannel_fraction(dr, g, plan, UeRegion::Edge));
    diff.push_back(greedy.back() - random.back());
  }
  const double mg = test::mean(greedy);
  const double md = test::mean(diff);
  const double se = std::sqrt(test::sample_variance(diff) / static_cast<double>(diff.size()));
  return {mg >= 2.0 / 3.0 && md > 3.0 * se,
          "greedy=" + num(mg) + " random=" + num(test::mean(random)) + " paired diff=" + num(md) + " 3se=" +
              num(3.0 * se)};
}

Verdict poisson_neighbors() {
  const ExperimentConfig c;
  const auto dp = c.deployment();
  const Deployment d = generate(ScenarioKind::D, dp, c.seed);
  const auto g = neighbor_graph(d, dp.neighbor_radius);
  const std::size_t kmax = 40;
  std::vector<double> obs(kmax + 1, 0.0);
  double m = 0.0;
  for (const Fap& f : d.faps) {
    if (f.position.norm() > dp.macro_radius - dp.neighbor_radius) continue;
    obs[std::min(kmax, g.neighbors(f.id).size())] += 1.0;
    m += 1.0;
  }
  const double lambda = 10.0;
  std::vector<double> expd(kmax + 1, 0.0);
  double cdf = 0.0;
  for (std::size_t k = 0; k < kmax; ++k) {
    expd[k] = m * test::poisson_pmf(k, lambda);
    cdf += test::poisson_pmf(k, lambda);
  }
  expd[kmax] = m * (1.0 - cdf);
  const auto r = test::chi_square(obs, expd, 0.01);
  return {r.pass(), "interior=" + num(m) + " chi2=" + num(r.statistic) + " critical=" + num(r.critical) +
                        " dof=" + std::to_string(r.dof)};
}

Verdict density_monotone() {
  ExperimentConfig c;
  c.densities = {100, 300, 1000, 3000};
  const auto rows = density_sweep(sweep_settings(c, "fig6", 1));
  std::map<std::string, std::vector<const SweepRow*>> by;
  for (const auto& r : rows) by[r.label].push_back(&r);
  bool pass = by.size() == 4;
  std::string detail;
  for (const auto& [label, series] : by) {
    detail += label + ":";
    for (std::size_t i = 0; i < series.size(); ++i) {
      detail += " " + num(series[i]->estimate.p_out_closed);
      if (i == 0) continue;
      const auto& lo = series[i - 1]->estimate;
      const auto& hi = series[i]->estimate;
      pass = pass && hi.p_out_closed >= lo.p_out_closed - 3.0 * std::hypot(lo.se_closed, hi.se_closed);
    }
    detail += "; ";
  }
  return {pass, detail};
}

Verdict determinism() {
  ExperimentConfig c;
  c.n_trials = 20000;
  c.n_deployments = 5;
  const auto a = run_experiment(c, "fig6", 1);
  const auto b = run_experiment(c, "fig6", 1);
  const auto p = run_experiment(c, "fig6", 8);
  return {a == b && a == p && !a.empty(), "bytes=" + std::to_string(a.size()) + " rerun equal=" +
                                              std::to_string(a == b) + " 1-vs-8 workers equal=" + std::to_string(a == p)};
}

Verdict factorization() {
  Rng rng = make_rng(1234);
  std::uniform_int_distribution<int> count(0, 50);
  std::uniform_real_distribution<double> lg_s(-9.0, -2.0);
  std::uniform_real_distribution<double> lg_x(-6.0, std::log10(50.0));
  std::uniform_real_distribution<double> lg_g(-1.0, 2.0);
  std::uniform_real_distribution<double> share(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double s = std::pow(10.0, lg_s(rng));
    const double gamma = std::pow(10.0, lg_g(rng));
    const double x = std::pow(10.0, lg_x(rng));  // target gamma * I / S
    std::vector<double> terms(static_cast<std::size_t>(count(rng)));
    double weight = 0.0;
    for (auto& t : terms) weight += (t = share(rng) + 1e-3);
    double total = 0.0;
    for (auto& t : terms) total += (t = t / weight * x * s / gamma);
    const double got = conditional_outage(s, total, gamma);
    long double survive = 1.0L;
    for (double t : terms) survive *= std::exp(-static_cast<long double>(gamma) * t / s);
    const long double want = 1.0L - survive;
    const double rel = want == 0.0L ? (got == 0.0 ? 0.0 : 1.0)
                                    : static_cast<double>(std::fabs(static_cast<long double>(got) - want) / want);
    worst = std::max(worst, rel);
  }
  return {worst <= 1e-12, "max relative error=" + num(worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 closed-form vs Monte Carlo", closed_vs_mc},
      {"2 scheme ordering at 1000 FAPs", scheme_ordering},
      {"3 zero-interference limit", zero_interference},
      {"4 coloring clear-pair floor", coloring_floor},
      {"5 Poisson neighbor counts", poisson_neighbors},
      {"6 density monotonicity", density_monotone},
      {"7 determinism", determinism},
      {"8 closed-form factorization", factorization},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %s (%.1fs): %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), secs, v.detail.c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
