#include "femto/outage.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "femto/random.hpp"

namespace femto {

void OutageConfig::validate() const {
  if (n_trials < 1) throw InvalidArgument("n_trials must be at least 1");
  if (!std::isfinite(gamma_db)) throw InvalidArgument("gamma_db must be finite");
  if (!(ue_distance > 0.0)) throw InvalidArgument("ue_distance must be positive");
  if (shards < 1) throw InvalidArgument("shards must be at least 1");
}

void OutageTally::merge(const OutageTally& o) {
  n += o.n;
  sum_closed += o.sum_closed;
  sumsq_closed += o.sumsq_closed;
  hits += o.hits;
  sum_diff += o.sum_diff;
  sumsq_diff += o.sumsq_diff;
}

namespace {

double standard_error(double sum, double sumsq, std::uint64_t n) {
  if (n < 2) return 0.0;
  const double dn = static_cast<double>(n);
  const double mean = sum / dn;
  const double var = std::max(0.0, (sumsq - dn * mean * mean) / (dn - 1.0));
  return std::sqrt(var / dn);
}

}  // namespace

OutageEstimate OutageEstimate::from_tally(const OutageTally& t) {
  OutageEstimate e;
  e.n_trials = t.n;
  if (t.n == 0) return e;
  const double n = static_cast<double>(t.n);
  e.p_out_closed = t.sum_closed / n;
  e.p_out_mc = static_cast<double>(t.hits) / n;
  const double pq = e.p_out_mc * (1.0 - e.p_out_mc);
  e.se_mc = std::sqrt(pq / n);
  e.ci95_halfwidth = 1.96 * e.se_mc;
  e.se_closed = standard_error(t.sum_closed, t.sumsq_closed, t.n);
  e.se_paired_diff = standard_error(t.sum_diff, t.sumsq_diff, t.n);
  return e;
}

double gamma_linear(double gamma_db) { return db_to_linear(gamma_db); }

double conditional_outage(double s_bar, double total_interference, double gamma_lin) {
  if (!(s_bar > 0.0)) throw InvalidArgument("mean desired power must be positive");
  if (!(total_interference >= 0.0)) throw InvalidArgument("interference must be non-negative");
  if (!(gamma_lin > 0.0)) throw InvalidArgument("SIR threshold must be positive");
  return -std::expm1(-gamma_lin * total_interference / s_bar);
}

double conditional_outage_product(double s_bar, std::span<const double> terms, double gamma_lin) {
  if (!(s_bar > 0.0)) throw InvalidArgument("mean desired power must be positive");
  double survive = 1.0;
  for (double t : terms) survive *= std::exp(-gamma_lin * t / s_bar);
  return 1.0 - survive;
}

Point place_ue(const Deployment& deployment, const NeighborGraph& graph, FapId reference,
               double distance, UeDirection direction, std::uint64_t seed) {
  const Fap& ref = deployment.fap(reference);
  Point dir(1.0, 0.0);
  if (direction == UeDirection::Random) {
    Rng rng = make_rng(seed, {stream::kUePlacement, reference.value});
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const double a = angle(rng);
    dir = Point(std::cos(a), std::sin(a));
  } else {
    double best = std::numeric_limits<double>::infinity();
    for (FapId n : graph.neighbors(reference)) {
      const Point delta = deployment.fap(n).position - ref.position;
      const double d = delta.norm();
      if (d > 0.0 && d < best) {
        best = d;
        dir = delta / d;
      }
    }
  }
  return ref.position + distance * dir;
}

namespace {

OutageTally run_shard(const LinkBudget& budget, double gamma_lin, std::size_t trials, Rng rng) {
  OutageTally t;
  const std::size_t k = budget.neighbor_count();
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const ChannelSample s = draw_sample(k, rng);
    const double interference = realized_interference(budget, s);
    const double closed = conditional_outage(budget.s_bar, interference, gamma_lin);
    // Direct SIR test: S_o / (I_m + I_f) < gamma.
    const double s_o = budget.s_bar * s.z0;
    const bool outage = interference > 0.0 && s_o / interference < gamma_lin;
    const double diff = (outage ? 1.0 : 0.0) - closed;
    ++t.n;
    t.sum_closed += closed;
    t.sumsq_closed += closed * closed;
    t.hits += outage ? 1 : 0;
    t.sum_diff += diff;
    t.sumsq_diff += diff * diff;
  }
  return t;
}

}  // namespace

OutageTally accumulate(const LinkBudget& budget, const OutageConfig& config, std::uint64_t seed,
                       std::size_t workers) {
  config.validate();
  const double gamma_lin = gamma_linear(config.gamma_db);
  const std::size_t shards = config.shards;
  std::vector<OutageTally> parts(shards);

  auto work = [&](std::size_t s) {
    const std::size_t trials = config.n_trials / shards + (s < config.n_trials % shards ? 1 : 0);
    parts[s] = run_shard(budget, gamma_lin, trials, make_rng(seed, {stream::kFading, s}));
  };

  workers = std::clamp<std::size_t>(workers, 1, shards);
  if (workers == 1) {
    for (std::size_t s = 0; s < shards; ++s) work(s);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t s = next++; s < shards; s = next++) work(s);
      });
    }
  }

  OutageTally total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

OutageEstimate estimate(const Deployment& deployment, const NeighborGraph& graph, FapId reference,
                        const FrequencyPlan& plan, const OutageConfig& config,
                        const PropagationParams& params, std::uint64_t seed, std::size_t workers) {
  config.validate();
  if (!deployment.contains(reference)) {
    throw InvalidArgument("reference FAP " + std::to_string(reference.value) + " is absent");
  }
  const Fap& ref = deployment.fap(reference);
  if (config.ue_distance > ref.radius) {
    throw InvalidArgument("ue_distance exceeds the reference femtocell radius");
  }
  const Point ue = place_ue(deployment, graph, reference, config.ue_distance, config.ue_direction, seed);
  const LinkBudget budget = link_budget(deployment, graph, reference, ue, plan, config.ue_region, params);
  return OutageEstimate::from_tally(accumulate(budget, config, seed, workers));
}

}  // namespace femto
