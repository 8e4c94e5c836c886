#include "femto/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include "text.hpp"

namespace femto {

namespace {

struct Field {
  std::string_view key;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

double parse_db(std::string_view v) {
  v = text::trim(v);
  if (v.size() >= 2) {
    const auto tail = v.substr(v.size() - 2);
    if ((tail[0] == 'd' || tail[0] == 'D') && (tail[1] == 'b' || tail[1] == 'B')) {
      v = text::trim(v.substr(0, v.size() - 2));
    }
  }
  return text::parse_double(v);
}

template <typename T>
Field numeric(std::string_view key, T ExperimentConfig::*member) {
  return Field{key,
               [member](ExperimentConfig& c, std::string_view v) {
                 if constexpr (std::is_floating_point_v<T>) {
                   c.*member = text::parse_double(text::trim(v));
                 } else {
                   c.*member = text::parse_int<T>(text::trim(v));
                 }
               },
               [member](const ExperimentConfig& c) {
                 if constexpr (std::is_floating_point_v<T>) {
                   return text::fmt(c.*member);
                 } else {
                   return std::to_string(c.*member);
                 }
               }};
}

Field decibel(std::string_view key, double ExperimentConfig::*member) {
  return Field{key, [member](ExperimentConfig& c, std::string_view v) { c.*member = parse_db(v); },
               [member](const ExperimentConfig& c) { return text::fmt(c.*member); }};
}

Field word(std::string_view key, std::string ExperimentConfig::*member) {
  return Field{key, [member](ExperimentConfig& c, std::string_view v) { c.*member = std::string(text::trim(v)); },
               [member](const ExperimentConfig& c) { return c.*member; }};
}

const std::vector<Field>& fields() {
  using C = ExperimentConfig;
  static const std::vector<Field> table = {
      numeric("macro_radius", &C::macro_radius),
      numeric("femto_radius", &C::femto_radius),
      numeric("reference_distance", &C::reference_distance),
      numeric("neighbor_radius", &C::neighbor_radius),
      numeric("carrier_hz", &C::carrier_hz),
      numeric("macro_tx_power", &C::macro_tx_power),
      numeric("fap_max_power", &C::fap_max_power),
      numeric("macro_height", &C::macro_height),
      numeric("fap_height", &C::fap_height),
      numeric("n_sectors", &C::n_sectors),
      numeric("eta_desired", &C::eta_desired),
      numeric("eta_femto_interf", &C::eta_femto_interf),
      numeric("eta_macro", &C::eta_macro),
      decibel("macro_loss_at_1km_db", &C::macro_loss_at_1km_db),
      decibel("wall_loss_db", &C::wall_loss_db),
      numeric("walls_between_femtos", &C::walls_between_femtos),
      numeric("band_lower_hz", &C::band_lower_hz),
      numeric("band_upper_hz", &C::band_upper_hz),
      numeric("femto_fraction", &C::femto_fraction),
      numeric("edge_split", &C::edge_split),
      decibel("gamma_db", &C::gamma_db),
      numeric("ue_distance", &C::ue_distance),
      word("ue_region", &C::ue_region),
      numeric("inner_radius_fraction", &C::inner_radius_fraction),
      word("ue_direction", &C::ue_direction),
      numeric("n_trials", &C::n_trials),
      numeric("shards", &C::shards),
      numeric("n_deployments", &C::n_deployments),
      Field{"schemes",
            [](C& c, std::string_view v) {
              c.schemes.clear();
              for (auto part : text::split(v, ',')) c.schemes.push_back(scheme_from_string(text::trim(part)));
            },
            [](const C& c) {
              std::string out;
              for (std::size_t i = 0; i < c.schemes.size(); ++i) {
                if (i) out += ',';
                out += to_string(c.schemes[i]);
              }
              return out;
            }},
      Field{"densities",
            [](C& c, std::string_view v) {
              c.densities.clear();
              for (auto part : text::split(v, ',')) c.densities.push_back(text::parse_int<std::size_t>(text::trim(part)));
            },
            [](const C& c) {
              std::string out;
              for (std::size_t i = 0; i < c.densities.size(); ++i) {
                if (i) out += ',';
                out += std::to_string(c.densities[i]);
              }
              return out;
            }},
      numeric("n_faps", &C::n_faps),
      numeric("seed", &C::seed),
      word("out", &C::out),
  };
  return table;
}

}  // namespace

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  key = text::trim(key);
  const auto& table = fields();
  auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return f.key == key; });
  if (it == table.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
  try {
    it->set(*this, value);
  } catch (const InvalidArgument& e) {
    throw ConfigError("bad value for '" + std::string(key) + "': " + e.what());
  }
}

ExperimentConfig ExperimentConfig::parse(std::string_view body) {
  ExperimentConfig c;
  std::size_t line_no = 0;
  for (auto raw : text::split(body, '\n')) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    c.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string ExperimentConfig::to_text(bool include_output) const {
  std::string out;
  for (const Field& f : fields()) {
    if (!include_output && f.key == "out") continue;
    out += f.key;
    out += '=';
    out += f.get(*this);
    out += '\n';
  }
  return out;
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_text(false)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

PropagationParams ExperimentConfig::propagation() const {
  PropagationParams p;
  p.carrier_hz = carrier_hz;
  p.eta_desired = eta_desired;
  p.eta_femto_interf = eta_femto_interf;
  p.eta_macro = eta_macro;
  p.p0_femto = free_space_gain_1m(carrier_hz);
  p.p0_macro = db_to_linear(-macro_loss_at_1km_db) * std::pow(1000.0, eta_macro);
  p.wall_loss_db = wall_loss_db;
  p.walls_between_femtos = walls_between_femtos;
  return p;
}

DeploymentParams ExperimentConfig::deployment() const {
  DeploymentParams d;
  d.macro_radius = macro_radius;
  d.macro_height = macro_height;
  d.macro_tx_power = macro_tx_power;
  d.n_sectors = n_sectors;
  d.n_faps = n_faps;
  d.femto_radius = femto_radius;
  d.fap_height = fap_height;
  d.fap_max_power = fap_max_power;
  d.neighbor_radius = neighbor_radius;
  d.reference_distance = reference_distance;
  return d;
}

PlanOptions ExperimentConfig::plan() const {
  PlanOptions p;
  p.total_band = Band{band_lower_hz, band_upper_hz};
  p.n_sectors = n_sectors;
  p.femto_fraction = femto_fraction;
  p.edge_split = edge_split;
  return p;
}

OutageConfig ExperimentConfig::outage() const {
  OutageConfig o;
  o.gamma_db = gamma_db;
  o.n_trials = n_trials;
  o.ue_distance = ue_distance;
  o.shards = shards;
  if (ue_region == "center") {
    o.ue_region = UeRegion::Center;
  } else if (ue_region == "edge") {
    o.ue_region = UeRegion::Edge;
  } else if (ue_region == "auto") {
    // Outside the inner circle the UE is served on the edge band.
    o.ue_region = ue_distance >= inner_radius_fraction * femto_radius ? UeRegion::Edge : UeRegion::Center;
  } else {
    throw ConfigError("ue_region must be auto, center or edge");
  }
  if (ue_direction == "nearest") {
    o.ue_direction = UeDirection::TowardNearestNeighbor;
  } else if (ue_direction == "random") {
    o.ue_direction = UeDirection::Random;
  } else {
    throw ConfigError("ue_direction must be nearest or random");
  }
  return o;
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(macro_radius > 0.0, "macro_radius must be positive");
  require(femto_radius > 0.0, "femto_radius must be positive");
  require(neighbor_radius > 0.0, "neighbor_radius must be positive");
  require(reference_distance > 0.0 && reference_distance <= macro_radius,
          "reference_distance must lie in (0, macro_radius]");
  require(macro_tx_power > 0.0 && fap_max_power > 0.0, "transmit powers must be positive");
  require(n_trials >= 1, "n_trials must be at least 1");
  require(shards >= 1, "shards must be at least 1");
  require(n_deployments >= 1 && n_deployments <= n_trials, "n_deployments must lie in [1, n_trials]");
  require(ue_distance > 0.0 && ue_distance <= femto_radius, "ue_distance must lie in (0, femto_radius]");
  require(inner_radius_fraction > 0.0 && inner_radius_fraction <= 1.0,
          "inner_radius_fraction must lie in (0, 1]");
  require(!schemes.empty(), "schemes must not be empty");
  require(!densities.empty(), "densities must not be empty");
  for (std::size_t i = 1; i < densities.size(); ++i) {
    require(densities[i] > densities[i - 1], "densities must be strictly increasing");
  }
  require(densities.front() >= 1 && n_faps >= 1, "FAP counts must be positive");
  require(!out.empty(), "out must name a file");
  try {
    propagation().validate();
    outage().validate();
    for (Scheme s : schemes) {
      PlanOptions p = plan();
      p.scheme = s;
      build_plan(p);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<std::string> experiment_names() { return {"fig5", "fig6", "son-ablation"}; }

SweepSettings sweep_settings(const ExperimentConfig& c, std::string_view experiment, std::size_t workers) {
  c.validate();
  SweepSettings s;
  s.deployment = c.deployment();
  s.plan = c.plan();
  s.outage = c.outage();
  s.propagation = c.propagation();
  s.n_deployments = c.n_deployments;
  s.seed = c.seed;
  s.workers = workers;

  if (experiment == "fig5") {
    s.densities = {c.n_faps};
    for (Scheme sc : c.schemes) s.arms.push_back(SweepArm{sc, ColoringMode::Greedy});
  } else if (experiment == "fig6") {
    s.densities = c.densities;
    for (Scheme sc : c.schemes) s.arms.push_back(SweepArm{sc, ColoringMode::Greedy});
  } else if (experiment == "son-ablation") {
    s.densities = {c.n_faps};
    s.arms = {SweepArm{Scheme::DynamicReuse, ColoringMode::Greedy},
              SweepArm{Scheme::DynamicReuse, ColoringMode::UniformRandom},
              SweepArm{Scheme::DynamicReuse, ColoringMode::SharedEdge}};
  } else {
    throw ConfigError("unknown experiment '" + std::string(experiment) + "'");
  }
  return s;
}

std::string render_csv(const ExperimentConfig& c, std::string_view experiment,
                       const std::vector<SweepRow>& rows) {
  std::string out;
  out += "# tool=femtosim " + std::string(kToolVersion) + '\n';
  out += "# experiment=" + std::string(experiment) + '\n';
  out += "# config_hash=" + c.hash() + '\n';
  out += "# seed=" + std::to_string(c.seed) + '\n';
  const std::string effective = c.to_text(false);
  for (auto line : text::split(effective, '\n')) {
    if (!line.empty()) out += "# config." + std::string(line) + '\n';
  }
  out += "scheme,density,p_out_closed,p_out_mc,ci95,n_trials,seed\n";
  for (const SweepRow& r : rows) {
    out += r.label + ',' + std::to_string(r.density) + ',' + text::fmt(r.estimate.p_out_closed) + ',' +
           text::fmt(r.estimate.p_out_mc) + ',' + text::fmt(r.estimate.ci95_halfwidth) + ',' +
           std::to_string(r.estimate.n_trials) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

std::string run_experiment(const ExperimentConfig& c, std::string_view experiment, std::size_t workers) {
  const SweepSettings s = sweep_settings(c, experiment, workers);
  return render_csv(c, experiment, density_sweep(s));
}

void write_atomically(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!os) {
      os.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace femto
