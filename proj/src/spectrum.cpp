#include "femto/spectrum.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace femto {

Band::Band(Hertz lower, Hertz upper) : lower_(lower), upper_(upper) {
  if (upper <= lower) {
    throw InvalidArgument("band must satisfy upper > lower, got [" + std::to_string(lower) +
                          ", " + std::to_string(upper) + ")");
  }
}

std::vector<Band> split_equal(const Band& band, std::size_t parts) {
  if (parts == 0 || parts > band.width()) {
    throw InvalidArgument("cannot split band of width " + std::to_string(band.width()) +
                          " into " + std::to_string(parts) + " parts");
  }
  std::vector<Band> out;
  out.reserve(parts);
  const Hertz base = band.width() / parts;
  const Hertz extra = band.width() % parts;
  Hertz lo = band.lower();
  for (std::size_t i = 0; i < parts; ++i) {
    // Remainder Hz go to the last sub-bands so the first one stays at the floor width.
    const Hertz w = base + (i >= parts - extra ? 1 : 0);
    out.emplace_back(lo, lo + w);
    lo += w;
  }
  return out;
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Dedicated: return "Dedicated";
    case Scheme::Same: return "Same";
    case Scheme::Partial: return "Partial";
    case Scheme::DynamicReuse: return "DynamicReuse";
  }
  return "?";
}

Scheme scheme_from_string(std::string_view name) {
  for (auto s : {Scheme::Dedicated, Scheme::Same, Scheme::Partial, Scheme::DynamicReuse}) {
    if (name == to_string(s)) return s;
  }
  throw InvalidArgument("unknown scheme '" + std::string(name) + "'");
}

std::string_view to_string(EdgeChoice choice) {
  switch (choice) {
    case EdgeChoice::None: return "None";
    case EdgeChoice::X: return "X";
    case EdgeChoice::Y: return "Y";
    case EdgeChoice::Z: return "Z";
  }
  return "?";
}

EdgeChoice edge_choice_from_string(std::string_view name) {
  for (auto c : {EdgeChoice::None, EdgeChoice::X, EdgeChoice::Y, EdgeChoice::Z}) {
    if (name == to_string(c)) return c;
  }
  throw InvalidArgument("unknown edge choice '" + std::string(name) + "'");
}

namespace {

Hertz scaled_width(Hertz width, double fraction) {
  return static_cast<Hertz>(std::llround(static_cast<double>(width) * fraction));
}

void require_fraction(double f, const char* what) {
  if (!(f > 0.0 && f < 1.0)) {
    throw InvalidArgument(std::string(what) + " must lie in (0, 1)");
  }
}

}  // namespace

FrequencyPlan build_plan(const PlanOptions& opt) {
  if (opt.n_sectors == 0) throw InvalidArgument("n_sectors must be positive");
  const Band& total = opt.total_band;

  FrequencyPlan plan;
  plan.scheme = opt.scheme;
  plan.total = total;

  switch (opt.scheme) {
    case Scheme::Same:
      plan.macro_sector_bands.assign(opt.n_sectors, total);
      plan.center_band_per_sector.assign(opt.n_sectors, total);
      plan.femto_band_fraction = 1.0;
      break;

    case Scheme::Dedicated: {
      require_fraction(opt.femto_fraction, "femto_fraction");
      const Hertz fw = scaled_width(total.width(), opt.femto_fraction);
      const Band femto{total.lower(), total.lower() + fw};
      const Band macro{femto.upper(), total.upper()};
      plan.macro_sector_bands.assign(opt.n_sectors, macro);
      plan.center_band_per_sector.assign(opt.n_sectors, femto);
      plan.femto_band_fraction = opt.femto_fraction;
      break;
    }

    case Scheme::Partial: {
      require_fraction(opt.femto_fraction, "femto_fraction");
      const Hertz fw = scaled_width(total.width(), opt.femto_fraction);
      plan.macro_sector_bands.assign(opt.n_sectors, total);
      plan.center_band_per_sector.assign(opt.n_sectors, Band{total.lower(), total.lower() + fw});
      plan.femto_band_fraction = opt.femto_fraction;
      break;
    }

    case Scheme::DynamicReuse: {
      if (opt.n_sectors < 3) {
        throw InvalidArgument("dynamic re-use needs at least 3 sectors");
      }
      if (!(opt.edge_split > 0.0 && opt.edge_split <= 0.5)) {
        throw InvalidArgument("edge_split must lie in (0, 0.5]");
      }
      const std::size_t n = opt.n_sectors;
      plan.macro_sector_bands = split_equal(total, n);
      plan.femto_band_fraction = static_cast<double>(n - 1) / static_cast<double>(n);
      for (std::size_t s = 0; s < n; ++s) {
        const Band& center = plan.macro_sector_bands[(s + 1) % n];
        const Band& host = plan.macro_sector_bands[(s + 2) % n];
        const Hertz ew = scaled_width(host.width(), 2.0 * opt.edge_split);
        // Edge spectrum sits at the top of the host band; any unused remainder is a guard.
        const Band edge_region{host.upper() - ew, host.upper()};
        const auto slices = split_equal(edge_region, 3);
        plan.center_band_per_sector.push_back(center);
        plan.edge_bands_per_sector.push_back({slices[0], slices[1], slices[2]});
      }
      plan.q = 4;
      break;
    }
  }
  return plan;
}

namespace {

void check_sector(const FrequencyPlan& plan, std::size_t sector) {
  if (sector >= plan.n_sectors()) {
    throw InvalidArgument("sector index " + std::to_string(sector) + " out of range for " +
                          std::to_string(plan.n_sectors()) + " sectors");
  }
}

const Band& edge_band(const FrequencyPlan& plan, const FemtoAllocation& alloc) {
  return plan.edge_bands_per_sector[alloc.sector_index][edge_index(alloc.edge_choice)];
}

}  // namespace

std::vector<Band> bands_for_femto(const FrequencyPlan& plan, const FemtoAllocation& alloc) {
  check_sector(plan, alloc.sector_index);
  std::vector<Band> out{alloc.center};
  if (plan.has_edges() && alloc.edge_choice != EdgeChoice::None) {
    out.push_back(edge_band(plan, alloc));
  }
  return out;
}

Band serving_band(const FrequencyPlan& plan, const FemtoAllocation& alloc, UeRegion region) {
  check_sector(plan, alloc.sector_index);
  if (region == UeRegion::Edge && plan.has_edges() && alloc.edge_choice != EdgeChoice::None) {
    return edge_band(plan, alloc);
  }
  return alloc.center;
}

bool cochannel(const FrequencyPlan& plan, const FemtoAllocation& ref, UeRegion region,
               const FemtoAllocation& other) {
  const Band serving = serving_band(plan, ref, region);
  for (const Band& b : bands_for_femto(plan, other)) {
    if (serving.intersects(b)) return true;
  }
  return false;
}

bool cochannel(const FrequencyPlan& plan, const FemtoAllocation& ref, UeRegion region,
               const MacroSector& macro) {
  check_sector(plan, macro.index);
  return serving_band(plan, ref, region).intersects(plan.macro_sector_bands[macro.index]);
}

namespace {

std::string band_text(const Band& b) {
  return std::to_string(b.lower()) + "," + std::to_string(b.upper());
}

Band parse_band(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) throw InvalidArgument("malformed band '" + std::string(text) + "'");
  auto parse = [&](std::string_view s) {
    Hertz v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
      throw InvalidArgument("malformed frequency '" + std::string(s) + "'");
    }
    return v;
  };
  return Band{parse(text.substr(0, comma)), parse(text.substr(comma + 1))};
}

}  // namespace

std::string to_config_block(const FrequencyPlan& plan) {
  std::ostringstream os;
  os.precision(17);
  os << "scheme=" << to_string(plan.scheme) << '\n';
  os << "total=" << band_text(plan.total) << '\n';
  os << "n_sectors=" << plan.n_sectors() << '\n';
  os << "femto_fraction=" << plan.femto_band_fraction << '\n';
  os << "q=" << plan.q << '\n';
  for (std::size_t s = 0; s < plan.n_sectors(); ++s) {
    os << "macro." << s << '=' << band_text(plan.macro_sector_bands[s]) << '\n';
    os << "center." << s << '=' << band_text(plan.center_band_per_sector[s]) << '\n';
    if (plan.has_edges()) {
      const auto& e = plan.edge_bands_per_sector[s];
      os << "edge." << s << '=' << band_text(e[0]) << ';' << band_text(e[1]) << ';'
         << band_text(e[2]) << '\n';
    }
  }
  return os.str();
}

FrequencyPlan plan_from_config_block(std::string_view text) {
  std::map<std::string, std::string, std::less<>> kv;
  std::istringstream is{std::string(text)};
  for (std::string line; std::getline(is, line);) {
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidArgument("malformed plan line '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw InvalidArgument("plan block missing key '" + key + "'");
    return it->second;
  };

  FrequencyPlan plan;
  plan.scheme = scheme_from_string(get("scheme"));
  plan.total = parse_band(get("total"));
  plan.femto_band_fraction = std::stod(get("femto_fraction"));
  plan.q = std::stoul(get("q"));
  const std::size_t n = std::stoul(get("n_sectors"));
  for (std::size_t s = 0; s < n; ++s) {
    const std::string idx = std::to_string(s);
    plan.macro_sector_bands.push_back(parse_band(get("macro." + idx)));
    plan.center_band_per_sector.push_back(parse_band(get("center." + idx)));
    if (auto it = kv.find("edge." + idx); it != kv.end()) {
      std::string_view v = it->second;
      const auto a = v.find(';');
      const auto b = v.find(';', a + 1);
      if (a == std::string_view::npos || b == std::string_view::npos) {
        throw InvalidArgument("malformed edge triple '" + it->second + "'");
      }
      plan.edge_bands_per_sector.push_back(
          {parse_band(v.substr(0, a)), parse_band(v.substr(a + 1, b - a - 1)), parse_band(v.substr(b + 1))});
    }
  }
  return plan;
}

}  // namespace femto
