#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace femto {

/// Thrown when an operation's preconditions are violated by its inputs.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Hertz = std::uint64_t;

/// Half-open frequency interval [lower, upper) in integer Hz. Never empty.
class Band {
 public:
  Band(Hertz lower, Hertz upper);

  Hertz lower() const { return lower_; }
  Hertz upper() const { return upper_; }
  Hertz width() const { return upper_ - lower_; }

  bool contains(Hertz f) const { return f >= lower_ && f < upper_; }
  bool contains(const Band& other) const {
    return other.lower_ >= lower_ && other.upper_ <= upper_;
  }
  bool intersects(const Band& other) const {
    return lower_ < other.upper_ && other.lower_ < upper_;
  }

  auto operator<=>(const Band&) const = default;

 private:
  Hertz lower_;
  Hertz upper_;
};

/// Splits `band` into `parts` contiguous sub-bands whose widths differ by at
/// most 1 Hz and sum exactly to the parent width.
std::vector<Band> split_equal(const Band& band, std::size_t parts);

enum class Scheme { Dedicated, Same, Partial, DynamicReuse };

std::string_view to_string(Scheme scheme);
Scheme scheme_from_string(std::string_view name);

enum class EdgeChoice : std::uint8_t { None, X, Y, Z };

std::string_view to_string(EdgeChoice choice);
EdgeChoice edge_choice_from_string(std::string_view name);

/// Index 0..2 of an X/Y/Z choice. Undefined for None.
inline std::size_t edge_index(EdgeChoice c) { return static_cast<std::size_t>(c) - 1; }
inline EdgeChoice edge_from_index(std::size_t i) { return static_cast<EdgeChoice>(i + 1); }

enum class UeRegion { Center, Edge };

/// Band assignment for one femtocell: the shared center band plus at most one
/// edge band. Holding a single enum makes "a + b + c <= 1" unrepresentable
/// rather than checked.
struct FemtoAllocation {
  Band center;
  EdgeChoice edge_choice = EdgeChoice::None;
  std::size_t sector_index = 0;
};

using EdgeTriple = std::array<Band, 3>;

/// Per-scheme partition of the cellular band among macro sectors and femtos.
struct FrequencyPlan {
  Scheme scheme = Scheme::Same;
  Band total{0, 1};
  std::vector<Band> macro_sector_bands;
  std::vector<Band> center_band_per_sector;
  /// Empty unless scheme == DynamicReuse.
  std::vector<EdgeTriple> edge_bands_per_sector;
  double femto_band_fraction = 1.0;
  /// Number of femto sub-bands available inside one sector.
  std::size_t q = 1;

  std::size_t n_sectors() const { return macro_sector_bands.size(); }
  bool has_edges() const { return !edge_bands_per_sector.empty(); }
};

struct PlanOptions {
  Scheme scheme = Scheme::DynamicReuse;
  Band total_band{0, 60'000'000};
  std::size_t n_sectors = 3;
  double femto_fraction = 1.0 / 3.0;
  /// Fraction of a sector's femto spectrum carried by the three edge bands.
  /// 0.5 means one whole non-local sector band becomes edge spectrum.
  double edge_split = 0.5;
};

FrequencyPlan build_plan(const PlanOptions& options);

/// Macro-cell view used as the "other" party of a co-channel test.
struct MacroSector {
  std::size_t index = 0;
};

/// {center} or {center, chosen edge band}.
std::vector<Band> bands_for_femto(const FrequencyPlan& plan, const FemtoAllocation& alloc);

/// Band the reference UE is served on.
Band serving_band(const FrequencyPlan& plan, const FemtoAllocation& alloc, UeRegion region);

/// X_i: 1 iff the band serving the reference UE overlaps any band of `other`.
bool cochannel(const FrequencyPlan& plan, const FemtoAllocation& ref, UeRegion region,
               const FemtoAllocation& other);

/// Y: 1 iff the reference femto's active band overlaps the macro sector band.
bool cochannel(const FrequencyPlan& plan, const FemtoAllocation& ref, UeRegion region,
               const MacroSector& macro);

/// Line-oriented key=value block describing the plan.
std::string to_config_block(const FrequencyPlan& plan);
FrequencyPlan plan_from_config_block(std::string_view text);

}  // namespace femto
