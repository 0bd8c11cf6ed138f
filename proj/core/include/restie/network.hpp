#ifndef RESTIE_NETWORK_HPP
#define RESTIE_NETWORK_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "restie/geojson.hpp"
#include "restie/overlay.hpp"
#include "restie/sci.hpp"
#include "restie/stats.hpp"

namespace restie::net {

enum class Group : std::uint8_t { Unassigned = 0, G1, G2, G3, G4 };

const char* to_string(Group g);
const char* to_string(overlay::ExposureClass c);

struct AnalysisConfig {
    bool include_self_loops = false;
    std::uint64_t min_edge_weight = 0; // 0 keeps all
    std::optional<std::uint32_t> top_k_per_node;
    stats::SkewnessVariant skewness_variant = stats::SkewnessVariant::Adjusted;
    // median tie rule is fixed: value >= median classifies high
};

struct NetworkBuildStats {
    std::uint64_t edges_in = 0;
    std::uint64_t dropped_nonstudy = 0;
    std::uint64_t dropped_below_min_weight = 0;
    std::uint64_t dropped_self_loops = 0;
    std::uint64_t dropped_by_top_k = 0;
    std::uint64_t edges_kept = 0;
};

class SocioSpatialNetwork {
public:
    struct Edge {
        std::uint32_t a = 0;
        std::uint32_t b = 0; // a <= b
        std::uint64_t weight = 0;
    };

    std::vector<std::string> zone_ids;               // node index -> id
    std::vector<overlay::ExposureClass> exposure;    // per node
    std::vector<double> fp_rate;                     // per node, percent
    std::vector<Edge> edges;                         // canonical, sorted
    AnalysisConfig config;
    NetworkBuildStats build_stats;

    std::size_t node_count() const { return zone_ids.size(); }
    std::optional<std::uint32_t> index_of(std::string_view zone_id) const;

    // neighbor list (self-loop listed once under its own index)
    const std::vector<std::pair<std::uint32_t, std::uint64_t>>&
    neighbors(std::uint32_t node) const {
        return adjacency_[node];
    }

    void rebuild_index();

private:
    std::unordered_map<std::string, std::uint32_t, sci::StringHash,
                       std::equal_to<>>
        index_;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> adjacency_;
};

// Exact integer form of the resourceful tie rate: numerator is connectedness
// received from L-class neighbors, denominator total connectedness.
struct RateFraction {
    std::uint64_t low_sum = 0;
    std::uint64_t total_sum = 0;

    bool defined() const { return total_sum > 0; }
    double percent() const {
        return 100.0 * (static_cast<double>(low_sum) /
                        static_cast<double>(total_sum));
    }
};

struct ZoneMetrics {
    std::string zone_id;
    double fp_rate = 0.0;
    overlay::ExposureClass exposure_class = overlay::ExposureClass::Unassigned;
    std::uint64_t sum_of_sc = 0;
    RateFraction rate_fraction;
    std::optional<double> res_tie_rate; // percent, when defined
    Group group = Group::Unassigned;
};

// Median split of fp_rate: >= median is H, else L. Mutates exposure_class in
// place and returns the median. Needs >= 2 zones.
double classify_exposure(std::vector<overlay::HazardExposure>& exposures);

// Assembles the network under the config policies: non-study edges dropped
// and counted, weights below min_edge_weight dropped, self-loops kept only
// when configured, and with top_k an edge survives iff it ranks within the
// top k by weight at either endpoint (ties broken by neighbor index).
SocioSpatialNetwork build_network(
    const std::vector<geo::Zone>& zones,
    const std::vector<overlay::HazardExposure>& exposures,
    const sci::EdgeList& edges, const AnalysisConfig& config);

std::uint64_t sum_of_sc(const SocioSpatialNetwork& net, std::string_view zone_id);

RateFraction res_tie_fraction(const SocioSpatialNetwork& net, std::uint32_t node);

// Percent of zone i's connectedness received from L neighbors; nullopt for
// an isolated node (zero denominator).
std::optional<double> res_tie_rate(const SocioSpatialNetwork& net,
                                   std::string_view zone_id);

// All per-zone metrics except groups.
std::vector<ZoneMetrics> compute_zone_metrics(const SocioSpatialNetwork& net);

// Quadrant split on the median of defined res_tie_rates:
//   G1 = L & rho < median, G2 = L & rho >= median,
//   G3 = H & rho >= median, G4 = H & rho < median.
// Zones with undefined rho stay Unassigned. Returns the median; needs >= 2
// defined values.
double assign_groups(std::vector<ZoneMetrics>& metrics);

} // namespace restie::net

#endif
