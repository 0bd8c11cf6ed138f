#ifndef RESTIE_SYNTH_HPP
#define RESTIE_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "restie/geojson.hpp"
#include "restie/sci.hpp"

namespace restie::synth {

// Parameters of the synthetic community generator: a grid of unit-square
// zones with spatially smoothed income, income-correlated flood coverage and
// gravity-plus-income-homophily social edges.
struct SynthParams {
    std::uint32_t grid_w = 20;
    std::uint32_t grid_h = 20;
    double income_low = 30000.0;
    double income_high = 120000.0;
    double income_smoothness = 2.0;  // box-filter radius in cells
    double flood_income_corr = 0.5;  // gamma in [-1, 1]; > 0 floods poorer cells
    double homophily_strength = 2.0; // h >= 0, income-similarity preference
    double distance_decay = 0.1;     // d >= 0
    double edges_per_zone = 10.0;    // target mean degree
    std::uint64_t seed = 1;
};

struct Community {
    std::vector<geo::Zone> zones;
    std::vector<geo::FloodLayer> flood_layers; // "100yr" and "500yr" by cell parity
    sci::EdgeList edges;
    std::vector<double> flood_fraction; // per zone, the planted coverage in [0,1]
};

// Fully deterministic for a given params+seed.
Community generate_community(const SynthParams& params);

// Canonical single-order TSV with the ingest header.
std::string edges_to_tsv(const sci::EdgeList& edges);

// Writes zones.geojson, flood_100yr.geojson, flood_500yr.geojson, sci.tsv.
void write_community(const Community& community, const std::string& out_dir);

} // namespace restie::synth

#endif
