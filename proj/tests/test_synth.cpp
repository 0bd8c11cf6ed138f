#include <doctest.h>

#include <cmath>
#include <set>

#include "restie/error.hpp"
#include "restie/geometry.hpp"
#include "restie/overlay.hpp"
#include "restie/sci.hpp"
#include "restie/stats.hpp"
#include "restie/synth.hpp"

using namespace restie;

namespace {

synth::SynthParams small_params(std::uint64_t seed) {
    synth::SynthParams p;
    p.grid_w = 10;
    p.grid_h = 10;
    p.edges_per_zone = 6.0;
    p.seed = seed;
    return p;
}

double mean_edge_income_gap(const synth::Community& c) {
    std::unordered_map<std::string, double> income;
    for (const auto& z : c.zones)
        income[z.zone_id] = z.median_household_income.value();
    double total = 0.0;
    for (const auto& e : c.edges.edges)
        total += std::abs(income[e.loc_a] - income[e.loc_b]);
    return total / static_cast<double>(c.edges.edges.size());
}

} // namespace

TEST_CASE("generator is deterministic") {
    const auto a = synth::generate_community(small_params(42));
    const auto b = synth::generate_community(small_params(42));
    REQUIRE(a.zones.size() == b.zones.size());
    REQUIRE(a.edges.edges.size() == b.edges.edges.size());
    for (std::size_t i = 0; i < a.zones.size(); ++i) {
        CHECK(a.zones[i].zone_id == b.zones[i].zone_id);
        CHECK(a.zones[i].median_household_income ==
              b.zones[i].median_household_income);
    }
    for (std::size_t i = 0; i < a.edges.edges.size(); ++i) {
        CHECK(a.edges.edges[i].loc_a == b.edges.edges[i].loc_a);
        CHECK(a.edges.edges[i].weight == b.edges.edges[i].weight);
    }
    CHECK(synth::edges_to_tsv(a.edges) == synth::edges_to_tsv(b.edges));

    const auto c = synth::generate_community(small_params(43));
    CHECK(synth::edges_to_tsv(a.edges) != synth::edges_to_tsv(c.edges));
}

TEST_CASE("generated geometry and edges pass the ingest validations") {
    const auto c = synth::generate_community(small_params(7));
    CHECK(c.zones.size() == 100);
    for (const auto& z : c.zones)
        CHECK(geo::validate_geometry(z.geometry).ok());
    for (const auto& layer : c.flood_layers)
        CHECK(geo::validate_geometry(layer.geometry).ok());

    std::vector<std::tuple<std::string, std::string, std::uint64_t>> rows;
    for (const auto& e : c.edges.edges)
        rows.emplace_back(e.loc_a, e.loc_b, e.weight);
    CHECK(sci::check_symmetry(rows).ok());

    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& e : c.edges.edges) {
        CHECK(e.weight >= 1);
        CHECK(e.loc_a < e.loc_b); // no self pairs, canonical order
        CHECK(pairs.emplace(e.loc_a, e.loc_b).second);
    }
}

TEST_CASE("flood fraction matches the planted coverage") {
    const auto c = synth::generate_community(small_params(11));
    const auto flood = overlay::union_layers(c.flood_layers);
    const auto rates = overlay::compute_fp_rates(c.zones, flood);
    for (std::size_t i = 0; i < c.zones.size(); ++i) {
        const double want = 100.0 * c.flood_fraction[i];
        if (want >= 1e-3)
            CHECK(std::abs(rates[i].fp_rate - want) < 1e-6);
    }
}

TEST_CASE("edge weights span up to the SCI ceiling") {
    const auto c = synth::generate_community(small_params(3));
    std::uint64_t max_w = 0;
    for (const auto& e : c.edges.edges) max_w = std::max(max_w, e.weight);
    CHECK(max_w == 1000000000ULL);
}

TEST_CASE("gamma=0 decorrelates income and flood coverage") {
    double total_corr = 0.0;
    const int seeds = 50;
    for (int s = 0; s < seeds; ++s) {
        auto p = small_params(1000 + s);
        p.flood_income_corr = 0.0;
        const auto c = synth::generate_community(p);
        std::vector<double> income, fraction;
        for (std::size_t i = 0; i < c.zones.size(); ++i) {
            income.push_back(c.zones[i].median_household_income.value());
            fraction.push_back(c.flood_fraction[i]);
        }
        total_corr += stats::pearson_correlation(income, fraction);
    }
    CHECK(std::abs(total_corr / seeds) < 0.1);
}

TEST_CASE("gamma>0 floods poorer cells") {
    auto p = small_params(5);
    p.flood_income_corr = 0.8;
    const auto c = synth::generate_community(p);
    std::vector<double> income, fraction;
    for (std::size_t i = 0; i < c.zones.size(); ++i) {
        income.push_back(c.zones[i].median_household_income.value());
        fraction.push_back(c.flood_fraction[i]);
    }
    CHECK(stats::pearson_correlation(income, fraction) < -0.5);
}

TEST_CASE("homophily strength shrinks the income gap across edges") {
    int smaller = 0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        auto weak = small_params(2000 + s);
        weak.homophily_strength = 0.0;
        auto strong = weak;
        strong.homophily_strength = 10.0;
        const double gap_weak =
            mean_edge_income_gap(synth::generate_community(weak));
        const double gap_strong =
            mean_edge_income_gap(synth::generate_community(strong));
        if (gap_strong < gap_weak) ++smaller;
    }
    CHECK(smaller == seeds);
}

TEST_CASE("parameter validation") {
    synth::SynthParams p;
    p.grid_w = 1;
    p.grid_h = 2;
    CHECK_THROWS_AS(synth::generate_community(p), UsageError);
    p = synth::SynthParams{};
    p.income_low = 100;
    p.income_high = 50;
    CHECK_THROWS_AS(synth::generate_community(p), UsageError);
    p = synth::SynthParams{};
    p.flood_income_corr = 1.5;
    CHECK_THROWS_AS(synth::generate_community(p), UsageError);
    p = synth::SynthParams{};
    p.edges_per_zone = 0.0;
    CHECK_THROWS_AS(synth::generate_community(p), UsageError);
}
