#include <doctest.h>

#include <cstdint>
#include <vector>

#include "restie/error.hpp"
#include "restie/network.hpp"
#include "restie/rng.hpp"

using namespace restie;
using overlay::ExposureClass;
using overlay::HazardExposure;

namespace {

geo::Zone square_zone(const std::string& id, double x0) {
    geo::Zone z;
    z.zone_id = id;
    geo::Ring r;
    r.vertices = {{x0, 0}, {x0 + 1, 0}, {x0 + 1, 1}, {x0, 1}, {x0, 0}};
    z.geometry.polygons.push_back({r, {}});
    return z;
}

std::vector<geo::Zone> zones_named(const std::vector<std::string>& ids) {
    std::vector<geo::Zone> out;
    for (std::size_t i = 0; i < ids.size(); ++i)
        out.push_back(square_zone(ids[i], static_cast<double>(i)));
    return out;
}

std::vector<HazardExposure> exposures_of(
    const std::vector<std::string>& ids, const std::vector<double>& fp) {
    std::vector<HazardExposure> out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        HazardExposure e;
        e.zone_id = ids[i];
        e.zone_area = 1.0;
        e.flood_area = fp[i] / 100.0;
        e.fp_rate = fp[i];
        out.push_back(e);
    }
    return out;
}

sci::EdgeList edges_of(
    std::initializer_list<std::tuple<const char*, const char*, std::uint64_t>>
        rows) {
    sci::EdgeList list;
    for (const auto& [a, b, w] : rows) {
        std::string lo = a, hi = b;
        if (hi < lo) std::swap(lo, hi);
        list.edges.push_back({lo, hi, w});
    }
    std::sort(list.edges.begin(), list.edges.end(),
              [](const auto& x, const auto& y) {
                  return std::tie(x.loc_a, x.loc_b) < std::tie(y.loc_a, y.loc_b);
              });
    return list;
}

} // namespace

TEST_CASE("classify_exposure: median split with >= tie rule") {
    auto exposures = exposures_of({"a", "b", "c", "d", "e", "f"},
                                  {0, 0, 0, 100, 100, 100});
    const double median = net::classify_exposure(exposures);
    CHECK(median == 50.0);
    for (int i = 0; i < 3; ++i) CHECK(exposures[i].exposure_class == ExposureClass::L);
    for (int i = 3; i < 6; ++i) CHECK(exposures[i].exposure_class == ExposureClass::H);
}

TEST_CASE("classify_exposure: all-equal rates classify H") {
    auto exposures = exposures_of({"a", "b", "c"}, {7, 7, 7});
    net::classify_exposure(exposures);
    for (const auto& e : exposures) CHECK(e.exposure_class == ExposureClass::H);
}

TEST_CASE("classify_exposure rejects tiny inputs") {
    std::vector<HazardExposure> one = exposures_of({"a"}, {5});
    CHECK_THROWS_AS(net::classify_exposure(one), DataError);
    std::vector<HazardExposure> none;
    CHECK_THROWS_AS(net::classify_exposure(none), DataError);
}

TEST_CASE("classify_exposure is invariant under increasing transforms") {
    Rng rng(5);
    for (int iter = 0; iter < 30; ++iter) {
        const int n = 2 + static_cast<int>(rng.below(20));
        std::vector<std::string> ids;
        std::vector<double> fp;
        for (int i = 0; i < n; ++i) {
            ids.push_back("Z" + std::to_string(i));
            fp.push_back(rng.uniform(0, 100));
        }
        auto base = exposures_of(ids, fp);
        net::classify_exposure(base);
        // strictly increasing map [0,100] -> [0,100]
        std::vector<double> warped = fp;
        for (auto& v : warped) v = 100.0 * (v * v + 5.0 * v) / (10500.0 + 600.0);
        auto transformed = exposures_of(ids, warped);
        net::classify_exposure(transformed);
        for (int i = 0; i < n; ++i)
            CHECK(base[i].exposure_class == transformed[i].exposure_class);
    }
}

TEST_CASE("build_network: pass-through, filters, drops") {
    const std::vector<std::string> ids = {"a", "b", "c", "d", "e", "f"};
    auto zones = zones_named(ids);
    auto exposures = exposures_of(ids, {0, 10, 20, 40, 60, 80});
    net::classify_exposure(exposures);

    SUBCASE("defaults keep everything") {
        auto edges = edges_of({{"a", "b", 5}, {"a", "c", 6}, {"b", "d", 7},
                               {"c", "e", 8}, {"d", "f", 9}, {"e", "f", 10},
                               {"a", "f", 11}, {"b", "e", 12}});
        const auto net =
            net::build_network(zones, exposures, edges, net::AnalysisConfig{});
        CHECK(net.node_count() == 6);
        CHECK(net.edges.size() == 8);
        CHECK(net.build_stats.edges_kept == 8);
    }

    SUBCASE("min_edge_weight drops low weights") {
        auto edges = edges_of({{"a", "b", 1}, {"a", "c", 4}, {"b", "d", 5},
                               {"c", "e", 9}});
        net::AnalysisConfig config;
        config.min_edge_weight = 5;
        const auto net = net::build_network(zones, exposures, edges, config);
        CHECK(net.edges.size() == 2);
        CHECK(net.build_stats.dropped_below_min_weight == 2);
    }

    SUBCASE("edges to unknown zones are dropped and counted") {
        auto edges = edges_of({{"a", "X", 5}, {"a", "b", 6}});
        const auto net =
            net::build_network(zones, exposures, edges, net::AnalysisConfig{});
        CHECK(net.edges.size() == 1);
        CHECK(net.build_stats.dropped_nonstudy == 1);
    }

    SUBCASE("self-loops follow the policy") {
        auto edges = edges_of({{"a", "a", 7}, {"a", "b", 6}});
        const auto off =
            net::build_network(zones, exposures, edges, net::AnalysisConfig{});
        CHECK(off.edges.size() == 1);
        CHECK(off.build_stats.dropped_self_loops == 1);
        CHECK(net::sum_of_sc(off, "a") == 6);

        net::AnalysisConfig with;
        with.include_self_loops = true;
        const auto on = net::build_network(zones, exposures, edges, with);
        CHECK(on.edges.size() == 2);
        CHECK(net::sum_of_sc(on, "a") == 13);
    }

    SUBCASE("duplicate pairs are rejected") {
        sci::EdgeList dup;
        dup.edges.push_back({"a", "b", 5});
        dup.edges.push_back({"a", "b", 6});
        CHECK_THROWS_WITH_AS(
            net::build_network(zones, exposures, dup, net::AnalysisConfig{}),
            doctest::Contains("duplicate"), DataError);
    }

    SUBCASE("missing exposure is an error") {
        auto edges = edges_of({{"a", "b", 5}});
        auto partial = exposures;
        partial.pop_back();
        CHECK_THROWS_WITH_AS(
            net::build_network(zones, partial, edges, net::AnalysisConfig{}),
            doctest::Contains("missing an exposure"), DataError);
    }

    SUBCASE("top-k keeps an edge alive at either endpoint") {
        // star around 'a' plus one spoke pair; k=1 keeps a's best edge and
        // each neighbor's best (which is their only edge -> all survive)
        auto edges = edges_of({{"a", "b", 10}, {"a", "c", 20}, {"a", "d", 30}});
        net::AnalysisConfig config;
        config.top_k_per_node = 1;
        const auto net = net::build_network(zones, exposures, edges, config);
        // every edge is the top-1 of b, c or d respectively
        CHECK(net.edges.size() == 3);

        // but an edge that is nobody's top-1 dies: connect b-c weakly
        auto edges2 = edges_of({{"a", "b", 10}, {"a", "c", 20}, {"b", "c", 1},
                                {"b", "d", 50}, {"c", "e", 60}});
        const auto net2 = net::build_network(zones, exposures, edges2, config);
        bool has_bc = false;
        for (const auto& e : net2.edges)
            has_bc |= net2.zone_ids[e.a] == "b" && net2.zone_ids[e.b] == "c";
        CHECK_FALSE(has_bc);
        CHECK(net2.build_stats.dropped_by_top_k > 0);
    }
}

TEST_CASE("sum_of_sc and res_tie_rate basics") {
    const std::vector<std::string> ids = {"a", "b", "c", "d"};
    auto zones = zones_named(ids);
    auto exposures = exposures_of(ids, {0, 10, 60, 80});
    net::classify_exposure(exposures); // median 35: a,b L; c,d H
    auto edges = edges_of({{"a", "b", 10}, {"a", "c", 5}, {"a", "d", 1}});
    const auto net =
        net::build_network(zones, exposures, edges, net::AnalysisConfig{});

    CHECK(net::sum_of_sc(net, "a") == 16);
    CHECK(net::sum_of_sc(net, "b") == 10);
    CHECK(net::res_tie_rate(net, "a").value() ==
          doctest::Approx(100.0 * 10 / 16));
    CHECK(net::res_tie_rate(net, "b").value() == 100.0); // only neighbor a is L
    CHECK(net::res_tie_rate(net, "c").value() == 100.0); // only neighbor a is L
    CHECK_THROWS_AS(net::sum_of_sc(net, "nope"), DataError);
}

TEST_CASE("res_tie_rate across class mixes and isolation") {
    const std::vector<std::string> ids = {"a", "b", "c", "d", "e"};
    auto zones = zones_named(ids);
    auto exposures = exposures_of(ids, {0, 10, 60, 80, 90});
    net::classify_exposure(exposures); // median 60: a,b L; c,d,e H
    auto edges = edges_of({{"c", "a", 10}, {"c", "b", 30},   // all-L neighbors
                           {"d", "c", 10}, {"d", "e", 10}}); // all-H neighbors
    const auto net =
        net::build_network(zones, exposures, edges, net::AnalysisConfig{});
    CHECK(net::res_tie_rate(net, "c").value() ==
          doctest::Approx(100.0 * 40 / 50));
    CHECK(net::res_tie_rate(net, "d").value() == 0.0);
    // isolated node: undefined
    auto with_isolated = edges_of({{"a", "b", 3}});
    const auto net2 = net::build_network(zones, exposures, with_isolated,
                                         net::AnalysisConfig{});
    CHECK_FALSE(net::res_tie_rate(net2, "e").has_value());
}

TEST_CASE("self-loop counts in the rate only when enabled, by own class") {
    const std::vector<std::string> ids = {"a", "b", "h"};
    auto zones = zones_named(ids);
    auto exposures = exposures_of(ids, {0, 10, 90});
    net::classify_exposure(exposures); // median 10 -> a L; b,h H (tie at 10)
    auto edges = edges_of({{"a", "a", 8}, {"h", "h", 4}, {"h", "b", 4}});
    net::AnalysisConfig config;
    config.include_self_loops = true;
    const auto net = net::build_network(zones, exposures, edges, config);
    // a in L: its self-loop lands in numerator and denominator
    CHECK(net::res_tie_rate(net, "a").value() == 100.0);
    CHECK(net::sum_of_sc(net, "a") == 8);
    // h in H: its self-loop lands in the denominator only
    CHECK(net::res_tie_rate(net, "h").value() == 0.0);
    CHECK(net::sum_of_sc(net, "h") == 8);
}

TEST_CASE("assign_groups quadrants and unassigned handling") {
    std::vector<net::ZoneMetrics> metrics(5);
    const double rho[] = {80, 10, 55, 55, -1};
    const ExposureClass cls[] = {ExposureClass::L, ExposureClass::H,
                                 ExposureClass::L, ExposureClass::H,
                                 ExposureClass::L};
    for (int i = 0; i < 5; ++i) {
        metrics[i].zone_id = "Z" + std::to_string(i);
        metrics[i].exposure_class = cls[i];
        if (rho[i] >= 0) metrics[i].res_tie_rate = rho[i];
    }
    const double cutoff = net::assign_groups(metrics);
    CHECK(cutoff == doctest::Approx(55.0));
    CHECK(metrics[0].group == net::Group::G2); // L, 80 >= 55
    CHECK(metrics[1].group == net::Group::G4); // H, 10 < 55
    CHECK(metrics[2].group == net::Group::G2); // L, tie -> high
    CHECK(metrics[3].group == net::Group::G3); // H, tie -> high
    CHECK(metrics[4].group == net::Group::Unassigned);
}

TEST_CASE("assign_groups needs two defined rates") {
    std::vector<net::ZoneMetrics> metrics(3);
    metrics[0].res_tie_rate = 50.0;
    CHECK_THROWS_AS(net::assign_groups(metrics), NumericError);
}

// brute-force oracle: explicit adjacency matrix, exact integer sums
namespace {
struct BruteResult {
    std::uint64_t low = 0, total = 0;
};
BruteResult brute_rho(const std::vector<std::vector<std::uint64_t>>& w,
                      const std::vector<ExposureClass>& cls, std::size_t i,
                      bool self_loops) {
    BruteResult r;
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (i == j && !self_loops) continue;
        r.total += w[i][j];
        if (cls[j] == ExposureClass::L) r.low += w[i][j];
    }
    return r;
}
} // namespace

TEST_CASE("res_tie_rate equals the adjacency-matrix oracle exactly") {
    Rng rng(404);
    for (int iter = 0; iter < 100; ++iter) {
        const std::size_t n = 2 + rng.below(11);
        std::vector<std::string> ids;
        std::vector<double> fp;
        for (std::size_t i = 0; i < n; ++i) {
            ids.push_back("Z" + std::to_string(i));
            fp.push_back(rng.uniform(0, 100));
        }
        auto zones = zones_named(ids);
        auto exposures = exposures_of(ids, fp);
        net::classify_exposure(exposures);

        const bool self_loops = rng.below(2) == 1;
        std::vector<std::vector<std::uint64_t>> w(
            n, std::vector<std::uint64_t>(n, 0));
        sci::EdgeList edges;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                if (rng.uniform() < 0.4) {
                    const std::uint64_t weight = 1 + rng.below(1000000000ULL);
                    if (i == j && !self_loops) continue;
                    w[i][j] = w[j][i] = weight;
                    edges.edges.push_back({ids[i], ids[j], weight});
                }
            }
        }
        net::AnalysisConfig config;
        config.include_self_loops = self_loops;
        const auto net = net::build_network(zones, exposures, edges, config);
        std::vector<ExposureClass> cls;
        for (const auto& e : exposures) cls.push_back(e.exposure_class);

        for (std::size_t i = 0; i < n; ++i) {
            const auto frac =
                net::res_tie_fraction(net, static_cast<std::uint32_t>(i));
            const auto expect = brute_rho(w, cls, i, self_loops);
            CHECK(frac.low_sum == expect.low);    // exact integers
            CHECK(frac.total_sum == expect.total);
            if (expect.total > 0) {
                const double direct =
                    100.0 * (static_cast<double>(expect.low) /
                             static_cast<double>(expect.total));
                CHECK(net::res_tie_rate(net, ids[i]).value() == direct);
            }
        }
    }
}

TEST_CASE("scale invariance and label-flip duality") {
    Rng rng(808);
    for (int iter = 0; iter < 100; ++iter) {
        const std::size_t n = 3 + rng.below(10);
        std::vector<std::string> ids;
        std::vector<double> fp;
        for (std::size_t i = 0; i < n; ++i) {
            ids.push_back("Z" + std::to_string(i));
            fp.push_back(rng.uniform(0, 100));
        }
        auto zones = zones_named(ids);
        auto exposures = exposures_of(ids, fp);
        net::classify_exposure(exposures);

        sci::EdgeList edges;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (rng.uniform() < 0.5)
                    edges.edges.push_back({ids[i], ids[j], 1 + rng.below(100000)});
        if (edges.edges.empty()) continue;

        const auto base =
            net::build_network(zones, exposures, edges, net::AnalysisConfig{});
        auto base_metrics = net::compute_zone_metrics(base);

        // scale invariance: x c, exact equality of rates and groups
        const std::uint64_t c = 2 + rng.below(99);
        sci::EdgeList scaled = edges;
        for (auto& e : scaled.edges) e.weight *= c;
        const auto snet =
            net::build_network(zones, exposures, scaled, net::AnalysisConfig{});
        auto scaled_metrics = net::compute_zone_metrics(snet);
        std::size_t defined = 0;
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(base_metrics[i].res_tie_rate == scaled_metrics[i].res_tie_rate);
            if (base_metrics[i].res_tie_rate) ++defined;
        }
        if (defined >= 2) {
            net::assign_groups(base_metrics);
            net::assign_groups(scaled_metrics);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(base_metrics[i].group == scaled_metrics[i].group);
        }

        // label flip: rho -> 100 - rho, exact on the integer fractions
        auto flipped = exposures;
        for (auto& e : flipped)
            e.exposure_class = e.exposure_class == ExposureClass::L
                                   ? ExposureClass::H
                                   : ExposureClass::L;
        const auto flipped_net =
            net::build_network(zones, flipped, edges, net::AnalysisConfig{});
        for (std::size_t i = 0; i < n; ++i) {
            const auto a =
                net::res_tie_fraction(base, static_cast<std::uint32_t>(i));
            const auto b = net::res_tie_fraction(
                flipped_net, static_cast<std::uint32_t>(i));
            CHECK(a.total_sum == b.total_sum);
            if (a.defined())
                CHECK(a.low_sum + b.low_sum == a.total_sum); // exact duality
        }
    }
}

TEST_CASE("complement identity: rho plus H-share is 100") {
    Rng rng(909);
    for (int iter = 0; iter < 50; ++iter) {
        const std::size_t n = 3 + rng.below(8);
        std::vector<std::string> ids;
        std::vector<double> fp;
        for (std::size_t i = 0; i < n; ++i) {
            ids.push_back("Z" + std::to_string(i));
            fp.push_back(rng.uniform(0, 100));
        }
        auto zones = zones_named(ids);
        auto exposures = exposures_of(ids, fp);
        net::classify_exposure(exposures);
        sci::EdgeList edges;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (rng.uniform() < 0.6)
                    edges.edges.push_back({ids[i], ids[j], 1 + rng.below(1000)});
        if (edges.edges.empty()) continue;
        const auto net =
            net::build_network(zones, exposures, edges, net::AnalysisConfig{});
        for (std::uint32_t i = 0; i < n; ++i) {
            const auto frac = net::res_tie_fraction(net, i);
            if (!frac.defined()) continue;
            const double rho = frac.percent();
            const double h_share =
                100.0 * (static_cast<double>(frac.total_sum - frac.low_sum) /
                         static_cast<double>(frac.total_sum));
            CHECK(std::abs(rho + h_share - 100.0) < 1e-12);
        }
    }
}

TEST_CASE("group partition matches the L set") {
    Rng rng(111);
    const std::size_t n = 12;
    std::vector<std::string> ids;
    std::vector<double> fp;
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back("Z" + std::to_string(i));
        fp.push_back(rng.uniform(0, 100));
    }
    auto zones = zones_named(ids);
    auto exposures = exposures_of(ids, fp);
    net::classify_exposure(exposures);
    sci::EdgeList edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.uniform() < 0.5)
                edges.edges.push_back({ids[i], ids[j], 1 + rng.below(50)});
    const auto net =
        net::build_network(zones, exposures, edges, net::AnalysisConfig{});
    auto metrics = net::compute_zone_metrics(net);
    net::assign_groups(metrics);
    std::size_t g[5] = {0, 0, 0, 0, 0};
    for (const auto& m : metrics) {
        g[static_cast<int>(m.group)]++;
        if (m.group == net::Group::G1 || m.group == net::Group::G2)
            CHECK(m.exposure_class == ExposureClass::L);
        if (m.group == net::Group::G3 || m.group == net::Group::G4)
            CHECK(m.exposure_class == ExposureClass::H);
    }
    CHECK(g[0] + g[1] + g[2] + g[3] + g[4] == n);
}
