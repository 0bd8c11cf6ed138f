#include "restie/network.hpp"

#include <algorithm>
#include <tuple>

#include "restie/error.hpp"

namespace restie::net {

const char* to_string(Group g) {
    switch (g) {
        case Group::G1: return "G1";
        case Group::G2: return "G2";
        case Group::G3: return "G3";
        case Group::G4: return "G4";
        case Group::Unassigned: return "";
    }
    return "";
}

const char* to_string(overlay::ExposureClass c) {
    switch (c) {
        case overlay::ExposureClass::L: return "L";
        case overlay::ExposureClass::H: return "H";
        case overlay::ExposureClass::Unassigned: return "";
    }
    return "";
}

std::optional<std::uint32_t> SocioSpatialNetwork::index_of(
    std::string_view zone_id) const {
    auto it = index_.find(zone_id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void SocioSpatialNetwork::rebuild_index() {
    index_.clear();
    for (std::uint32_t i = 0; i < zone_ids.size(); ++i)
        index_.emplace(zone_ids[i], i);
    adjacency_.assign(zone_ids.size(), {});
    for (const Edge& e : edges) {
        adjacency_[e.a].emplace_back(e.b, e.weight);
        if (e.a != e.b) adjacency_[e.b].emplace_back(e.a, e.weight);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

double classify_exposure(std::vector<overlay::HazardExposure>& exposures) {
    if (exposures.size() < 2)
        throw DataError("classify_exposure: need at least 2 zones, got " +
                        std::to_string(exposures.size()));
    std::vector<double> rates;
    rates.reserve(exposures.size());
    for (const auto& e : exposures) rates.push_back(e.fp_rate);
    const double cutoff = stats::median(std::move(rates));
    for (auto& e : exposures)
        e.exposure_class = e.fp_rate >= cutoff ? overlay::ExposureClass::H
                                               : overlay::ExposureClass::L;
    return cutoff;
}

SocioSpatialNetwork build_network(
    const std::vector<geo::Zone>& zones,
    const std::vector<overlay::HazardExposure>& exposures,
    const sci::EdgeList& edges, const AnalysisConfig& config) {
    SocioSpatialNetwork net;
    net.config = config;
    net.zone_ids.reserve(zones.size());
    for (const auto& z : zones) net.zone_ids.push_back(z.zone_id);

    std::unordered_map<std::string, std::uint32_t, sci::StringHash,
                       std::equal_to<>>
        index;
    for (std::uint32_t i = 0; i < net.zone_ids.size(); ++i)
        if (!index.emplace(net.zone_ids[i], i).second)
            throw DataError("duplicate zone_id '" + net.zone_ids[i] + "'");

    net.exposure.assign(zones.size(), overlay::ExposureClass::Unassigned);
    net.fp_rate.assign(zones.size(), 0.0);
    for (const auto& e : exposures) {
        auto it = index.find(e.zone_id);
        if (it == index.end()) continue; // exposures may cover a superset
        if (e.exposure_class == overlay::ExposureClass::Unassigned)
            throw DataError("zone '" + e.zone_id +
                            "' has no exposure class; run classify_exposure");
        net.exposure[it->second] = e.exposure_class;
        net.fp_rate[it->second] = e.fp_rate;
    }
    for (std::size_t i = 0; i < net.zone_ids.size(); ++i)
        if (net.exposure[i] == overlay::ExposureClass::Unassigned)
            throw DataError("zone '" + net.zone_ids[i] +
                            "' is missing an exposure record");

    auto& bs = net.build_stats;
    std::vector<SocioSpatialNetwork::Edge> kept;
    kept.reserve(edges.edges.size());
    std::unordered_set<std::uint64_t> seen_pairs;
    for (const auto& rec : edges.edges) {
        ++bs.edges_in;
        if (rec.weight == 0)
            throw DataError("edge (" + rec.loc_a + ", " + rec.loc_b +
                            ") has weight 0; weights must be >= 1");
        auto ia = index.find(rec.loc_a);
        auto ib = index.find(rec.loc_b);
        if (ia == index.end() || ib == index.end()) {
            ++bs.dropped_nonstudy;
            continue;
        }
        std::uint32_t a = ia->second, b = ib->second;
        if (a > b) std::swap(a, b);
        const std::uint64_t key =
            (static_cast<std::uint64_t>(a) << 32) | b;
        if (!seen_pairs.insert(key).second)
            throw DataError("duplicate edge pair (" + rec.loc_a + ", " +
                            rec.loc_b + ")");
        if (a == b && !config.include_self_loops) {
            ++bs.dropped_self_loops;
            continue;
        }
        if (rec.weight < config.min_edge_weight) {
            ++bs.dropped_below_min_weight;
            continue;
        }
        kept.push_back({a, b, rec.weight});
    }

    if (config.top_k_per_node && !kept.empty()) {
        const std::uint32_t k = *config.top_k_per_node;
        if (k < 1) throw UsageError("top_k_per_node must be >= 1");
        // rank edges per endpoint: weight desc, partner index asc
        std::vector<std::vector<std::pair<std::uint64_t, std::size_t>>> incident(
            net.zone_ids.size());
        for (std::size_t e = 0; e < kept.size(); ++e) {
            incident[kept[e].a].emplace_back(kept[e].weight, e);
            if (kept[e].a != kept[e].b)
                incident[kept[e].b].emplace_back(kept[e].weight, e);
        }
        std::vector<char> survives(kept.size(), 0);
        for (std::uint32_t node = 0; node < incident.size(); ++node) {
            auto& list = incident[node];
            std::sort(list.begin(), list.end(),
                      [&](const auto& x, const auto& y) {
                          if (x.first != y.first) return x.first > y.first;
                          const auto& ex = kept[x.second];
                          const auto& ey = kept[y.second];
                          const std::uint32_t px = ex.a == node ? ex.b : ex.a;
                          const std::uint32_t py = ey.a == node ? ey.b : ey.a;
                          return px < py;
                      });
            for (std::size_t r = 0; r < list.size() && r < k; ++r)
                survives[list[r].second] = 1;
        }
        std::vector<SocioSpatialNetwork::Edge> filtered;
        filtered.reserve(kept.size());
        for (std::size_t e = 0; e < kept.size(); ++e) {
            if (survives[e])
                filtered.push_back(kept[e]);
            else
                ++bs.dropped_by_top_k;
        }
        kept = std::move(filtered);
    }

    std::sort(kept.begin(), kept.end(), [](const auto& x, const auto& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    bs.edges_kept = kept.size();
    net.edges = std::move(kept);
    net.rebuild_index();
    return net;
}

namespace {

std::uint32_t require_node(const SocioSpatialNetwork& net,
                           std::string_view zone_id) {
    const auto idx = net.index_of(zone_id);
    if (!idx)
        throw DataError("unknown zone_id '" + std::string(zone_id) + "'");
    return *idx;
}

} // namespace

std::uint64_t sum_of_sc(const SocioSpatialNetwork& net,
                        std::string_view zone_id) {
    const std::uint32_t node = require_node(net, zone_id);
    std::uint64_t total = 0;
    for (const auto& [nbr, w] : net.neighbors(node)) total += w;
    return total;
}

RateFraction res_tie_fraction(const SocioSpatialNetwork& net,
                              std::uint32_t node) {
    RateFraction frac;
    for (const auto& [nbr, w] : net.neighbors(node)) {
        frac.total_sum += w;
        if (net.exposure[nbr] == overlay::ExposureClass::L) frac.low_sum += w;
    }
    return frac;
}

std::optional<double> res_tie_rate(const SocioSpatialNetwork& net,
                                   std::string_view zone_id) {
    const RateFraction frac = res_tie_fraction(net, require_node(net, zone_id));
    if (!frac.defined()) return std::nullopt;
    return frac.percent();
}

std::vector<ZoneMetrics> compute_zone_metrics(const SocioSpatialNetwork& net) {
    std::vector<ZoneMetrics> out;
    out.reserve(net.node_count());
    for (std::uint32_t i = 0; i < net.node_count(); ++i) {
        ZoneMetrics m;
        m.zone_id = net.zone_ids[i];
        m.fp_rate = net.fp_rate[i];
        m.exposure_class = net.exposure[i];
        m.rate_fraction = res_tie_fraction(net, i);
        m.sum_of_sc = m.rate_fraction.total_sum;
        if (m.rate_fraction.defined())
            m.res_tie_rate = m.rate_fraction.percent();
        out.push_back(std::move(m));
    }
    return out;
}

double assign_groups(std::vector<ZoneMetrics>& metrics) {
    std::vector<double> defined;
    for (const auto& m : metrics)
        if (m.res_tie_rate) defined.push_back(*m.res_tie_rate);
    if (defined.size() < 2)
        throw NumericError(
            "assign_groups: need at least 2 zones with a defined "
            "res_tie_rate, got " +
            std::to_string(defined.size()));
    const double cutoff = stats::median(std::move(defined));
    for (auto& m : metrics) {
        if (!m.res_tie_rate) {
            m.group = Group::Unassigned;
            continue;
        }
        const bool high_rho = *m.res_tie_rate >= cutoff;
        if (m.exposure_class == overlay::ExposureClass::L)
            m.group = high_rho ? Group::G2 : Group::G1;
        else
            m.group = high_rho ? Group::G3 : Group::G4;
    }
    return cutoff;
}

} // namespace restie::net
