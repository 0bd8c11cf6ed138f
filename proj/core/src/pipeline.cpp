#include "restie/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "restie/error.hpp"

namespace restie::pipeline {

using nlohmann::json;

namespace {

// re-throw with the failing stage in front
template <typename Fn>
auto staged(const char* module, Fn&& fn) {
    try {
        return fn();
    } catch (const UsageError& e) {
        throw UsageError(std::string("[") + module + "] " + e.what());
    } catch (const NumericError& e) {
        throw NumericError(std::string("[") + module + "] " + e.what());
    } catch (const DataError& e) {
        throw DataError(std::string("[") + module + "] " + e.what());
    }
}

std::vector<double> incomes_of_group(
    const std::vector<net::ZoneMetrics>& metrics,
    const std::vector<geo::Zone>& zones, net::Group group) {
    std::unordered_map<std::string, const geo::Zone*> zone_of;
    for (const auto& z : zones) zone_of.emplace(z.zone_id, &z);
    std::vector<double> values;
    for (const auto& m : metrics) {
        if (m.group != group) continue;
        auto it = zone_of.find(m.zone_id);
        if (it != zone_of.end() && it->second->median_household_income)
            values.push_back(*it->second->median_household_income);
    }
    return values;
}

json config_echo(const PipelineConfig& c) {
    json out;
    out["zones_path"] = c.zones_path;
    out["flood_paths"] = c.flood_paths;
    out["flood_labels"] = c.flood_labels;
    out["sci_path"] = c.sci_path;
    out["raw_path"] = c.raw_path;
    out["users_path"] = c.users_path;
    out["crs_mode"] = c.crs_mode == geo::CrsMode::Planar ? "planar" : "lonlat";
    out["include_self_loops"] = c.analysis.include_self_loops;
    out["min_edge_weight"] = c.analysis.min_edge_weight;
    if (c.analysis.top_k_per_node)
        out["top_k_per_node"] = *c.analysis.top_k_per_node;
    else
        out["top_k_per_node"] = nullptr;
    out["skewness_variant"] =
        c.analysis.skewness_variant == stats::SkewnessVariant::Adjusted
            ? "adjusted"
            : "biased";
    out["median_tie_rule"] = "ge_median_is_high";
    out["ttest_groups"] = std::string(net::to_string(c.ttest_groups.first)) +
                          "," + net::to_string(c.ttest_groups.second);
    out["ttest_alpha"] = c.ttest_alpha;
    out["histogram_bins"] = c.histogram_bins;
    if (c.min_population)
        out["min_population"] = *c.min_population;
    else
        out["min_population"] = nullptr;
    return out;
}

} // namespace

net::Group parse_group(const std::string& name) {
    if (name == "G1") return net::Group::G1;
    if (name == "G2") return net::Group::G2;
    if (name == "G3") return net::Group::G3;
    if (name == "G4") return net::Group::G4;
    throw UsageError("unknown group '" + name + "', expected G1..G4");
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{})
        throw NumericError("format_double failed");
    return std::string(buf, ptr);
}

HistogramData histogram(const std::vector<double>& values, std::uint32_t bins) {
    HistogramData out;
    if (bins == 0) throw UsageError("histogram needs at least 1 bin");
    if (values.empty()) return out;
    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *mn_it, hi = *mx_it;
    const double width = (hi - lo) / static_cast<double>(bins);
    out.bin_edges.reserve(bins + 1);
    for (std::uint32_t i = 0; i <= bins; ++i)
        out.bin_edges.push_back(i == bins ? hi
                                          : lo + width * static_cast<double>(i));
    out.counts.assign(bins, 0);
    for (double v : values) {
        std::size_t idx = bins - 1;
        if (width > 0.0) {
            const double t = (v - lo) / width;
            idx = std::min<std::size_t>(bins - 1,
                                        static_cast<std::size_t>(t));
        }
        ++out.counts[idx];
    }
    return out;
}

std::vector<overlay::HazardExposure> run_overlay(
    const std::string& zones_path, const std::vector<std::string>& flood_paths,
    const std::vector<std::string>& flood_labels, geo::CrsMode crs_mode,
    unsigned threads) {
    const auto zones = staged(
        "geo_ingest", [&] { return geo::load_zones(zones_path, crs_mode); });
    const auto layers = staged("geo_ingest", [&] {
        return geo::load_flood_layers(flood_paths, flood_labels, crs_mode);
    });
    return staged("flood_overlay", [&] {
        const geo::MultiPolygon flood_union = overlay::union_layers(layers);
        return overlay::compute_fp_rates(zones, flood_union, threads);
    });
}

std::string fp_rates_to_csv(const std::vector<overlay::HazardExposure>& rates) {
    std::vector<const overlay::HazardExposure*> sorted;
    sorted.reserve(rates.size());
    for (const auto& r : rates) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(),
              [](const auto* a, const auto* b) { return a->zone_id < b->zone_id; });
    std::string out = "zone_id,zone_area_m2,flood_area_m2,fp_rate\n";
    for (const auto* r : sorted) {
        out += r->zone_id;
        out += ',';
        out += format_double(r->zone_area);
        out += ',';
        out += format_double(r->flood_area);
        out += ',';
        out += format_double(r->fp_rate);
        out += '\n';
    }
    return out;
}

AnalysisOutputs run_pipeline(const PipelineConfig& config) {
    AnalysisOutputs out;
    out.config = config;

    const bool raw_mode = !config.raw_path.empty();
    if (raw_mode == !config.sci_path.empty())
        throw UsageError(
            "[cli_report] exactly one of an SCI file or a raw+users pair is "
            "required");
    if (raw_mode && config.users_path.empty())
        throw UsageError("[cli_report] raw mode needs a users file");

    // 1. zones
    auto zones = staged("geo_ingest", [&] {
        return geo::load_zones(config.zones_path, config.crs_mode);
    });
    if (config.min_population) {
        std::vector<geo::Zone> kept;
        kept.reserve(zones.size());
        for (auto& z : zones) {
            if (z.population && *z.population < *config.min_population)
                ++out.zones_excluded_by_population;
            else
                kept.push_back(std::move(z));
        }
        zones = std::move(kept);
    }

    // 2. flood layers and union
    const auto layers = staged("geo_ingest", [&] {
        return geo::load_flood_layers(config.flood_paths, config.flood_labels,
                                      config.crs_mode, &out.warnings);
    });
    const geo::MultiPolygon flood_union =
        staged("flood_overlay", [&] { return overlay::union_layers(layers); });

    // 3. exposure
    auto exposures = staged("flood_overlay", [&] {
        return overlay::compute_fp_rates(zones, flood_union, config.threads);
    });
    out.median_fp_rate =
        staged("network_metrics", [&] { return net::classify_exposure(exposures); });

    // 4. edges
    sci::ZoneFilter filter;
    for (const auto& z : zones) filter.insert(z.zone_id);
    sci::EdgeList edges;
    if (raw_mode) {
        edges = staged("sci_ingest", [&] {
            const auto raw = sci::load_raw_connectivity(config.raw_path);
            const auto users = sci::load_user_counts(config.users_path);
            // scale over the full raw dataset, then restrict to study zones
            auto scaled = sci::compute_sci_from_raw(raw, users);
            auto [kept, dropped] = sci::filter_edges(scaled, filter);
            out.ingest_stats.rows_read = raw.size();
            out.ingest_stats.rows_kept = kept.edges.size();
            out.ingest_stats.rows_dropped_unknown_zone = dropped;
            for (const auto& e : kept.edges)
                if (e.self_pair()) ++out.ingest_stats.self_pairs;
            return std::move(kept);
        });
    } else {
        edges = staged("sci_ingest", [&] {
            auto [list, ingest_stats] = sci::stream_edges(config.sci_path, filter);
            out.ingest_stats = ingest_stats;
            return std::move(list);
        });
    }

    // 5. network and metrics
    const auto network = staged("network_metrics", [&] {
        return net::build_network(zones, exposures, edges, config.analysis);
    });
    auto metrics = staged("network_metrics",
                          [&] { return net::compute_zone_metrics(network); });
    out.median_res_tie_rate =
        staged("network_metrics", [&] { return net::assign_groups(metrics); });
    for (const auto& m : metrics)
        if (m.group == net::Group::Unassigned) ++out.unassigned_zones;

    // 6. statistics
    const auto skew_of = [&](std::vector<double> values) {
        SkewnessReport report;
        try {
            report.value = stats::skewness(values, config.analysis.skewness_variant);
            report.available = true;
        } catch (const NumericError& e) {
            report.reason = e.what();
        }
        return report;
    };
    {
        std::vector<double> sums, rhos;
        for (const auto& m : metrics) {
            sums.push_back(static_cast<double>(m.sum_of_sc));
            if (m.res_tie_rate) rhos.push_back(*m.res_tie_rate);
        }
        out.skew_sum_of_sc = skew_of(std::move(sums));
        out.skew_res_tie_rate = skew_of(std::move(rhos));
    }

    out.group_summaries = staged("stats", [&] {
        return stats::group_income_summary(metrics, zones);
    });

    out.t_test.groups = config.ttest_groups;
    {
        const auto a =
            incomes_of_group(metrics, zones, config.ttest_groups.first);
        const auto b =
            incomes_of_group(metrics, zones, config.ttest_groups.second);
        try {
            out.t_test.result = stats::welch_t_test(a, b, config.ttest_alpha);
            out.t_test.available = true;
        } catch (const NumericError& e) {
            // too few incomes or degenerate variance: reported, not fatal
            out.t_test.reason = e.what();
        }
    }

    out.build_stats = network.build_stats;
    out.zone_metrics = std::move(metrics);
    out.zones = std::move(zones);
    return out;
}

namespace {

std::string metrics_csv(const AnalysisOutputs& outputs) {
    std::vector<const net::ZoneMetrics*> sorted;
    for (const auto& m : outputs.zone_metrics) sorted.push_back(&m);
    std::sort(sorted.begin(), sorted.end(),
              [](const auto* a, const auto* b) { return a->zone_id < b->zone_id; });
    std::string out =
        "zone_id,fp_rate,exposure_class,sum_of_sc,res_tie_rate,group\n";
    for (const auto* m : sorted) {
        out += m->zone_id;
        out += ',';
        out += format_double(m->fp_rate);
        out += ',';
        out += net::to_string(m->exposure_class);
        out += ',';
        out += std::to_string(m->sum_of_sc);
        out += ',';
        if (m->res_tie_rate) out += format_double(*m->res_tie_rate);
        out += ',';
        out += net::to_string(m->group);
        out += '\n';
    }
    return out;
}

std::string groups_csv(const AnalysisOutputs& outputs) {
    std::string out = "group,count,mean_income,income_missing\n";
    for (const auto& g : outputs.group_summaries) {
        out += net::to_string(g.group);
        out += ',';
        out += std::to_string(g.count);
        out += ',';
        if (g.mean_income) out += format_double(*g.mean_income);
        out += ',';
        out += std::to_string(g.income_missing);
        out += '\n';
    }
    return out;
}

std::string histogram_csv(const HistogramData& hist) {
    std::string out = "bin_left,bin_right,count\n";
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        out += format_double(hist.bin_edges[i]);
        out += ',';
        out += format_double(hist.bin_edges[i + 1]);
        out += ',';
        out += std::to_string(hist.counts[i]);
        out += '\n';
    }
    return out;
}

json summary_json(const AnalysisOutputs& outputs) {
    json doc;
    doc["zones"] = outputs.zones.size();
    doc["medians"] = {{"fp_rate", outputs.median_fp_rate},
                      {"res_tie_rate", outputs.median_res_tie_rate}};
    const auto skew_json = [](const SkewnessReport& r) {
        json j;
        j["available"] = r.available;
        if (r.available)
            j["value"] = r.value;
        else
            j["reason"] = r.reason;
        return j;
    };
    doc["skewness"] = {{"sum_of_sc", skew_json(outputs.skew_sum_of_sc)},
                       {"res_tie_rate", skew_json(outputs.skew_res_tie_rate)}};
    {
        json t;
        t["groups"] = std::string(net::to_string(outputs.t_test.groups.first)) +
                      "," + net::to_string(outputs.t_test.groups.second);
        t["available"] = outputs.t_test.available;
        if (outputs.t_test.available) {
            t["mean_a"] = outputs.t_test.result.mean_a;
            t["mean_b"] = outputs.t_test.result.mean_b;
            t["t_statistic"] = outputs.t_test.result.t_statistic;
            t["degrees_of_freedom"] = outputs.t_test.result.degrees_of_freedom;
            t["p_value"] = outputs.t_test.result.p_value;
            t["alpha"] = outputs.t_test.result.alpha;
            t["significant"] = outputs.t_test.result.significant;
        } else {
            t["reason"] = outputs.t_test.reason;
        }
        doc["t_test"] = std::move(t);
    }
    {
        json g = json::array();
        for (const auto& s : outputs.group_summaries) {
            json row;
            row["group"] = net::to_string(s.group);
            row["count"] = s.count;
            if (s.mean_income)
                row["mean_income"] = *s.mean_income;
            else
                row["mean_income"] = nullptr;
            row["income_missing"] = s.income_missing;
            g.push_back(std::move(row));
        }
        doc["group_summaries"] = std::move(g);
    }
    doc["ingest_stats"] = {
        {"rows_read", outputs.ingest_stats.rows_read},
        {"rows_kept", outputs.ingest_stats.rows_kept},
        {"rows_dropped_unknown_zone",
         outputs.ingest_stats.rows_dropped_unknown_zone},
        {"self_pairs", outputs.ingest_stats.self_pairs}};
    doc["network"] = {
        {"edges_in", outputs.build_stats.edges_in},
        {"dropped_nonstudy", outputs.build_stats.dropped_nonstudy},
        {"dropped_below_min_weight",
         outputs.build_stats.dropped_below_min_weight},
        {"dropped_self_loops", outputs.build_stats.dropped_self_loops},
        {"dropped_by_top_k", outputs.build_stats.dropped_by_top_k},
        {"edges_kept", outputs.build_stats.edges_kept}};
    doc["zones_excluded_by_population"] = outputs.zones_excluded_by_population;
    doc["unassigned_zones"] = outputs.unassigned_zones;
    doc["config"] = config_echo(outputs.config);
    doc["warnings"] = outputs.warnings;
    return doc;
}

} // namespace

void emit_outputs(const AnalysisOutputs& outputs, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    geo::write_text_file((dir / "metrics.csv").string(), metrics_csv(outputs));
    geo::write_text_file((dir / "groups.csv").string(), groups_csv(outputs));
    geo::write_text_file((dir / "summary.json").string(),
                         summary_json(outputs).dump(2) + "\n");

    std::vector<double> sums, rhos;
    for (const auto& m : outputs.zone_metrics) {
        sums.push_back(static_cast<double>(m.sum_of_sc));
        if (m.res_tie_rate) rhos.push_back(*m.res_tie_rate);
    }
    geo::write_text_file(
        (dir / "hist_sum_of_sc.csv").string(),
        histogram_csv(histogram(sums, outputs.config.histogram_bins)));
    geo::write_text_file(
        (dir / "hist_res_tie_rate.csv").string(),
        histogram_csv(histogram(rhos, outputs.config.histogram_bins)));

    // enriched choropleth-ready zones, aligned with outputs.zones order
    std::unordered_map<std::string, const net::ZoneMetrics*> metric_of;
    for (const auto& m : outputs.zone_metrics) metric_of.emplace(m.zone_id, &m);
    std::vector<geo::PropertyList> extras;
    extras.reserve(outputs.zones.size());
    for (const auto& z : outputs.zones) {
        geo::PropertyList props;
        auto it = metric_of.find(z.zone_id);
        if (it != metric_of.end()) {
            const auto* m = it->second;
            props.emplace_back("fp_rate", geo::PropertyValue::num(m->fp_rate));
            props.emplace_back(
                "exposure_class",
                geo::PropertyValue::str(net::to_string(m->exposure_class)));
            props.emplace_back("sum_of_sc",
                               geo::PropertyValue::num(
                                   static_cast<double>(m->sum_of_sc)));
            props.emplace_back("res_tie_rate",
                               m->res_tie_rate
                                   ? geo::PropertyValue::num(*m->res_tie_rate)
                                   : geo::PropertyValue::null());
            props.emplace_back("group",
                               m->group == net::Group::Unassigned
                                   ? geo::PropertyValue::null()
                                   : geo::PropertyValue::str(
                                         net::to_string(m->group)));
        }
        extras.push_back(std::move(props));
    }
    geo::write_text_file((dir / "zones_enriched.geojson").string(),
                         geo::zones_to_geojson(outputs.zones, &extras));
}

CheckReport run_check(const PipelineConfig& config) {
    CheckReport report;
    const auto zones = staged("geo_ingest", [&] {
        return geo::load_zones(config.zones_path, config.crs_mode);
    });
    report.zones = zones.size();
    if (!config.flood_paths.empty()) {
        const auto layers = staged("geo_ingest", [&] {
            return geo::load_flood_layers(config.flood_paths,
                                          config.flood_labels, config.crs_mode,
                                          &report.warnings);
        });
        report.flood_layers = layers.size();
    }
    if (!config.sci_path.empty()) {
        sci::ZoneFilter filter;
        for (const auto& z : zones) filter.insert(z.zone_id);
        auto [edges, ingest_stats] = staged("sci_ingest", [&] {
            return sci::stream_edges(config.sci_path, filter);
        });
        report.sci_checked = true;
        report.ingest_stats = ingest_stats;
        report.edges = edges.edges.size();
    }
    if (!config.raw_path.empty()) {
        staged("sci_ingest", [&] {
            const auto raw = sci::load_raw_connectivity(config.raw_path);
            const auto users = sci::load_user_counts(config.users_path);
            const auto scaled = sci::compute_sci_from_raw(raw, users);
            report.sci_checked = true;
            report.edges = scaled.edges.size();
            report.ingest_stats.rows_read = raw.size();
        });
    }
    return report;
}

} // namespace restie::pipeline
