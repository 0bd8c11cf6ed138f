#ifndef RESTIE_PIPELINE_HPP
#define RESTIE_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "restie/geojson.hpp"
#include "restie/network.hpp"
#include "restie/overlay.hpp"
#include "restie/sci.hpp"
#include "restie/stats.hpp"

namespace restie::pipeline {

struct PipelineConfig {
    std::string zones_path;
    std::vector<std::string> flood_paths;
    std::vector<std::string> flood_labels;
    std::string sci_path;   // scaled-SCI TSV; exclusive with raw mode
    std::string raw_path;   // raw friendship counts
    std::string users_path; // user counts for raw mode
    geo::CrsMode crs_mode = geo::CrsMode::Planar;
    net::AnalysisConfig analysis;
    std::pair<net::Group, net::Group> ttest_groups = {net::Group::G3,
                                                      net::Group::G4};
    double ttest_alpha = 0.05;
    std::uint32_t histogram_bins = 20;
    std::optional<double> min_population; // zones below are excluded up front
    unsigned threads = 0;                 // 0 = hardware concurrency
};

struct SkewnessReport {
    bool available = false;
    double value = 0.0;
    std::string reason; // set when unavailable
};

struct TTestReport {
    bool available = false;
    stats::TTestResult result;
    std::pair<net::Group, net::Group> groups;
    std::string reason; // set when unavailable
};

struct HistogramData {
    std::vector<double> bin_edges; // bins + 1 edges
    std::vector<std::uint64_t> counts;
};

struct AnalysisOutputs {
    std::vector<geo::Zone> zones; // study zones after population filter
    std::vector<net::ZoneMetrics> zone_metrics;
    std::vector<stats::GroupSummary> group_summaries;
    double median_fp_rate = 0.0;
    double median_res_tie_rate = 0.0;
    SkewnessReport skew_sum_of_sc;
    SkewnessReport skew_res_tie_rate;
    TTestReport t_test;
    sci::IngestStats ingest_stats;
    net::NetworkBuildStats build_stats;
    std::uint64_t zones_excluded_by_population = 0;
    std::uint64_t unassigned_zones = 0;
    PipelineConfig config; // every knob that affected the results
    std::vector<std::string> warnings;
};

// load -> union -> fp_rates -> classify -> edges -> network -> rho ->
// groups -> stats. Identical inputs and config produce identical outputs.
AnalysisOutputs run_pipeline(const PipelineConfig& config);

// Writes metrics.csv, groups.csv, summary.json, zones_enriched.geojson,
// hist_sum_of_sc.csv, hist_res_tie_rate.csv into out_dir (created when
// missing). Output bytes are a pure function of `outputs`.
void emit_outputs(const AnalysisOutputs& outputs, const std::string& out_dir);

HistogramData histogram(const std::vector<double>& values, std::uint32_t bins);

// zones + flood only: per-zone floodplain percentages (the `overlay`
// subcommand).
std::vector<overlay::HazardExposure> run_overlay(
    const std::string& zones_path, const std::vector<std::string>& flood_paths,
    const std::vector<std::string>& flood_labels, geo::CrsMode crs_mode,
    unsigned threads = 0);

std::string fp_rates_to_csv(const std::vector<overlay::HazardExposure>& rates);

struct CheckReport {
    std::size_t zones = 0;
    std::size_t flood_layers = 0;
    bool sci_checked = false;
    sci::IngestStats ingest_stats;
    std::size_t edges = 0;
    std::vector<std::string> warnings;
};

// Validates inputs and gathers ingest statistics without running the
// analysis.
CheckReport run_check(const PipelineConfig& config);

// Locale-independent shortest round-trip formatting used for all CSV output.
std::string format_double(double value);

// "G1".."G4" -> Group; UsageError otherwise.
net::Group parse_group(const std::string& name);

} // namespace restie::pipeline

#endif
