// restie: hazard-exposure heterophily analytics for socio-spatial networks.
//
// Subcommands:
//   analyze  full pipeline: overlay, exposure classes, network, res_tie_rate,
//            groups, statistics; writes machine-readable outputs
//   synth    deterministic synthetic community generator
//   overlay  zones + flood layers only, emits per-zone floodplain percentages
//   check    validate inputs and print ingest statistics, no analysis
//
// Exit codes: 0 success, 1 usage error, 2 data/validation error,
// 3 numerical failure.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "restie/error.hpp"
#include "restie/pipeline.hpp"
#include "restie/synth.hpp"

namespace {

using restie::pipeline::PipelineConfig;

struct AnalyzeOptions {
    PipelineConfig config;
    std::string crs = "planar";
    std::string skewness = "adjusted";
    std::string ttest_groups = "G3,G4";
    double min_population = -1.0;
    std::string out_dir;
};

void finalize_config(AnalyzeOptions& opt) {
    opt.config.crs_mode = opt.crs == "lonlat" ? restie::geo::CrsMode::LonLat
                                              : restie::geo::CrsMode::Planar;
    opt.config.analysis.skewness_variant =
        opt.skewness == "biased" ? restie::stats::SkewnessVariant::Biased
                                 : restie::stats::SkewnessVariant::Adjusted;
    const auto comma = opt.ttest_groups.find(',');
    if (comma == std::string::npos)
        throw restie::UsageError("--ttest-groups expects 'Gx,Gy'");
    opt.config.ttest_groups = {
        restie::pipeline::parse_group(opt.ttest_groups.substr(0, comma)),
        restie::pipeline::parse_group(opt.ttest_groups.substr(comma + 1))};
    if (opt.min_population >= 0.0)
        opt.config.min_population = opt.min_population;
    if (opt.config.flood_labels.empty()) {
        // default labels: layer file stems
        for (const auto& p : opt.config.flood_paths)
            opt.config.flood_labels.push_back(
                std::filesystem::path(p).stem().string());
    }
}

void add_input_flags(CLI::App* cmd, AnalyzeOptions& opt, bool need_sci) {
    cmd->add_option("--zones", opt.config.zones_path, "zone polygons (GeoJSON)")
        ->required();
    cmd->add_option("--flood", opt.config.flood_paths,
                    "flood layer (GeoJSON), repeatable");
    cmd->add_option("--flood-label", opt.config.flood_labels,
                    "label per flood layer, repeatable");
    cmd->add_option("--crs", opt.crs, "coordinate mode of inputs")
        ->check(CLI::IsMember({"planar", "lonlat"}))
        ->capture_default_str();
    if (need_sci) {
        cmd->add_option("--sci", opt.config.sci_path,
                        "scaled SCI edge list (TSV)");
        cmd->add_option("--raw", opt.config.raw_path,
                        "raw friendship counts (TSV)");
        cmd->add_option("--users", opt.config.users_path,
                        "user counts per zone (CSV), required with --raw");
    }
}

int run_analyze(AnalyzeOptions& opt) {
    finalize_config(opt);
    const auto outputs = restie::pipeline::run_pipeline(opt.config);
    restie::pipeline::emit_outputs(outputs, opt.out_dir);
    std::cout << "zones: " << outputs.zones.size() << "\n"
              << "edges kept: " << outputs.build_stats.edges_kept << "\n"
              << "median fp_rate: " << outputs.median_fp_rate << "\n"
              << "median res_tie_rate: " << outputs.median_res_tie_rate << "\n";
    if (outputs.t_test.available)
        std::cout << "t-test "
                  << restie::net::to_string(outputs.t_test.groups.first) << " vs "
                  << restie::net::to_string(outputs.t_test.groups.second)
                  << ": t=" << outputs.t_test.result.t_statistic
                  << " p=" << outputs.t_test.result.p_value << "\n";
    else
        std::cout << "t-test unavailable: " << outputs.t_test.reason << "\n";
    for (const auto& w : outputs.warnings)
        std::cerr << "warning: " << w << "\n";
    std::cout << "outputs written to " << opt.out_dir << "\n";
    return 0;
}

int run_overlay_cmd(AnalyzeOptions& opt) {
    finalize_config(opt);
    const auto rates = restie::pipeline::run_overlay(
        opt.config.zones_path, opt.config.flood_paths, opt.config.flood_labels,
        opt.config.crs_mode, opt.config.threads);
    std::filesystem::create_directories(opt.out_dir);
    const auto path =
        (std::filesystem::path(opt.out_dir) / "fp_rates.csv").string();
    restie::geo::write_text_file(path,
                                 restie::pipeline::fp_rates_to_csv(rates));
    std::cout << "zones: " << rates.size() << "\n"
              << "fp rates written to " << path << "\n";
    return 0;
}

int run_check(AnalyzeOptions& opt) {
    finalize_config(opt);
    const auto report = restie::pipeline::run_check(opt.config);
    std::cout << "zones: " << report.zones << "\n";
    if (!opt.config.flood_paths.empty())
        std::cout << "flood layers: " << report.flood_layers << "\n";
    if (report.sci_checked) {
        std::cout << "edges: " << report.edges << "\n"
                  << "rows read: " << report.ingest_stats.rows_read << "\n"
                  << "rows kept: " << report.ingest_stats.rows_kept << "\n"
                  << "rows dropped (unknown zone): "
                  << report.ingest_stats.rows_dropped_unknown_zone << "\n"
                  << "self pairs: " << report.ingest_stats.self_pairs << "\n";
    }
    for (const auto& w : report.warnings)
        std::cerr << "warning: " << w << "\n";
    std::cout << "inputs OK\n";
    return 0;
}

int run_synth(const restie::synth::SynthParams& params,
              const std::string& out_dir) {
    const auto community = restie::synth::generate_community(params);
    restie::synth::write_community(community, out_dir);
    std::cout << "zones: " << community.zones.size() << "\n"
              << "edges: " << community.edges.edges.size() << "\n"
              << "community written to " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hazard-exposure heterophily analytics for socio-spatial "
                 "networks"};
    app.require_subcommand(1);

    AnalyzeOptions analyze_opt;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "run the full pipeline and write result files");
    add_input_flags(analyze, analyze_opt, true);
    analyze
        ->add_option("--min-edge-weight",
                     analyze_opt.config.analysis.min_edge_weight,
                     "drop edges below this weight")
        ->capture_default_str();
    {
        auto* top_k = analyze->add_option_function<std::uint32_t>(
            "--top-k",
            [&](const std::uint32_t& k) {
                analyze_opt.config.analysis.top_k_per_node = k;
            },
            "keep an edge only when in the top k by weight at an endpoint");
        top_k->check(CLI::PositiveNumber);
    }
    analyze->add_flag("--include-self-loops",
                      analyze_opt.config.analysis.include_self_loops,
                      "keep self-pairs in sums and rates");
    analyze->add_option("--skewness", analyze_opt.skewness, "skewness variant")
        ->check(CLI::IsMember({"adjusted", "biased"}))
        ->capture_default_str();
    analyze
        ->add_option("--ttest-groups", analyze_opt.ttest_groups,
                     "group pair for the income t-test")
        ->capture_default_str();
    analyze->add_option("--min-population", analyze_opt.min_population,
                        "exclude zones with a known population below this");
    analyze
        ->add_option("--bins", analyze_opt.config.histogram_bins,
                     "histogram bin count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    analyze->add_option("--threads", analyze_opt.config.threads,
                        "overlay worker threads (0 = auto)");
    analyze->add_option("--out", analyze_opt.out_dir, "output directory")
        ->required();

    restie::synth::SynthParams synth_params;
    std::string synth_out;
    CLI::App* synth =
        app.add_subcommand("synth", "generate a synthetic community");
    synth->add_option("--grid-w", synth_params.grid_w, "grid width in zones")
        ->capture_default_str();
    synth->add_option("--grid-h", synth_params.grid_h, "grid height in zones")
        ->capture_default_str();
    synth
        ->add_option("--income-low", synth_params.income_low,
                     "lower end of the income range")
        ->capture_default_str();
    synth
        ->add_option("--income-high", synth_params.income_high,
                     "upper end of the income range")
        ->capture_default_str();
    synth
        ->add_option("--income-smoothness", synth_params.income_smoothness,
                     "spatial autocorrelation length in cells")
        ->capture_default_str();
    synth
        ->add_option("--flood-income-corr", synth_params.flood_income_corr,
                     "flood tendency toward low-income cells, in [-1, 1]")
        ->capture_default_str();
    synth
        ->add_option("--homophily", synth_params.homophily_strength,
                     "income-similarity edge preference (h >= 0)")
        ->capture_default_str();
    synth
        ->add_option("--distance-decay", synth_params.distance_decay,
                     "distance decay of edge scores (d >= 0)")
        ->capture_default_str();
    synth
        ->add_option("--edges-per-zone", synth_params.edges_per_zone,
                     "target mean degree")
        ->capture_default_str();
    synth->add_option("--seed", synth_params.seed, "generator seed")
        ->capture_default_str();
    synth->add_option("--out", synth_out, "output directory")->required();

    AnalyzeOptions overlay_opt;
    CLI::App* overlay = app.add_subcommand(
        "overlay", "compute per-zone floodplain percentages only");
    add_input_flags(overlay, overlay_opt, false);
    overlay->add_option("--threads", overlay_opt.config.threads,
                        "overlay worker threads (0 = auto)");
    overlay->add_option("--out", overlay_opt.out_dir, "output directory")
        ->required();

    AnalyzeOptions check_opt;
    CLI::App* check = app.add_subcommand(
        "check", "validate inputs and print ingest statistics");
    add_input_flags(check, check_opt, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(analyze)) return run_analyze(analyze_opt);
        if (app.got_subcommand(synth)) return run_synth(synth_params, synth_out);
        if (app.got_subcommand(overlay)) return run_overlay_cmd(overlay_opt);
        if (app.got_subcommand(check)) return run_check(check_opt);
    } catch (const restie::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const restie::NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const restie::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
