#include <benchmark/benchmark.h>

#include "restie/sci.hpp"

using namespace restie;

namespace {

std::string make_tsv(std::size_t rows, int zone_count) {
    std::string out = "user_loc\tfr_loc\tscaled_sci\n";
    out.reserve(rows * 16);
    std::size_t written = 0;
    for (int i = 0; i < zone_count && written < rows; ++i)
        for (int j = i + 1; j < zone_count && written < rows; ++j) {
            out += 'Z';
            out += std::to_string(i);
            out += '\t';
            out += 'Z';
            out += std::to_string(j);
            out += '\t';
            out += std::to_string(written % 997 + 1);
            out += '\n';
            ++written;
        }
    return out;
}

} // namespace

static void BM_StreamParse(benchmark::State& state) {
    const std::size_t rows = static_cast<std::size_t>(state.range(0));
    const std::string blob = make_tsv(rows, 4000);
    sci::ZoneFilter filter;
    for (int i = 0; i < 100; ++i) filter.insert("Z" + std::to_string(i));
    for (auto _ : state) {
        sci::SciIngest ingest(filter);
        ingest.feed(blob);
        auto result = ingest.finish();
        benchmark::DoNotOptimize(result);
    }
    state.SetBytesProcessed(state.iterations() * blob.size());
    state.SetItemsProcessed(state.iterations() * rows);
}
BENCHMARK(BM_StreamParse)->Arg(100000)->Arg(1000000);

static void BM_StreamParseKeepAll(benchmark::State& state) {
    const std::size_t rows = static_cast<std::size_t>(state.range(0));
    const int zones = 1500; // > 1M pairs available
    const std::string blob = make_tsv(rows, zones);
    sci::ZoneFilter filter;
    for (int i = 0; i < zones; ++i) filter.insert("Z" + std::to_string(i));
    for (auto _ : state) {
        sci::SciIngest ingest(filter);
        ingest.feed(blob);
        auto result = ingest.finish();
        benchmark::DoNotOptimize(result);
    }
    state.SetBytesProcessed(state.iterations() * blob.size());
    state.SetItemsProcessed(state.iterations() * rows);
}
BENCHMARK(BM_StreamParseKeepAll)->Arg(100000);
