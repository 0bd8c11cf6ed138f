#include <benchmark/benchmark.h>

#include "restie/overlay.hpp"
#include "restie/rng.hpp"
#include "test_util.hpp"

using namespace restie;

namespace {

geo::MultiPolygon rect(double x0, double y0, double x1, double y1) {
    geo::Ring r;
    r.vertices = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}};
    geo::MultiPolygon mp;
    mp.polygons.push_back({std::move(r), {}});
    return mp;
}

std::vector<geo::MultiPolygon> random_rects(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<geo::MultiPolygon> out;
    out.reserve(n);
    const double extent = std::sqrt(static_cast<double>(n)) * 2.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = rng.uniform(0, extent);
        const double y = rng.uniform(0, extent);
        const double w = rng.uniform(0.3, 2.5);
        const double h = rng.uniform(0.3, 2.5);
        out.push_back(rect(x, y, x + w, y + h));
    }
    return out;
}

} // namespace

static void BM_UnionAll(benchmark::State& state) {
    const auto parts = random_rects(static_cast<std::size_t>(state.range(0)), 7);
    for (auto _ : state) {
        auto u = overlay::union_all(parts);
        benchmark::DoNotOptimize(u);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_UnionAll)->Arg(64)->Arg(256)->Arg(1024);

static void BM_PairwiseBoolean(benchmark::State& state) {
    Rng rng(11);
    const int side = static_cast<int>(state.range(0));
    const auto a = testutil::grid_multipolygon(
        testutil::random_cells(rng, side, side, 0.5), 0, 0, 1.0);
    const auto b = testutil::grid_multipolygon(
        testutil::random_cells(rng, side, side, 0.5), 0.37, 0.59, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(overlay::boolean_op(a, b, overlay::BoolOp::Union));
        benchmark::DoNotOptimize(overlay::polygon_intersection_area(a, b));
    }
}
BENCHMARK(BM_PairwiseBoolean)->Arg(8)->Arg(16)->Arg(32);

static void BM_FloodRates(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t side = static_cast<std::size_t>(
        std::llround(std::sqrt(static_cast<double>(n))));
    std::vector<geo::Zone> zones;
    for (std::size_t r = 0; r < side; ++r)
        for (std::size_t c = 0; c < side; ++c) {
            geo::Zone z;
            z.zone_id = "Z" + std::to_string(r * side + c);
            z.geometry = rect(static_cast<double>(c), static_cast<double>(r),
                              c + 1.0, r + 1.0);
            zones.push_back(std::move(z));
        }
    Rng rng(5);
    const auto flood = testutil::grid_multipolygon(
        testutil::random_cells(rng, static_cast<int>(side),
                               static_cast<int>(side), 0.4),
        0.25, 0.4, 1.0);
    for (auto _ : state) {
        auto rates = overlay::compute_fp_rates(zones, flood, 1);
        benchmark::DoNotOptimize(rates);
    }
    state.SetItemsProcessed(state.iterations() * zones.size());
}
BENCHMARK(BM_FloodRates)->Arg(100)->Arg(400);
