#include "restie/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

#include "restie/error.hpp"
#include "restie/rng.hpp"

namespace restie::synth {

namespace {

void validate(const SynthParams& p) {
    if (static_cast<std::uint64_t>(p.grid_w) * p.grid_h < 4)
        throw UsageError("synth: grid must have at least 4 cells");
    if (!(p.income_low < p.income_high))
        throw UsageError("synth: income_low must be below income_high");
    if (!(p.flood_income_corr >= -1.0 && p.flood_income_corr <= 1.0))
        throw UsageError("synth: flood_income_corr must lie in [-1, 1]");
    if (!(p.homophily_strength >= 0.0))
        throw UsageError("synth: homophily_strength must be >= 0");
    if (!(p.distance_decay >= 0.0))
        throw UsageError("synth: distance_decay must be >= 0");
    if (!(p.edges_per_zone > 0.0))
        throw UsageError("synth: edges_per_zone must be > 0");
    if (!(p.income_smoothness >= 0.0))
        throw UsageError("synth: income_smoothness must be >= 0");
}

std::string zone_name(std::size_t index, int width) {
    std::ostringstream out;
    out << 'Z';
    std::string digits = std::to_string(index);
    for (int i = static_cast<int>(digits.size()); i < width; ++i) out << '0';
    out << digits;
    return out.str();
}

// clamped-window box filter along one axis of a row-major grid
std::vector<double> box_filter(const std::vector<double>& field, std::size_t w,
                               std::size_t h, std::size_t radius, bool rows) {
    if (radius == 0) return field;
    std::vector<double> out(field.size());
    const std::size_t outer = rows ? h : w;
    const std::size_t inner = rows ? w : h;
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t i = 0; i < inner; ++i) {
            const std::size_t lo = i >= radius ? i - radius : 0;
            const std::size_t hi = std::min(inner - 1, i + radius);
            double acc = 0.0;
            for (std::size_t k = lo; k <= hi; ++k)
                acc += rows ? field[o * w + k] : field[k * w + o];
            const double v = acc / static_cast<double>(hi - lo + 1);
            if (rows)
                out[o * w + i] = v;
            else
                out[i * w + o] = v;
        }
    }
    return out;
}

geo::MultiPolygon cell_rect(double x0, double y0, double x1, double y1) {
    geo::Ring ring;
    ring.vertices = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}};
    geo::MultiPolygon mp;
    mp.polygons.push_back(geo::PolygonWithHoles{std::move(ring), {}});
    return mp;
}

} // namespace

Community generate_community(const SynthParams& params) {
    validate(params);
    const std::size_t w = params.grid_w;
    const std::size_t h = params.grid_h;
    const std::size_t n = w * h;
    const int name_width = static_cast<int>(std::to_string(n - 1).size());

    Rng rng(params.seed);

    // ---- income: smoothed uniform noise, min-max mapped to the range ----
    std::vector<double> noise(n);
    for (auto& v : noise) v = rng.uniform();
    const std::size_t radius =
        static_cast<std::size_t>(std::llround(params.income_smoothness));
    std::vector<double> smooth = box_filter(noise, w, h, radius, true);
    smooth = box_filter(smooth, w, h, radius, false);
    const auto [mn_it, mx_it] = std::minmax_element(smooth.begin(), smooth.end());
    const double mn = *mn_it, mx = *mx_it;
    std::vector<double> income(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = mx > mn ? (smooth[i] - mn) / (mx - mn) : 0.5;
        income[i] = params.income_low +
                    t * (params.income_high - params.income_low);
    }

    // ---- flood coverage: blend of negative income rank and noise ----
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return income[a] < income[b];
    });
    std::vector<double> income_rank(n); // 0 = poorest .. 1 = richest
    for (std::size_t r = 0; r < n; ++r)
        income_rank[order[r]] =
            static_cast<double>(r) / static_cast<double>(n - 1);

    const double gamma = params.flood_income_corr;
    std::vector<double> fraction(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        double f;
        if (gamma >= 0.0)
            f = gamma * (1.0 - income_rank[i]) + (1.0 - gamma) * u;
        else
            f = -gamma * income_rank[i] + (1.0 + gamma) * u;
        fraction[i] = std::clamp(f, 0.0, 1.0);
    }

    // ---- population ----
    std::vector<double> population(n);
    for (auto& p : population) p = 500.0 + std::floor(4500.0 * rng.uniform());

    // ---- zones and flood rectangles ----
    Community community;
    community.zones.reserve(n);
    community.flood_fraction = fraction;
    geo::FloodLayer layer_even{"100yr", {}};
    geo::FloodLayer layer_odd{"500yr", {}};
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            const std::size_t i = r * w + c;
            const double x0 = static_cast<double>(c);
            const double y0 = static_cast<double>(r);
            geo::Zone zone;
            zone.zone_id = zone_name(i, name_width);
            zone.geometry = cell_rect(x0, y0, x0 + 1.0, y0 + 1.0);
            zone.median_household_income = std::round(income[i]);
            zone.population = population[i];
            community.zones.push_back(std::move(zone));

            const double f = fraction[i];
            if (f >= 1e-6) {
                geo::MultiPolygon rect = cell_rect(x0, y0, x0 + f, y0 + 1.0);
                auto& layer = (r + c) % 2 == 0 ? layer_even : layer_odd;
                layer.geometry.polygons.push_back(std::move(rect.polygons[0]));
            }
        }
    }
    community.flood_layers.push_back(std::move(layer_even));
    community.flood_layers.push_back(std::move(layer_odd));

    // ---- edges: weighted sample of pairs via Gumbel top-m keys ----
    double inc_mean = 0.0;
    for (double v : income) inc_mean += v;
    inc_mean /= static_cast<double>(n);
    double inc_var = 0.0;
    for (double v : income) inc_var += (v - inc_mean) * (v - inc_mean);
    const double inc_sd = std::sqrt(inc_var / static_cast<double>(n));

    struct Candidate {
        double key;
        double score;
        std::uint32_t a, b;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(n * (n - 1) / 2);
    for (std::uint32_t a = 0; a < n; ++a) {
        const double ax = static_cast<double>(a % w) + 0.5;
        const double ay = static_cast<double>(a / w) + 0.5;
        for (std::uint32_t b = a + 1; b < n; ++b) {
            const double bx = static_cast<double>(b % w) + 0.5;
            const double by = static_cast<double>(b / w) + 0.5;
            const double dist = std::hypot(ax - bx, ay - by);
            const double gap =
                inc_sd > 0.0 ? std::abs(income[a] - income[b]) / inc_sd : 0.0;
            const double log_score = -gap * params.homophily_strength -
                                     dist * params.distance_decay;
            const double u =
                (static_cast<double>(rng.next_u64() >> 11) + 0.5) * 0x1.0p-53;
            const double gumbel = -std::log(-std::log(u));
            candidates.push_back(
                Candidate{log_score + gumbel, log_score, a, b});
        }
    }
    const std::size_t target = std::min<std::size_t>(
        candidates.size(),
        static_cast<std::size_t>(std::llround(
            static_cast<double>(n) * params.edges_per_zone / 2.0)));
    std::partial_sort(candidates.begin(), candidates.begin() + target,
                      candidates.end(), [](const Candidate& x, const Candidate& y) {
                          if (x.key != y.key) return x.key > y.key;
                          if (x.a != y.a) return x.a < y.a;
                          return x.b < y.b;
                      });
    candidates.resize(target);

    double max_log_score = -std::numeric_limits<double>::infinity();
    for (const auto& c : candidates)
        max_log_score = std::max(max_log_score, c.score);

    community.edges.edges.reserve(target);
    for (const auto& c : candidates) {
        // scale so the strongest sampled tie gets 1e9, mirroring the SCI range
        const double scaled = 1e9 * std::exp(c.score - max_log_score);
        const std::uint64_t weight =
            std::max<std::int64_t>(1, std::llround(scaled));
        community.edges.edges.push_back(sci::EdgeRecord{
            zone_name(c.a, name_width), zone_name(c.b, name_width), weight});
    }
    std::sort(community.edges.edges.begin(), community.edges.edges.end(),
              [](const sci::EdgeRecord& x, const sci::EdgeRecord& y) {
                  return std::tie(x.loc_a, x.loc_b) <
                         std::tie(y.loc_a, y.loc_b);
              });
    return community;
}

std::string edges_to_tsv(const sci::EdgeList& edges) {
    std::string out = "user_loc\tfr_loc\tscaled_sci\n";
    for (const auto& e : edges.edges) {
        out += e.loc_a;
        out += '\t';
        out += e.loc_b;
        out += '\t';
        out += std::to_string(e.weight);
        out += '\n';
    }
    return out;
}

void write_community(const Community& community, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    geo::write_text_file((dir / "zones.geojson").string(),
                         geo::zones_to_geojson(community.zones));
    for (const auto& layer : community.flood_layers)
        geo::write_text_file(
            (dir / ("flood_" + layer.label + ".geojson")).string(),
            geo::multipolygon_to_geojson(layer.geometry, layer.label));
    geo::write_text_file((dir / "sci.tsv").string(),
                         edges_to_tsv(community.edges));
}

} // namespace restie::synth
