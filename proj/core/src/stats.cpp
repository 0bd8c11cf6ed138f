#include "restie/stats.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "restie/error.hpp"
#include "restie/geojson.hpp"
#include "restie/network.hpp"

namespace restie::stats {

double median(std::vector<double> values) {
    if (values.empty())
        throw NumericError("median of an empty list is undefined");
    const std::size_t n = values.size();
    const std::size_t mid = n / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    const double upper = values[mid];
    if (n % 2 == 1) return upper;
    const double lower =
        *std::max_element(values.begin(), values.begin() + mid);
    return (lower + upper) / 2.0;
}

double skewness(std::span<const double> values, SkewnessVariant variant) {
    const std::size_t n = values.size();
    if (n < 3)
        throw NumericError("skewness needs at least 3 values, got " +
                           std::to_string(n));
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double m2 = 0.0, m3 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    if (m2 == 0.0)
        throw NumericError("skewness undefined for zero-variance sample");
    const double g1 = m3 / std::pow(m2, 1.5);
    if (variant == SkewnessVariant::Biased) return g1;
    const double nd = static_cast<double>(n);
    return g1 * std::sqrt(nd * (nd - 1.0)) / (nd - 2.0);
}

namespace {

// Lentz's continued fraction for the incomplete beta function.
double beta_continued_fraction(double a, double b, double x) {
    constexpr double kTiny = 1e-30;
    constexpr double kEps = 3e-15;
    constexpr int kMaxIterations = 2000;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw NumericError("incomplete beta did not converge");
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw NumericError("incomplete beta requires positive parameters");
    if (x < 0.0 || x > 1.0)
        throw NumericError("incomplete beta requires x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                             std::lgamma(b) + a * std::log(x) +
                             b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (!(df > 0.0))
        throw NumericError("student_t_cdf requires df > 0");
    if (std::isnan(t)) return std::nan("");
    if (t == 0.0) return 0.5;
    const double x = df / (df + t * t);
    const double tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x);
    return t > 0.0 ? 1.0 - tail : tail;
}

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0))
        throw NumericError("student_t_two_sided_p requires df > 0");
    if (t == 0.0) return 1.0;
    const double x = df / (df + t * t);
    return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b,
                         double alpha) {
    if (a.size() < 2 || b.size() < 2)
        throw NumericError("welch_t_test needs at least 2 values per sample (" +
                           std::to_string(a.size()) + " and " +
                           std::to_string(b.size()) + " given)");
    const auto mean_var = [](std::span<const double> s) {
        double mean = 0.0;
        for (double v : s) mean += v;
        mean /= static_cast<double>(s.size());
        double ss = 0.0;
        for (double v : s) ss += (v - mean) * (v - mean);
        return std::pair<double, double>(mean,
                                         ss / static_cast<double>(s.size() - 1));
    };
    const auto [mean_a, var_a] = mean_var(a);
    const auto [mean_b, var_b] = mean_var(b);
    if (var_a == 0.0 && var_b == 0.0)
        throw NumericError("welch_t_test undefined: both samples have zero variance");

    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double se_a = var_a / na;
    const double se_b = var_b / nb;
    const double se = std::sqrt(se_a + se_b);
    const double t = (mean_a - mean_b) / se;
    const double df = (se_a + se_b) * (se_a + se_b) /
                      (se_a * se_a / (na - 1.0) + se_b * se_b / (nb - 1.0));

    TTestResult result;
    result.mean_a = mean_a;
    result.mean_b = mean_b;
    result.t_statistic = t;
    result.degrees_of_freedom = df;
    result.p_value = student_t_two_sided_p(t, df);
    result.alpha = alpha;
    result.significant = result.p_value < alpha;
    return result;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw NumericError("pearson_correlation needs two equal-length samples "
                           "of size >= 2");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw NumericError("pearson_correlation undefined for zero variance");
    return sxy / std::sqrt(sxx * syy);
}

std::vector<GroupSummary> group_income_summary(
    const std::vector<net::ZoneMetrics>& metrics,
    const std::vector<geo::Zone>& zones) {
    std::unordered_map<std::string, const geo::Zone*> zone_of;
    for (const auto& z : zones) zone_of.emplace(z.zone_id, &z);

    const net::Group order[] = {net::Group::G1, net::Group::G2, net::Group::G3,
                                net::Group::G4};
    std::vector<GroupSummary> out;
    for (net::Group g : order) {
        GroupSummary summary;
        summary.group = g;
        double total = 0.0;
        std::size_t with_income = 0;
        for (const auto& m : metrics) {
            if (m.group != g) continue;
            ++summary.count;
            auto it = zone_of.find(m.zone_id);
            if (it != zone_of.end() && it->second->median_household_income) {
                total += *it->second->median_household_income;
                ++with_income;
            } else {
                ++summary.income_missing;
            }
        }
        if (with_income > 0)
            summary.mean_income = total / static_cast<double>(with_income);
        out.push_back(summary);
    }
    return out;
}

} // namespace restie::stats
