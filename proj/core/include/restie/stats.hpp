#ifndef RESTIE_STATS_HPP
#define RESTIE_STATS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace restie::net {
enum class Group : std::uint8_t;
struct ZoneMetrics;
} // namespace restie::net

namespace restie::geo {
struct Zone;
} // namespace restie::geo

namespace restie::stats {

enum class SkewnessVariant { Adjusted, Biased };

// Interpolated median: average of the two central order statistics for even n.
double median(std::vector<double> values);

// Biased: g1 = m3 / m2^(3/2) with central moments (1/n sums).
// Adjusted: G1 = g1 * sqrt(n(n-1)) / (n-2).
double skewness(std::span<const double> values, SkewnessVariant variant);

struct TTestResult {
    double mean_a = 0.0;
    double mean_b = 0.0;
    double t_statistic = 0.0;
    double degrees_of_freedom = 0.0;
    double p_value = 1.0;
    double alpha = 0.05;
    bool significant = false;
};

// Welch's unequal-variance two-sided test with Welch-Satterthwaite degrees
// of freedom.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b,
                         double alpha = 0.05);

// Continued-fraction evaluation, absolute error below 1e-12 on the df range
// used here.
double regularized_incomplete_beta(double a, double b, double x);
double student_t_cdf(double t, double df);
double student_t_two_sided_p(double t, double df);

double pearson_correlation(std::span<const double> x, std::span<const double> y);

struct GroupSummary {
    net::Group group;
    std::size_t count = 0;
    std::optional<double> mean_income; // over zones with income present
    std::size_t income_missing = 0;
};

// Per-group count and mean of median_household_income; missing incomes are
// excluded from the mean and counted.
std::vector<GroupSummary> group_income_summary(
    const std::vector<net::ZoneMetrics>& metrics,
    const std::vector<geo::Zone>& zones);

} // namespace restie::stats

#endif
