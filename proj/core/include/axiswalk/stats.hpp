#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace axiswalk {

//! Sorted sample with a right-continuous ECDF.
class EmpiricalDistribution
{
  public:
    //! Throws std::invalid_argument on an empty or non-finite sample.
    explicit EmpiricalDistribution(std::vector<double> samples);

    std::span<const double> sorted() const noexcept { return x_; }
    std::size_t size() const noexcept { return x_.size(); }

  private:
    std::vector<double> x_;
};

//! Fraction of samples <= t.
double ecdf_at(const EmpiricalDistribution& d, double t);

//! Lower empirical quantile: smallest sample s with ecdf_at(s) >= p.
double quantile(const EmpiricalDistribution& d, double p);

//! Dvoretzky-Kiefer-Wolfowitz half-width sqrt(ln(2 / delta) / (2 n)).
double dkw_band(std::int64_t n, double delta);

struct ExponentFit
{
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double r2 = 0.0;
    std::int64_t points_used = 0;
};

/*!
 * OLS of log y on log x. Throws std::invalid_argument for fewer than three
 * points or non-positive values, std::domain_error when all x coincide.
 */
ExponentFit tail_exponent_fit(std::span<const std::pair<double, double>> points);

/*!
 * (t, ecdf(t)) for every t in grid whose empirical probability is at least
 * min_count / n; points below the floor are dropped.
 */
std::vector<std::pair<double, double>> ecdf_points(const EmpiricalDistribution& d,
                                                   std::span<const double> grid,
                                                   double min_count = 5.0);

//! Two-sample Kolmogorov-Smirnov distance.
double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

//! sup_t |F_n(t) - F(t)| for a continuous reference F.
template<class Cdf>
double ks_distance_to(const EmpiricalDistribution& d, Cdf cdf)
{
    const auto x = d.sorted();
    const double n = static_cast<double>(x.size());
    double worst = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j)
    {
        const double f = cdf(x[j]);
        const double lo = static_cast<double>(j) / n;
        const double hi = static_cast<double>(j + 1) / n;
        worst = std::max({worst, f - lo, hi - f});
    }
    return worst;
}

double sample_mean(std::span<const double> v);
//! Unbiased sample variance; needs at least two values.
double sample_variance(std::span<const double> v);

struct VarianceScaling
{
    ExponentFit fit;
    bool zero_variance = false; //!< some group had zero variance and was dropped
    std::vector<std::pair<double, double>> points; //!< (i, variance)
};

/*!
 * Fits log Var(group) against log i. Throws std::invalid_argument when a
 * group has fewer than two samples.
 */
VarianceScaling variance_scaling(const std::map<std::int64_t, std::vector<double>>& groups);

} // namespace axiswalk
