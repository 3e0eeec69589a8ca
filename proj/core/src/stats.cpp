#include "axiswalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace axiswalk {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples) : x_(std::move(samples))
{
    if (x_.empty())
        throw std::invalid_argument("empirical distribution needs at least one sample");
    for (double v : x_)
        if (std::isnan(v))
            throw std::invalid_argument("empirical distribution got NaN");
    std::sort(x_.begin(), x_.end());
}

double ecdf_at(const EmpiricalDistribution& d, double t)
{
    const auto x = d.sorted();
    const auto it = std::upper_bound(x.begin(), x.end(), t);
    return static_cast<double>(it - x.begin()) / static_cast<double>(x.size());
}

double quantile(const EmpiricalDistribution& d, double p)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("quantile level must be in [0, 1]");
    const auto x = d.sorted();
    const double n = static_cast<double>(x.size());
    auto k = static_cast<std::int64_t>(std::ceil(p * n)) - 1;
    k = std::clamp<std::int64_t>(k, 0, static_cast<std::int64_t>(x.size()) - 1);
    // Guard against p * n rounding just above an integer.
    while (k > 0 && static_cast<double>(k) / n >= p)
        --k;
    return x[static_cast<std::size_t>(k)];
}

double dkw_band(std::int64_t n, double delta)
{
    if (n < 1)
        throw std::invalid_argument("DKW band needs n >= 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::domain_error("DKW confidence parameter must be in (0, 1)");
    return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

ExponentFit tail_exponent_fit(std::span<const std::pair<double, double>> points)
{
    if (points.size() < 3)
        throw std::invalid_argument("exponent fit needs at least three points");
    std::vector<double> lx, ly;
    lx.reserve(points.size());
    ly.reserve(points.size());
    for (auto [x, y] : points)
    {
        if (!(x > 0.0) || !(y > 0.0))
            throw std::invalid_argument("exponent fit needs positive coordinates");
        lx.push_back(std::log(x));
        ly.push_back(std::log(y));
    }
    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t j = 0; j < lx.size(); ++j)
    {
        mx += lx[j];
        my += ly[j];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t j = 0; j < lx.size(); ++j)
    {
        sxx += (lx[j] - mx) * (lx[j] - mx);
        sxy += (lx[j] - mx) * (ly[j] - my);
        syy += (ly[j] - my) * (ly[j] - my);
    }
    if (!(sxx > 1e-300))
        throw std::domain_error("exponent fit is rank deficient: all x coincide");
    ExponentFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ssr = 0.0;
    for (std::size_t j = 0; j < lx.size(); ++j)
    {
        const double e = ly[j] - (f.intercept + f.slope * lx[j]);
        ssr += e * e;
    }
    f.stderr_slope = std::sqrt(ssr / (n - 2.0) / sxx);
    f.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    f.points_used = static_cast<std::int64_t>(lx.size());
    return f;
}

std::vector<std::pair<double, double>> ecdf_points(const EmpiricalDistribution& d,
                                                   std::span<const double> grid,
                                                   double min_count)
{
    const double floor = min_count / static_cast<double>(d.size());
    std::vector<std::pair<double, double>> out;
    for (double t : grid)
    {
        const double p = ecdf_at(d, t);
        if (p >= floor && p > 0.0)
            out.emplace_back(t, p);
    }
    return out;
}

double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b)
{
    const auto x = a.sorted();
    const auto y = b.sorted();
    const double na = static_cast<double>(x.size());
    const double nb = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double worst = 0.0;
    while (i < x.size() || j < y.size())
    {
        double t;
        if (j >= y.size() || (i < x.size() && x[i] <= y[j]))
            t = x[i];
        else
            t = y[j];
        while (i < x.size() && x[i] <= t)
            ++i;
        while (j < y.size() && y[j] <= t)
            ++j;
        worst = std::max(worst, std::fabs(static_cast<double>(i) / na
                                          - static_cast<double>(j) / nb));
    }
    return worst;
}

double sample_mean(std::span<const double> v)
{
    if (v.empty())
        throw std::invalid_argument("mean of an empty sample");
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v)
{
    if (v.size() < 2)
        throw std::invalid_argument("variance needs at least two samples");
    const double m = sample_mean(v);
    double s = 0.0;
    for (double x : v)
        s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

VarianceScaling variance_scaling(const std::map<std::int64_t, std::vector<double>>& groups)
{
    VarianceScaling out;
    for (auto const& [i, samples] : groups)
    {
        if (samples.size() < 2)
            throw std::invalid_argument("variance group " + std::to_string(i)
                                        + " has fewer than two samples");
        const double v = sample_variance(samples);
        if (v == 0.0)
        {
            out.zero_variance = true;
            continue;
        }
        out.points.emplace_back(static_cast<double>(i), v);
    }
    if (out.points.size() >= 3)
        out.fit = tail_exponent_fit(out.points);
    return out;
}

} // namespace axiswalk
