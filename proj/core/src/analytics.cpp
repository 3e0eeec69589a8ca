#include "axiswalk/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

namespace axiswalk {

namespace {

// Neumaier-compensated running sum.
struct CompensatedSum
{
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) noexcept
    {
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const noexcept { return sum + comp; }
};

void check_alpha(double alpha)
{
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::domain_error("alpha must be positive, got " + std::to_string(alpha));
}

void check_x(std::int64_t x)
{
    if (x < 1)
        throw std::domain_error("x must be >= 1, got " + std::to_string(x));
}

inline double leave_prob(double y, double alpha)
{
    return 0.5 * std::pow(y, -alpha);
}

/*
 * Bound on y0^q + int_{y0}^inf exp(-c (y^(1-a) - y0^(1-a))) y^q dy with
 * c = 1 / (2 (1 - alpha)). The integral becomes a c^-b e^{s0} Gamma(b, s0)
 * with b = a (q + 1), s0 = c y0^(1-alpha), and
 * Gamma(b, s) <= s^(b-1) e^-s s / (s - b + 1) for s > b - 1, b >= 1.
 * Returns +inf when the integrand is not yet decreasing.
 */
double tail_weight_bound(double y0, double alpha, double q)
{
    if (!(alpha < 1.0))
        return std::numeric_limits<double>::infinity();
    const double a = 1.0 / (1.0 - alpha);
    const double c = 0.5 * a;
    const double b = a * (q + 1.0);
    const double s0 = c * std::pow(y0, 1.0 - alpha);
    if (!(s0 > b - 1.0) || !(std::pow(y0, 1.0 - alpha) > 2.0 * q))
        return std::numeric_limits<double>::infinity();
    const double log_int = std::log(a) - b * std::log(c) + (b - 1.0) * std::log(s0)
                           + std::log(s0 / (s0 - b + 1.0));
    return std::pow(y0, q) + std::exp(log_int);
}

// Sum_{k>=0} S_k w_k with S_k = rho_survival(x, alpha, k); w_k >= 0 given by
// weight(k), and |w_k| <= weight_scale (x + k)^q for the tail certificate.
template<class Weight>
SeriesResult survival_series(std::int64_t x, double alpha, Weight weight, double q,
                             double weight_scale)
{
    SeriesResult r;
    if (alpha >= 1.0)
    {
        // P(rho > k) >= C (x / (x + k))^(1/2) for alpha >= 1, not summable.
        r.status = SeriesStatus::Divergent;
        r.value = std::numeric_limits<double>::infinity();
        r.remainder_bound = std::numeric_limits<double>::infinity();
        return r;
    }
    CompensatedSum log_s;
    CompensatedSum total;
    const double xd = static_cast<double>(x);
    for (std::int64_t k = 0; k < series_iteration_cap; ++k)
    {
        log_s.add(std::log1p(-leave_prob(xd + static_cast<double>(k), alpha)));
        const double s_k = std::exp(log_s.value());
        total.add(s_k * weight(k));
        if ((k & 63) == 63 || s_k < 1e-300)
        {
            const double y0 = xd + static_cast<double>(k) + 1.0;
            const double rem = weight_scale * s_k * tail_weight_bound(y0, alpha, q);
            const double scale = std::fabs(total.value());
            if (rem <= 1e-14 * scale || s_k == 0.0)
            {
                r.value = total.value();
                r.remainder_bound = rem;
                r.terms = k + 1;
                return r;
            }
        }
    }
    throw NumericError("survival series did not certify within the iteration cap");
}

// C(2m, m) / 4^m with relative error near machine precision.
double central_binomial(std::int64_t m)
{
    if (m < 64)
    {
        double c = 1.0;
        for (std::int64_t j = 1; j <= m; ++j)
            c *= static_cast<double>(2 * j - 1) / static_cast<double>(2 * j);
        return c;
    }
    const double md = static_cast<double>(m);
    const double inv = 1.0 / md;
    const double inv2 = inv * inv;
    const double log_c = -0.5 * std::log(std::numbers::pi * md) - inv / 8.0
                         + inv * inv2 / 192.0 - inv * inv2 * inv2 / 640.0;
    return std::exp(log_c);
}

// C(2m, m - d) / C(2m, m).
double binomial_ratio(std::int64_t m, std::int64_t d)
{
    double r = 1.0;
    for (std::int64_t j = 1; j <= d; ++j)
    {
        if (j > m)
            return 0.0;
        r *= static_cast<double>(m - j + 1) / static_cast<double>(m + j);
    }
    return r;
}

double lazy_point(std::int64_t h, std::int64_t k)
{
    if (k < h)
        return 0.0;
    const std::int64_t m = k - 1;
    const double base = central_binomial(m) * binomial_ratio(m, h - 1);
    const double md = static_cast<double>(m);
    const double hd = static_cast<double>(h);
    return 0.25 * base * 2.0 * hd * (2.0 * md + 1.0) / ((md + hd) * (md + hd + 1.0));
}

} // namespace

Constants constants(double alpha, std::optional<double> c_est)
{
    check_alpha(alpha);
    Constants k;
    k.alpha = alpha;
    k.c2 = 8.0 / std::sqrt(std::numbers::pi);
    k.left_tail_exponent = (1.0 - alpha) / 2.0;
    if (alpha < 1.0)
    {
        k.c1 = std::pow(2.0 * (1.0 - alpha), 1.0 / (1.0 - alpha));
        k.lln_exponent = 1.0 / (1.0 - alpha);
        k.scaling_exponent = 1.0 / (2.0 * (1.0 - alpha));
    }
    else
    {
        k.c1 = std::numeric_limits<double>::quiet_NaN();
        k.lln_exponent = std::numeric_limits<double>::quiet_NaN();
        k.scaling_exponent = std::numeric_limits<double>::quiet_NaN();
    }
    if (c_est && alpha < 1.0)
        k.g_alpha = *c_est / (2.0 * std::pow(k.c1, alpha));
    k.in_theorem_range = alpha < 0.5;
    return k;
}

double rho_survival(std::int64_t x, double alpha, std::int64_t k)
{
    check_x(x);
    check_alpha(alpha);
    if (k < 0)
        throw std::domain_error("k must be >= 0");
    CompensatedSum log_s;
    const double xd = static_cast<double>(x);
    for (std::int64_t m = 0; m <= k; ++m)
        log_s.add(std::log1p(-leave_prob(xd + static_cast<double>(m), alpha)));
    return std::exp(log_s.value());
}

double rho_survival_bound(std::int64_t x, double alpha, double k)
{
    check_x(x);
    check_alpha(alpha);
    if (!(alpha < 1.0))
        return std::numeric_limits<double>::infinity();
    const double xd = static_cast<double>(x);
    const double c = 1.0 / (2.0 * (1.0 - alpha));
    return std::exp(-c * (std::pow(xd + k, 1.0 - alpha) - std::pow(xd, 1.0 - alpha)));
}

SeriesResult rho_mean_exact(std::int64_t x, double alpha)
{
    check_x(x);
    check_alpha(alpha);
    SeriesResult r = survival_series(x, alpha, [](std::int64_t) { return 1.0; }, 0.0, 1.0);
    if (r.status == SeriesStatus::Converged)
        r.value += static_cast<double>(x);
    return r;
}

SeriesResult rho_moment_exact(std::int64_t x, double alpha, double beta)
{
    check_x(x);
    check_alpha(alpha);
    if (!(beta <= 2.0))
        throw std::domain_error("moment order must be <= 2");
    const double xd = static_cast<double>(x);
    // E f(rho) = f(1) + sum_{k>=0} P(rho > k + 1) (f(k + 2) - f(k + 1)),
    // f(j) = (x + j - 1)^beta.
    auto weight = [&](std::int64_t k) {
        const double y = xd + static_cast<double>(k);
        return std::pow(y + 1.0, beta) - std::pow(y, beta);
    };
    const double q = beta > 1.0 ? beta - 1.0 : 0.0;
    const double scale = 2.0 * std::fabs(beta);
    SeriesResult r = survival_series(x, alpha, weight, q, scale == 0.0 ? 1.0 : scale);
    if (r.status == SeriesStatus::Converged)
        r.value += std::pow(xd, beta);
    return r;
}

double rho_mean_asymptotic(double x, double alpha)
{
    return x + 2.0 * std::pow(x, alpha) - 1.5 - std::pow(x, -alpha) / 6.0;
}

std::vector<double> mean_recurrence(double alpha, double c_est, std::int64_t i_max, double u1)
{
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::domain_error("recurrence needs alpha in [0, 1)");
    if (i_max < 1)
        throw std::invalid_argument("i_max must be >= 1");
    if (!(u1 > 0.0))
        throw std::domain_error("u1 must be positive");
    std::vector<double> u(static_cast<std::size_t>(i_max));
    u[0] = u1;
    for (std::size_t j = 1; j < u.size(); ++j)
    {
        const double prev = u[j - 1];
        u[j] = prev + 2.0 * std::pow(prev, alpha) + c_est;
        if (!(u[j] > 0.0) || !std::isfinite(u[j]))
            throw NumericError("mean recurrence left the positive reals at i = "
                               + std::to_string(j + 1));
    }
    return u;
}

double closed_form_v(double alpha, double c_est, double i)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("closed form needs alpha in (0, 1)");
    const Constants k = constants(alpha, c_est);
    const double g = *k.g_alpha;
    const double inner = i + g * std::pow(i, (1.0 - 2.0 * alpha) / (1.0 - alpha));
    return k.c1 * std::pow(inner, 1.0 / (1.0 - alpha));
}

double arcsine_cdf(double eps)
{
    if (!(eps >= 0.0 && eps <= 1.0))
        throw std::domain_error("arcsine cdf is defined on [0, 1]");
    return 2.0 / std::numbers::pi * std::asin(std::sqrt(eps));
}

double lazy_survival(std::int64_t h, std::int64_t k)
{
    if (h < 1)
        throw std::domain_error("height must be >= 1");
    if (k < 0)
        return 1.0;
    // P(1 - h <= L_k <= h), L_k = Bin(2k, 1/2) - k.
    const double c = central_binomial(k);
    double inner = 1.0;
    for (std::int64_t d = 1; d < h; ++d)
    {
        const double r = binomial_ratio(k, d);
        if (r == 0.0)
            break;
        inner += 2.0 * r;
    }
    inner += binomial_ratio(k, h);
    return std::min(1.0, c * inner);
}

DiscreteDistribution lazy_first_passage(std::int64_t h, std::int64_t n_max)
{
    if (h < 1)
        throw std::domain_error("height must be >= 1");
    if (n_max < 1)
        throw std::domain_error("n_max must be >= 1");
    DiscreteDistribution d;
    d.offset = 1;
    d.probabilities.resize(static_cast<std::size_t>(n_max));
    for (std::int64_t k = 1; k <= n_max; ++k)
        d.probabilities[static_cast<std::size_t>(k - 1)] = lazy_point(h, k);
    d.tail_mass = lazy_survival(h, n_max);
    d.tail_survival = [h](std::int64_t k) { return lazy_survival(h, k); };
    return d;
}

DiscreteDistribution lazy_first_passage_dp(std::int64_t h, std::int64_t n_max)
{
    if (h < 1)
        throw std::domain_error("height must be >= 1");
    if (n_max < 1)
        throw std::domain_error("n_max must be >= 1");
    const auto top = static_cast<std::size_t>(h + n_max + 1);
    std::vector<double> q(top + 2, 0.0), next(top + 2, 0.0);
    q[static_cast<std::size_t>(h)] = 1.0;
    DiscreteDistribution d;
    d.offset = 1;
    d.probabilities.resize(static_cast<std::size_t>(n_max));
    for (std::int64_t k = 1; k <= n_max; ++k)
    {
        const std::int64_t lo = std::max<std::int64_t>(1, h - k + 1);
        const std::int64_t hi = h + k - 1;
        d.probabilities[static_cast<std::size_t>(k - 1)] = 0.25 * q[1];
        for (std::int64_t j = lo - 1 < 1 ? 1 : lo - 1; j <= hi + 1; ++j)
        {
            const auto u = static_cast<std::size_t>(j);
            next[u] = 0.5 * q[u] + 0.25 * q[u + 1] + (j > 1 ? 0.25 * q[u - 1] : 0.0);
        }
        std::swap(q, next);
    }
    CompensatedSum rest;
    for (double v : q)
        rest.add(v);
    d.tail_mass = rest.value();
    return d;
}

DiscreteSampler::DiscreteSampler(const DiscreteDistribution& dist)
    : offset_(dist.offset), tail_mass_(dist.tail_mass), tail_survival_(dist.tail_survival)
{
    survival_.resize(dist.probabilities.size());
    CompensatedSum acc;
    acc.add(dist.tail_mass);
    for (std::size_t j = dist.probabilities.size(); j-- > 0;)
    {
        survival_[j] = acc.value();
        acc.add(dist.probabilities[j]);
    }
}

std::int64_t DiscreteSampler::sample_from(double w) const
{
    if (!survival_.empty() && w > survival_.back())
    {
        // First j with survival_[j] < w; survival_ is non-increasing.
        auto it = std::lower_bound(survival_.begin(), survival_.end(), w,
                                   [](double s, double v) { return s >= v; });
        return offset_ + static_cast<std::int64_t>(it - survival_.begin());
    }
    const std::int64_t last = offset_ + static_cast<std::int64_t>(survival_.size()) - 1;
    if (!tail_survival_)
        return last + 1;
    constexpr std::int64_t cap = std::int64_t{1} << 62;
    std::int64_t lo = last; // S(lo) >= w
    std::int64_t hi = std::max<std::int64_t>(last + 1, 1);
    while (tail_survival_(hi) >= w)
    {
        lo = hi;
        if (hi >= cap / 2)
            return cap;
        hi *= 2;
    }
    while (hi - lo > 1)
    {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (tail_survival_(mid) < w)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

StableLimitOracle stable_oracle_build(const DiscreteDistribution& inter_arrival, std::int64_t i,
                                      std::int64_t replicas, std::uint64_t seed, unsigned threads)
{
    if (i < 1 || replicas < 1)
        throw std::invalid_argument("oracle needs i >= 1 and replicas >= 1");
    if (!inter_arrival.tail_survival && inter_arrival.tail_mass > oracle_max_tail_mass)
        throw std::invalid_argument("inter-arrival tail mass "
                                    + std::to_string(inter_arrival.tail_mass)
                                    + " exceeds the oracle limit; extend n_max");
    const DiscreteSampler sampler(inter_arrival);
    StableLimitOracle oracle;
    oracle.i = i;
    oracle.samples.resize(static_cast<std::size_t>(replicas));
    const double scale = static_cast<double>(i) * static_cast<double>(i);

    auto work = [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t r = begin; r < end; ++r)
        {
            RngStream rng(seed, static_cast<std::uint64_t>(r));
            double h = 0.0;
            for (std::int64_t j = 0; j < i; ++j)
                h += static_cast<double>(sampler(rng));
            oracle.samples[static_cast<std::size_t>(r)] = h / scale;
        }
    };
    const unsigned nt = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(replicas)));
    if (nt == 1)
        work(0, replicas);
    else
    {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t)
            pool.emplace_back(work, replicas * t / nt, replicas * (t + 1) / nt);
        for (auto& th : pool)
            th.join();
    }
    std::sort(oracle.samples.begin(), oracle.samples.end());
    return oracle;
}

double stable_oracle_cdf(const StableLimitOracle& oracle, double t)
{
    if (oracle.samples.empty())
        throw std::invalid_argument("empty oracle");
    const auto it = std::upper_bound(oracle.samples.begin(), oracle.samples.end(), t);
    return static_cast<double>(it - oracle.samples.begin())
           / static_cast<double>(oracle.samples.size());
}

TheoremValue theorem_left_tail(double alpha, double a)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("left-tail bound needs alpha in (0, 1)");
    if (!(a > 0.0))
        throw std::domain_error("a must be positive");
    const Constants k = constants(alpha);
    TheoremValue v;
    v.value = k.c2 * std::pow(a / k.c1, (1.0 - alpha) / 2.0);
    v.out_of_range = v.value >= 1.0 - 1e-12;
    return v;
}

double theorem_scaling(double alpha, double z, double n)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("scaling needs alpha in (0, 1)");
    if (!(n > 0.0))
        throw std::domain_error("n must be positive");
    return z / std::pow(n, 1.0 / (2.0 * (1.0 - alpha)));
}

} // namespace axiswalk
