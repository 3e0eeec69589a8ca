#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "axiswalk/analytics.hpp"
#include "axiswalk/model.hpp"
#include "axiswalk/simulate.hpp"
#include "axiswalk/stats.hpp"

using namespace axiswalk;

TEST_CASE("constants")
{
    CHECK(constants(0.5).c1 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(constants(1e-9).c1 == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(constants(0.25).c1 == doctest::Approx(std::pow(1.5, 4.0 / 3.0)).epsilon(1e-15));
    CHECK(constants(0.2).c1 == doctest::Approx(std::pow(1.6, 1.25)).epsilon(1e-15));
    CHECK(constants(0.3).c2 == doctest::Approx(4.51352).epsilon(1e-6));
    const Constants k = constants(0.25, 1.0);
    CHECK(k.lln_exponent == doctest::Approx(4.0 / 3.0));
    CHECK(k.scaling_exponent == doctest::Approx(2.0 / 3.0));
    CHECK(k.left_tail_exponent == doctest::Approx(0.375));
    REQUIRE(k.g_alpha.has_value());
    CHECK(*k.g_alpha == doctest::Approx(1.0 / (2.0 * std::pow(k.c1, 0.25))));
    CHECK(k.in_theorem_range);
    CHECK_FALSE(constants(0.5).in_theorem_range);
    CHECK_FALSE(constants(0.2).g_alpha.has_value());
}

TEST_CASE("rho survival: small cases")
{
    for (double a : {0.1, 0.5, 2.0})
        CHECK(rho_survival(1, a, 0) == 0.5);
    CHECK(rho_survival(1, 0.5, 1) == doctest::Approx(0.5 * (1.0 - 1.0 / (2.0 * std::sqrt(2.0)))));
    CHECK(rho_survival(1, 0.5, 1) == doctest::Approx(0.32322).epsilon(1e-5));
}

TEST_CASE("rho survival: 50-digit product")
{
    using boost::multiprecision::cpp_bin_float_50;
    const std::int64_t x = 1'000'000, k = 10'000;
    const cpp_bin_float_50 a("0.3");
    cpp_bin_float_50 prod = 1;
    for (std::int64_t m = 0; m <= k; ++m)
        prod *= 1 - 1 / (2 * boost::multiprecision::pow(cpp_bin_float_50(x + m), a));
    const double ref = prod.convert_to<double>();
    const double got = rho_survival(x, 0.3, k);
    CHECK(std::fabs(got - ref) <= 1e-12 * ref);
}

TEST_CASE("rho mean: frozen high-precision values")
{
    struct Ref
    {
        std::int64_t x;
        double alpha;
        double value;
    };
    // independent 40-digit summations of x + sum_k prod_{m<=k}(1 - (x+m)^-a / 2)
    for (const Ref r : {Ref{1, 0.5, 3.0999665640194199608}, Ref{10, 0.3, 13.313936541618378782},
                        Ref{1000, 0.2, 1006.9731820846451966}, Ref{100, 0.4, 112.19360179112782781},
                        Ref{5, 0.75, 21.725193638598321171}})
    {
        const SeriesResult s = rho_mean_exact(r.x, r.alpha);
        CHECK(s.status == SeriesStatus::Converged);
        CHECK(s.value == doctest::Approx(r.value).epsilon(1e-12));
        CHECK(s.remainder_bound <= 1e-13 * s.value);
        CHECK(s.value >= static_cast<double>(r.x));
    }
}

TEST_CASE("rho moments: frozen values and consistency")
{
    CHECK(rho_moment_exact(10, 0.3, 2.0).value
          == doctest::Approx(194.40577151146313265).epsilon(1e-12));
    CHECK(rho_moment_exact(50, 0.25, 1.5).value
          == doctest::Approx(402.79395832665457427).epsilon(1e-12));
    CHECK(rho_moment_exact(10, 0.3, 1.0).value
          == doctest::Approx(rho_mean_exact(10, 0.3).value).epsilon(1e-13));
    CHECK_THROWS_AS(rho_moment_exact(10, 0.3, 2.5), std::domain_error);
}

TEST_CASE("rho mean: divergence at alpha >= 1")
{
    for (double a : {1.0, 1.5, 3.0})
    {
        const SeriesResult s = rho_mean_exact(7, a);
        CHECK(s.status == SeriesStatus::Divergent);
        CHECK(std::isinf(s.value));
    }
}

TEST_CASE("rho mean: expansion within 10 x^-2a at large x")
{
    const double x = 1e6;
    const double exact = rho_mean_exact(1'000'000, 0.3).value;
    const double expansion = x + 2 * std::pow(x, 0.3) - 1.5 - std::pow(x, -0.3) / 6;
    CHECK(rho_mean_asymptotic(x, 0.3) == doctest::Approx(expansion).epsilon(1e-15));
    // The difference is about +0.5: the criterion is reported red by the
    // acceptance run. Here only the size of the gap is pinned.
    CHECK(std::fabs(exact - expansion - 0.5) <= 0.05);
}

TEST_CASE("rho mean: Monte Carlo from the axis")
{
    const ModelSpec m = make_model(ModelKind::QuarterPlane, 0.3);
    const std::int64_t x = 10;
    std::vector<double> z;
    for (int r = 0; r < 200000; ++r)
    {
        RngStream rng(91, static_cast<std::uint64_t>(r));
        LatticeState s{x, 0};
        while (s.y == 0)
            s = step(m, s, rng);
        z.push_back(static_cast<double>(z_bar(s)));
    }
    const double mean = sample_mean(z);
    const double se = std::sqrt(sample_variance(z) / static_cast<double>(z.size()));
    CHECK(std::fabs(mean - rho_mean_exact(x, 0.3).value) <= 4 * se);
}

TEST_CASE("mean recurrence")
{
    const auto u0 = mean_recurrence(0.0, 0.0, 100, 1.0);
    REQUIRE(u0.size() == 100);
    for (std::size_t j = 0; j < u0.size(); ++j)
        CHECK(u0[j] == 1.0 + 2.0 * static_cast<double>(j));

    const std::int64_t big = 1'000'000;
    const auto u = mean_recurrence(0.2, 0.0, big, 1.0);
    const double c1 = std::pow(1.6, 1.25);
    CHECK(std::fabs(u.back() / std::pow(1e6, 1.25) / c1 - 1.0) <= 0.01);

    const auto uc = mean_recurrence(0.2, 1.0, big, 1.0);
    const double v = closed_form_v(0.2, 1.0, 1e6);
    CHECK(std::fabs(uc.back() - v) / v <= 0.02);

    CHECK_THROWS_AS(mean_recurrence(0.2, 0.0, 10, -1.0), std::domain_error);
}

TEST_CASE("arcsine law")
{
    CHECK(arcsine_cdf(0.0) == 0.0);
    CHECK(arcsine_cdf(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(arcsine_cdf(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    // (1/pi) int_0^eps u^-1/2 (1-u)^-1/2 du with u = s^2
    const double eps = 0.1;
    const double q = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [](double s) { return 2.0 / (std::numbers::pi * std::sqrt(1.0 - s * s)); }, 0.0,
        std::sqrt(eps));
    CHECK(std::fabs(arcsine_cdf(eps) - q) <= 1e-10);
    CHECK_THROWS_AS(arcsine_cdf(1.5), std::domain_error);
}

TEST_CASE("lazy first passage: enumerated values")
{
    const auto d = lazy_first_passage(1, 10);
    CHECK(d.offset == 1);
    CHECK(d.probabilities[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(d.probabilities[1] == doctest::Approx(0.125).epsilon(1e-15));
    // hold-hold-down and up-down-down
    CHECK(d.probabilities[2] == doctest::Approx(0.5 * 0.5 * 0.25 + 0.25 * 0.25 * 0.25));
}

TEST_CASE("lazy first passage: closed form equals the dynamic program")
{
    for (std::int64_t h : {1, 2, 3, 7, 20})
    {
        const std::int64_t n = 4000;
        const auto cf = lazy_first_passage(h, n);
        const auto dp = lazy_first_passage_dp(h, n);
        double worst = 0.0;
        for (std::size_t k = 0; k < cf.probabilities.size(); ++k)
            worst = std::max(worst, std::fabs(cf.probabilities[k] - dp.probabilities[k]));
        CHECK(worst <= 1e-15);
        CHECK(cf.tail_mass == doctest::Approx(dp.tail_mass).epsilon(1e-11));
    }
}

TEST_CASE("lazy first passage: survival behaves like k^-1/2")
{
    std::vector<std::pair<double, double>> pts;
    for (double k = 1e3; k <= 1e5 + 1; k *= std::pow(10.0, 0.25))
        pts.emplace_back(k, lazy_survival(1, static_cast<std::int64_t>(k)));
    const ExponentFit f = tail_exponent_fit(pts);
    CHECK(f.slope == doctest::Approx(-0.5).epsilon(0.01));
    // sqrt(k) P(T > k) -> 2 / sqrt(pi)
    CHECK(std::sqrt(1e5) * lazy_survival(1, 100000)
          == doctest::Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-3));
}

TEST_CASE("discrete sampler")
{
    DiscreteDistribution d;
    d.offset = 3;
    d.probabilities = {0.5, 0.25, 0.25};
    const DiscreteSampler s(d);
    CHECK(s.sample_from(1.0) == 3);
    CHECK(s.sample_from(0.51) == 3);
    CHECK(s.sample_from(0.5) == 4);
    CHECK(s.sample_from(0.26) == 4);
    CHECK(s.sample_from(0.25) == 5);
    CHECK(s.sample_from(1e-9) == 5);

    // beyond the table, the tail function is inverted exactly
    const auto lazy = lazy_first_passage(1, 100);
    const DiscreteSampler ls(lazy);
    for (double w : {1e-2, 1e-3, 1e-4})
    {
        const std::int64_t k = ls.sample_from(w);
        CHECK(k > 100);
        CHECK(lazy_survival(1, k) < w);
        CHECK(lazy_survival(1, k - 1) >= w);
    }
}

TEST_CASE("stable oracle")
{
    DiscreteDistribution point;
    point.offset = 1;
    point.probabilities = {1.0};
    const auto o = stable_oracle_build(point, 1000, 50, 1);
    for (double v : o.samples)
        CHECK(v == doctest::Approx(1e-3));
    CHECK(stable_oracle_cdf(o, 0.999e-3) == 0.0);
    CHECK(stable_oracle_cdf(o, 1.001e-3) == 1.0);

    DiscreteDistribution leaky;
    leaky.offset = 1;
    leaky.probabilities = {0.99};
    leaky.tail_mass = 0.01;
    CHECK_THROWS_AS(stable_oracle_build(leaky, 10, 10, 1), std::invalid_argument);

    const auto lazy = lazy_first_passage(1, 100000);
    const auto big = stable_oracle_build(lazy, 1000, 4000, 17);
    CHECK(stable_oracle_cdf(big, quantile(EmpiricalDistribution(big.samples), 0.5))
          == doctest::Approx(0.5).epsilon(0.01));
    // thread count does not change the samples
    const auto threaded = stable_oracle_build(lazy, 1000, 4000, 17, 3);
    CHECK(threaded.samples == big.samples);
}

TEST_CASE("stable oracle: one-half power tail")
{
    const auto lazy = lazy_first_passage(1, 100000);
    const auto o = stable_oracle_build(lazy, 1000, 20000, 23);
    const EmpiricalDistribution d(o.samples);
    std::vector<std::pair<double, double>> pts;
    for (double t = 10.0; t <= 1000.0 * 1.0001; t *= std::pow(10.0, 0.2))
        pts.emplace_back(t, 1.0 - ecdf_at(d, t));
    const ExponentFit f = tail_exponent_fit(pts);
    CHECK(f.slope >= -0.55);
    CHECK(f.slope <= -0.45);
}

TEST_CASE("theorem helpers")
{
    const double alpha = 0.25;
    const Constants k = constants(alpha);
    const double a_one = k.c1 * std::pow(k.c2, -2.0 / (1.0 - alpha));
    const TheoremValue one = theorem_left_tail(alpha, a_one);
    CHECK(one.value == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(one.out_of_range);
    const TheoremValue v = theorem_left_tail(alpha, 0.005);
    CHECK(v.value
          == doctest::Approx(4.51352 * std::pow(0.005 / std::pow(1.5, 4.0 / 3.0), 0.375)).epsilon(1e-5));
    CHECK_FALSE(v.out_of_range);
    CHECK(theorem_left_tail(alpha, 1e-30).value < 1e-10);
    CHECK(theorem_scaling(0.25, 8.0, 1e6) == doctest::Approx(8.0 / std::pow(1e6, 2.0 / 3.0)));
}

TEST_SUITE("properties")
{
    TEST_CASE("property: rho survival monotone in k and x")
    {
        for (double a : {0.1, 0.3, 0.45, 0.9})
            for (std::int64_t x : {1, 2, 10, 1000, 100000})
            {
                double prev = 1.0;
                for (std::int64_t k = 0; k < 2000; k += 7)
                {
                    const double s = rho_survival(x, a, k);
                    REQUIRE(s <= prev);
                    REQUIRE(s < rho_survival(x + 1, a, k));
                    prev = s;
                }
            }
    }

    TEST_CASE("property: lazy first-passage mass")
    {
        for (std::int64_t h : {1, 2, 5, 50})
        {
            const auto d = lazy_first_passage(h, 20000);
            double sum = 0.0;
            for (std::size_t k = 0; k < d.probabilities.size(); ++k)
            {
                REQUIRE(d.probabilities[k] >= 0.0);
                if (static_cast<std::int64_t>(k) + 1 < h)
                    REQUIRE(d.probabilities[k] == 0.0);
                sum += d.probabilities[k];
            }
            REQUIRE(std::fabs(sum + d.tail_mass - 1.0) <= 1e-12);
        }
    }

    TEST_CASE("property: mean recurrence Cauchy criterion")
    {
        for (double a : {0.1, 0.2, 0.3, 0.4})
        {
            const auto u = mean_recurrence(a, 0.0, 1 << 20, 1.0);
            const double e = 1.0 / (1.0 - a);
            const auto norm = [&](std::size_t i) {
                return u[i - 1] / std::pow(static_cast<double>(i), e);
            };
            REQUIRE(std::fabs(norm(1 << 20) - norm(1 << 19)) <= 0.01 * constants(a).c1);
            REQUIRE(std::fabs(norm(1 << 20) / constants(a).c1 - 1.0) <= 0.01);
        }
    }
}
