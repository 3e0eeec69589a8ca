#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "axiswalk/rng.hpp"

namespace axiswalk {

//! A series or recursion that failed to certify its result.
class NumericError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct Constants
{
    double alpha = 0.0;
    double c1 = 0.0;                 //!< (2(1 - alpha))^(1 / (1 - alpha)), NaN for alpha >= 1
    double c2 = 0.0;                 //!< 8 / sqrt(pi)
    double lln_exponent = 0.0;       //!< 1 / (1 - alpha)
    double scaling_exponent = 0.0;   //!< 1 / (2 (1 - alpha))
    double left_tail_exponent = 0.0; //!< (1 - alpha) / 2
    std::optional<double> g_alpha;   //!< c / (2 c1^alpha) when c is given
    bool in_theorem_range = false;   //!< alpha in (0, 1/2)
};

Constants constants(double alpha, std::optional<double> c_est = std::nullopt);

/*!
 * prod_{m=0}^{k} (1 - 1 / (2 (x + m)^alpha)).
 *
 * For a walk started at (x, 0) this is P(rho > k + 1), rho counting the
 * final off-axis step.
 */
double rho_survival(std::int64_t x, double alpha, std::int64_t k);

//! Upper bound on prod_{m=0}^{k} (1 - p_m) for alpha < 1; +inf otherwise.
double rho_survival_bound(std::int64_t x, double alpha, double k);

enum class SeriesStatus
{
    Converged,
    Divergent,
};

struct SeriesResult
{
    double value = 0.0;
    double remainder_bound = 0.0; //!< certified bound on the truncated tail
    std::int64_t terms = 0;
    SeriesStatus status = SeriesStatus::Converged;
};

constexpr std::int64_t series_iteration_cap = 100'000'000;

/*!
 * E Z(rho) for a walk started at (x, 0): x - 1 + E rho, with
 * E rho = 1 + sum_{k>=0} rho_survival(x, alpha, k).
 *
 * Summation stops once a certified tail bound falls below 1e-14 of the
 * partial sum. For alpha >= 1 the series diverges and a Divergent result
 * is returned. Throws NumericError if the cap is hit first.
 */
SeriesResult rho_mean_exact(std::int64_t x, double alpha);

//! E (x + rho - 1)^beta for beta <= 2, same certification as rho_mean_exact.
SeriesResult rho_moment_exact(std::int64_t x, double alpha, double beta);

//! x + 2 x^alpha - 3/2 - x^-alpha / 6 (large-x expansion of E Z(rho)).
double rho_mean_asymptotic(double x, double alpha);

//! u_1 = u1, u_i = u_{i-1} + 2 u_{i-1}^alpha + c. Element j holds u_{j+1}.
std::vector<double> mean_recurrence(double alpha, double c_est, std::int64_t i_max,
                                    double u1 = 1.0);

//! c1 (i + g i^((1 - 2 alpha) / (1 - alpha)))^(1 / (1 - alpha)), g = c / (2 c1^alpha).
double closed_form_v(double alpha, double c_est, double i);

//! (2 / pi) asin(sqrt(eps)).
double arcsine_cdf(double eps);

/*!
 * Law on offset, offset + 1, ... with explicit probabilities and a tail
 * mass. An optional survival function extends the law beyond the table.
 */
struct DiscreteDistribution
{
    std::int64_t offset = 0;
    std::vector<double> probabilities;
    double tail_mass = 0.0;
    //! P(T > k) for k past the table; enables exact tail sampling.
    std::function<double(std::int64_t)> tail_survival;

    std::int64_t last() const noexcept
    {
        return offset + static_cast<std::int64_t>(probabilities.size()) - 1;
    }
};

//! Precomputed inverse-CDF sampler for a DiscreteDistribution.
class DiscreteSampler
{
  public:
    explicit DiscreteSampler(const DiscreteDistribution& dist);

    //! Sample from w uniform in (0, 1]; returns min{k : P(T > k) < w}.
    std::int64_t sample_from(double w) const;
    std::int64_t operator()(RngStream& rng) const { return sample_from(rng.uniform_open_closed()); }

  private:
    std::int64_t offset_;
    std::vector<double> survival_; //!< survival_[j] = P(T > offset + j)
    double tail_mass_;
    std::function<double(std::int64_t)> tail_survival_;
};

/*!
 * First-passage time to 0 of the lazy walk (+-1 w.p. 1/4 each, hold 1/2)
 * from height h, on 1..n_max. Computed from the reflection identity
 * P(T = k) = (1/4) [P(h + L = 1) - P(h + L = -1)], L the lazy displacement
 * after k - 1 steps. The tail survival function is attached.
 */
DiscreteDistribution lazy_first_passage(std::int64_t h, std::int64_t n_max);

//! Same law by dynamic programming over heights; O(n_max (h + n_max)).
DiscreteDistribution lazy_first_passage_dp(std::int64_t h, std::int64_t n_max);

//! P(T > k) for the lazy first passage from h.
double lazy_survival(std::int64_t h, std::int64_t k);

//! Maximum tail mass accepted for a table without a tail survival function.
constexpr double oracle_max_tail_mass = 1e-3;

//! Samples of H_i / i^2, H_i a sum of i independent inter-arrival times.
struct StableLimitOracle
{
    std::int64_t i = 0;
    std::vector<double> samples; //!< sorted
};

/*!
 * Throws std::invalid_argument when the law has no tail survival function
 * and its tail mass exceeds oracle_max_tail_mass. Replica r uses
 * RngStream(seed, r), so the result does not depend on threads.
 */
StableLimitOracle stable_oracle_build(const DiscreteDistribution& inter_arrival, std::int64_t i,
                                      std::int64_t replicas, std::uint64_t seed,
                                      unsigned threads = 1);

double stable_oracle_cdf(const StableLimitOracle& oracle, double t);

struct TheoremValue
{
    double value = 0.0;
    bool out_of_range = false; //!< value >= 1, outside the useful range of the bound
};

//! c2 (a / c1)^((1 - alpha) / 2).
TheoremValue theorem_left_tail(double alpha, double a);

//! Z / n^(1 / (2 (1 - alpha))).
double theorem_scaling(double alpha, double z, double n);

} // namespace axiswalk
