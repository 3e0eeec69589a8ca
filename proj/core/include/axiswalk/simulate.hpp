#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <random>
#include <type_traits>

#include "axiswalk/model.hpp"
#include "axiswalk/rng.hpp"

namespace axiswalk {

enum class Engine
{
    Step, //!< one kernel draw per time step
    Leap, //!< exact multi-step jumps through the free interior
};

struct PathResult
{
    LatticeState terminal;
    std::int64_t steps = 0;
    bool aborted = false;
};

constexpr std::int64_t unbounded_horizon = std::numeric_limits<std::int64_t>::max() / 4;

namespace detail {

template<class Observer>
bool notify(Observer& obs, std::int64_t t, LatticeState s)
{
    if constexpr (std::is_same_v<std::invoke_result_t<Observer&, std::int64_t, LatticeState>,
                                 bool>)
        return obs(t, s);
    else
    {
        obs(t, s);
        return true;
    }
}

} // namespace detail

//! Steps above which a leap uses binomial draws instead of packed bits.
constexpr std::int64_t leap_bit_limit = 2048;

/*!
 * Position after `steps` free simple-random-walk steps from s.
 *
 * Exact in law. Small leaps take two random bits per step (axis, sign)
 * from packed 64-bit draws; large leaps draw the rotated coordinates
 * X + Y and X - Y, which are independent simple walks.
 */
inline LatticeState free_leap(LatticeState s, std::int64_t steps, RngStream& rng)
{
    if (steps <= leap_bit_limit)
    {
        while (steps > 0)
        {
            const int chunk = steps < 32 ? static_cast<int>(steps) : 32;
            const std::uint64_t mask = (1ULL << chunk) - 1;
            const std::uint64_t r = rng();
            const std::uint64_t axis = r & mask;
            const std::uint64_t sign = (r >> 32) & mask;
            const int nx = std::popcount(axis);
            const int ux = std::popcount(axis & sign);
            const int ny = chunk - nx;
            const int uy = std::popcount(~axis & sign & mask);
            s.x += 2 * ux - nx;
            s.y += 2 * uy - ny;
            steps -= chunk;
        }
        return s;
    }
    // U = X + Y and V = X - Y move by independent +-1 at every step.
    std::binomial_distribution<std::int64_t> up(steps, 0.5);
    const std::int64_t du = 2 * up(rng) - steps;
    const std::int64_t dv = 2 * up(rng) - steps;
    s.x += (du + dv) / 2;
    s.y += (du - dv) / 2;
    return s;
}

/*!
 * Runs n kernel steps from start. The observer sees (0, start) and then
 * (t, state) after every step; returning false stops the walk early.
 */
template<class Observer>
PathResult simulate_path(const ModelSpec& model, LatticeState start, std::int64_t n,
                         RngStream& rng, Observer&& obs)
{
    validate(model);
    if (n < 0)
        throw std::invalid_argument("horizon must be non-negative");
    if (!in_state_space(model.kind, start))
        throw std::domain_error("start state is outside the state space");
    LatticeState s = start;
    if (!detail::notify(obs, 0, s))
        return {s, 0, true};
    for (std::int64_t t = 1; t <= n; ++t)
    {
        s = step(model, s, rng);
        if (!detail::notify(obs, t, s))
            return {s, t, true};
    }
    return {s, n, false};
}

/*!
 * Same law as simulate_path, faster in the interior.
 *
 * Whenever the walk sits at clearance d >= 2 it jumps d - 1 steps at once
 * with free_leap; such a jump cannot reach the excursion set. The observer
 * is called after every jump or single step, so consecutive times may
 * differ by more than one. All skipped times are off the excursion set.
 * A positive stride forces the walk to report every multiple of stride.
 */
template<class Observer>
PathResult simulate_leaping(const ModelSpec& model, LatticeState start, std::int64_t n,
                            RngStream& rng, Observer&& obs, std::int64_t stride = 0)
{
    validate(model);
    if (n < 0)
        throw std::invalid_argument("horizon must be non-negative");
    if (stride < 0)
        throw std::invalid_argument("stride must be non-negative");
    if (!in_state_space(model.kind, start))
        throw std::domain_error("start state is outside the state space");
    LatticeState s = start;
    if (!detail::notify(obs, 0, s))
        return {s, 0, true};
    std::int64_t t = 0;
    while (t < n)
    {
        const std::int64_t d = interior_clearance(model.kind, s);
        std::int64_t jump = d - 1;
        if (jump > n - t)
            jump = n - t;
        if (stride > 0)
        {
            const std::int64_t to_mark = stride - (t % stride);
            if (jump > to_mark)
                jump = to_mark;
        }
        if (jump >= 2)
        {
            s = free_leap(s, jump, rng);
            if (model.kind == ModelKind::CoupledHalfPlane)
                s.x = s.x < 0 ? -s.x : s.x;
            t += jump;
        }
        else
        {
            s = step(model, s, rng);
            t += 1;
        }
        if (!detail::notify(obs, t, s))
            return {s, t, true};
    }
    return {s, t, false};
}

template<class Observer>
PathResult simulate(Engine engine, const ModelSpec& model, LatticeState start, std::int64_t n,
                    RngStream& rng, Observer&& obs, std::int64_t stride = 0)
{
    if (engine == Engine::Step)
        return simulate_path(model, start, n, rng, obs);
    return simulate_leaping(model, start, n, rng, obs, stride);
}

} // namespace axiswalk
