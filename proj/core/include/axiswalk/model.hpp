#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "axiswalk/rng.hpp"

namespace axiswalk {

enum class ModelKind
{
    QuarterPlane,
    CoupledHalfPlane,
    FullPlane,
    BackstepQuarter,
    ReflectedSRWQuarter,
};

std::string_view to_string(ModelKind kind);
//! Accepts the names produced by to_string; throws std::invalid_argument.
ModelKind parse_model_kind(std::string_view name);

struct ModelSpec
{
    ModelKind kind = ModelKind::QuarterPlane;
    double alpha = 0.25;
};

constexpr double alpha_min_exclusive = 0.0;
constexpr double alpha_max = 4.0;

//! Throws std::domain_error when alpha is outside (0, 4].
void validate(const ModelSpec& model);
ModelSpec make_model(ModelKind kind, double alpha);

struct LatticeState
{
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend constexpr bool operator==(LatticeState, LatticeState) = default;
};

inline std::int64_t z_bar(LatticeState s) noexcept
{
    const std::int64_t ax = s.x < 0 ? -s.x : s.x;
    const std::int64_t ay = s.y < 0 ? -s.y : s.y;
    return ax > ay ? ax : ay;
}

inline std::int64_t z_min(LatticeState s) noexcept
{
    const std::int64_t ax = s.x < 0 ? -s.x : s.x;
    const std::int64_t ay = s.y < 0 ? -s.y : s.y;
    return ax < ay ? ax : ay;
}

//! Unit moves in canonical sampling order.
enum class Direction : std::uint8_t
{
    PlusX = 0,
    MinusX = 1,
    PlusY = 2,
    MinusY = 3,
};

constexpr std::array<LatticeState, 4> direction_offsets{
    LatticeState{1, 0}, LatticeState{-1, 0}, LatticeState{0, 1}, LatticeState{0, -1}};

//! One-step probabilities indexed by Direction.
struct Kernel
{
    std::array<double, 4> p{};
};

struct Transition
{
    LatticeState to;
    double probability;
};

//! Throws std::domain_error for states outside the model's state space.
Kernel kernel_at(const ModelSpec& model, LatticeState s);

//! Successors with positive probability, in canonical order.
std::vector<Transition> transition_distribution(const ModelSpec& model, LatticeState s);

//! Inverse-CDF move for a uniform u in [0, 1).
LatticeState step_with_uniform(const ModelSpec& model, LatticeState s, double u);

//! Consumes exactly one uniform draw.
LatticeState step(const ModelSpec& model, LatticeState s, RngStream& rng);

bool in_state_space(ModelKind kind, LatticeState s) noexcept;

/*!
 * Excursion predicate.
 *
 * X*Y == 0 for every kind except CoupledHalfPlane, where only the
 * horizontal axis (Y == 0) counts: its vertical axis is a reflecting
 * boundary that never accumulates gain.
 */
bool on_axis(ModelKind kind, LatticeState s) noexcept;

/*!
 * Distance d >= 1 such that d - 1 free simple-random-walk steps from s
 * cannot reach the excursion set or leave the state space. Zero when the
 * kernel at s is not the free kernel.
 *
 * CoupledHalfPlane is the exception: off the horizontal axis it moves as
 * (|X|, Y) of a free walk, so its clearance is y and a leap must be folded
 * with |x| afterwards.
 */
std::int64_t interior_clearance(ModelKind kind, LatticeState s) noexcept;

} // namespace axiswalk
