#include "axiswalk/model.hpp"

#include <cmath>
#include <string>

namespace axiswalk {

namespace {

constexpr std::array<std::pair<ModelKind, std::string_view>, 5> kind_names{{
    {ModelKind::QuarterPlane, "quarter-plane"},
    {ModelKind::CoupledHalfPlane, "coupled-half-plane"},
    {ModelKind::FullPlane, "full-plane"},
    {ModelKind::BackstepQuarter, "backstep-quarter"},
    {ModelKind::ReflectedSRWQuarter, "reflected-srw"},
}};

[[noreturn]] void outside(LatticeState s, ModelKind kind)
{
    throw std::domain_error("state (" + std::to_string(s.x) + ", " + std::to_string(s.y)
                            + ") is outside the state space of " + std::string(to_string(kind)));
}

// Probability of leaving the axis from distance i.
inline double leave_prob(std::int64_t i, double alpha)
{
    return 0.5 * std::pow(static_cast<double>(i), -alpha);
}

constexpr int px = 0, mx = 1, py = 2, my = 3;

} // namespace

std::string_view to_string(ModelKind kind)
{
    for (auto const& [k, name] : kind_names)
        if (k == kind)
            return name;
    return "unknown";
}

ModelKind parse_model_kind(std::string_view name)
{
    for (auto const& [k, n] : kind_names)
        if (n == name)
            return k;
    throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

void validate(const ModelSpec& model)
{
    if (!(model.alpha > alpha_min_exclusive && model.alpha <= alpha_max))
        throw std::domain_error("alpha must lie in (0, 4], got " + std::to_string(model.alpha));
}

ModelSpec make_model(ModelKind kind, double alpha)
{
    ModelSpec m{kind, alpha};
    validate(m);
    return m;
}

bool in_state_space(ModelKind kind, LatticeState s) noexcept
{
    if (kind == ModelKind::FullPlane)
        return true;
    return s.x >= 0 && s.y >= 0;
}

bool on_axis(ModelKind kind, LatticeState s) noexcept
{
    if (kind == ModelKind::CoupledHalfPlane)
        return s.y == 0;
    return s.x == 0 || s.y == 0;
}

std::int64_t interior_clearance(ModelKind kind, LatticeState s) noexcept
{
    if (kind == ModelKind::FullPlane)
    {
        if (s.x == 0 || s.y == 0)
            return 0;
        return z_min(s);
    }
    if (kind == ModelKind::CoupledHalfPlane)
        return s.x >= 0 && s.y > 0 ? s.y : 0;
    if (s.x <= 0 || s.y <= 0)
        return 0;
    return s.x < s.y ? s.x : s.y;
}

Kernel kernel_at(const ModelSpec& model, LatticeState s)
{
    Kernel k;
    auto& p = k.p;
    const ModelKind kind = model.kind;
    if (!in_state_space(kind, s))
        outside(s, kind);

    const bool free_interior = kind == ModelKind::FullPlane ? (s.x != 0 && s.y != 0)
                                                           : (s.x > 0 && s.y > 0);
    if (free_interior)
    {
        p = {0.25, 0.25, 0.25, 0.25};
        return k;
    }

    if (s.x == 0 && s.y == 0)
    {
        if (kind == ModelKind::FullPlane)
            p = {0.25, 0.25, 0.25, 0.25};
        else
            p[px] = p[py] = 0.5;
        return k;
    }

    // Exactly one coordinate is zero from here on.
    const bool horizontal = s.y == 0;
    const std::int64_t i = horizontal ? std::llabs(s.x) : std::llabs(s.y);
    // Index of the outward move along the axis, the inward move, and the two
    // moves that leave it.
    int out, in, off_pos, off_neg;
    if (horizontal)
    {
        out = s.x > 0 ? px : mx;
        in = s.x > 0 ? mx : px;
        off_pos = py;
        off_neg = my;
    }
    else
    {
        out = s.y > 0 ? py : my;
        in = s.y > 0 ? my : py;
        off_pos = px;
        off_neg = mx;
    }

    switch (kind)
    {
    case ModelKind::QuarterPlane: {
        const double q = leave_prob(i, model.alpha);
        p[out] = 1.0 - q;
        p[off_pos] = q;
        break;
    }
    case ModelKind::CoupledHalfPlane: {
        if (horizontal)
        {
            const double q = leave_prob(i, model.alpha);
            p[out] = 1.0 - q;
            p[off_pos] = q;
        }
        else
        {
            p[off_pos] = 0.5;
            p[out] = 0.25;
            p[in] = 0.25;
        }
        break;
    }
    case ModelKind::FullPlane: {
        const double q = leave_prob(i, model.alpha);
        p[out] = 1.0 - q;
        p[off_pos] = 0.5 * q;
        p[off_neg] = 0.5 * q;
        break;
    }
    case ModelKind::BackstepQuarter: {
        const double r = std::pow(static_cast<double>(i), -model.alpha);
        const double back = r / 3.0;
        const double leave = 0.5 * r;
        p[in] = back;
        p[off_pos] = leave;
        p[out] = 1.0 - leave - back;
        break;
    }
    case ModelKind::ReflectedSRWQuarter: {
        p[out] = 0.25;
        p[in] = 0.25;
        p[off_pos] = 0.5;
        break;
    }
    }
    return k;
}

std::vector<Transition> transition_distribution(const ModelSpec& model, LatticeState s)
{
    validate(model);
    const Kernel k = kernel_at(model, s);
    std::vector<Transition> out;
    out.reserve(4);
    for (std::size_t d = 0; d < 4; ++d)
    {
        if (k.p[d] > 0.0)
            out.push_back({LatticeState{s.x + direction_offsets[d].x,
                                        s.y + direction_offsets[d].y},
                           k.p[d]});
    }
    return out;
}

LatticeState step_with_uniform(const ModelSpec& model, LatticeState s, double u)
{
    const Kernel k = kernel_at(model, s);
    double cum = 0.0;
    std::size_t last = 0;
    for (std::size_t d = 0; d < 4; ++d)
    {
        if (k.p[d] <= 0.0)
            continue;
        last = d;
        cum += k.p[d];
        if (u < cum)
            return {s.x + direction_offsets[d].x, s.y + direction_offsets[d].y};
    }
    // u landed in the rounding gap at the top of the CDF.
    return {s.x + direction_offsets[last].x, s.y + direction_offsets[last].y};
}

LatticeState step(const ModelSpec& model, LatticeState s, RngStream& rng)
{
    return step_with_uniform(model, s, rng.uniform());
}

} // namespace axiswalk
