#include "axiswalk/trajectory.hpp"

#include <ostream>
#include <stdexcept>

namespace axiswalk {

std::vector<TrajectoryRow> trajectory_dump(const ModelSpec& model, LatticeState start,
                                           std::int64_t n, std::int64_t stride, RngStream& rng,
                                           Engine engine)
{
    if (stride < 1)
        throw std::invalid_argument("stride must be >= 1");
    if (n < 0)
        throw std::invalid_argument("horizon must be >= 0");
    std::vector<TrajectoryRow> rows;
    rows.reserve(static_cast<std::size_t>(n / stride + 2));
    auto keep = [&](std::int64_t t, LatticeState s) {
        if (t % stride == 0 || t == n)
            rows.push_back({t, s});
    };
    simulate(engine, model, start, n, rng, keep, stride);
    return rows;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows)
{
    out << "t,x,y\n";
    for (const auto& r : rows)
        out << r.t << ',' << r.state.x << ',' << r.state.y << '\n';
}

} // namespace axiswalk
