#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "axiswalk/model.hpp"
#include "axiswalk/simulate.hpp"

namespace axiswalk {

struct TrajectoryRow
{
    std::int64_t t = 0;
    LatticeState state;
};

/*!
 * States at t = 0, every positive multiple of stride up to n, and at n.
 * stride = 1 gives all n + 1 states; stride > n gives the two endpoints.
 */
std::vector<TrajectoryRow> trajectory_dump(const ModelSpec& model, LatticeState start,
                                           std::int64_t n, std::int64_t stride, RngStream& rng,
                                           Engine engine = Engine::Leap);

//! "t,x,y" header and one line per row.
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows);

} // namespace axiswalk
