#pragma once

#include <cmath>
#include <vector>

#include "axiswalk/model.hpp"
#include "axiswalk/simulate.hpp"

namespace testing_support {

//! Every state of an n-step path from the single-step engine.
inline std::vector<axiswalk::LatticeState> full_path(const axiswalk::ModelSpec& m,
                                                     axiswalk::LatticeState start, std::int64_t n,
                                                     axiswalk::RngStream& rng)
{
    std::vector<axiswalk::LatticeState> path;
    path.reserve(static_cast<std::size_t>(n + 1));
    axiswalk::simulate_path(m, start, n, rng,
                            [&](std::int64_t, axiswalk::LatticeState s) { path.push_back(s); });
    return path;
}

//! Two-sample KS critical value at level 1%.
inline double ks_critical_1pct(std::size_t n, std::size_t m)
{
    return 1.63 * std::sqrt(static_cast<double>(n + m) / static_cast<double>(n * m));
}

} // namespace testing_support
