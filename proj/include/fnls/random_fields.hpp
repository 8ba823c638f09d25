#pragma once

#include <cstdint>

#include "fnls/field.hpp"

namespace fnls {

// exp(-|x - x0|^2 / (2 width^2))
Field gaussian(GridPtr grid, double width, double amplitude = 1.0);

// Sum of a few Gaussian bumps with seeded centres, widths, amplitudes and
// phases. Bumps sit within 0.4 L of the origin, widths in [0.5, 1.5] * width.
Field random_smooth_field(GridPtr grid, std::uint64_t seed, double width, bool complex_phase = true);

}  // namespace fnls
