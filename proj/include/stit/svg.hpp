#pragma once

#include <string>

#include "stit/tess.hpp"

namespace stit {

// Deterministic SVG of a 2D tessellation: one closed path per cell in word
// order, no fill, unit black stroke, longest window side scaled to 512 px,
// y axis flipped so the window's top edge is at the top of the image.
// Throws ConfigError for 1D tessellations.
std::string render_svg(const Tessellation& t);

}  // namespace stit
