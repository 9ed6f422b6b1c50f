#pragma once

#include <cstdint>

#include "drc/masks.hpp"

// Internal helpers shared by the masked forward and backward passes.
namespace drc::detail {

// Shared accumulation contract: dropped terms contribute +0.0 so masked and
// unmasked passes agree bitwise whenever every kept term matches.
double masked_dot(const Vec& w, const Vec& x, const std::uint8_t* wm, const std::uint8_t* um);

// nullptr when the bundle's type carries no mask of that kind
const std::uint8_t* unit_mask_ptr(const MaskBundle& b, int level);
const std::uint8_t* weight_mask_ptr(const MaskBundle& b, int layer, int j);

}  // namespace drc::detail
