#pragma once

#include <cstdint>
#include <vector>

#include "ctseg/image.hpp"

namespace ctseg {

// Connected components of the set pixels of a mask.
struct ComponentSet {
    std::vector<int32_t> labels;         // per pixel: component id, -1 for background
    int count = 0;                       // number of components
    std::vector<uint64_t> areas;         // per component id
    std::vector<uint8_t> touches_border; // per component id, 0/1
};

// connectivity must be 4 or 8.
ComponentSet label_components(const BinaryMask& mask, int connectivity);

// Fill enclosed background pockets strictly smaller than max_hole_area.
// A hole is a connected background region (4-connectivity, the dual of the
// 8-connected foreground) that does not reach the image border.
BinaryMask fill_holes(const BinaryMask& mask, uint64_t max_hole_area);

} // namespace ctseg
