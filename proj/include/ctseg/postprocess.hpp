#pragma once

#include "ctseg/image.hpp"
#include "ctseg/mrf.hpp"

namespace ctseg {

// Lesions are the hyperintense tissue inside the lung, so the lesion class
// is the one with the highest mean intensity. Throws AmbiguousClassError
// when two classes tie for the highest mean exactly.
BinaryMask extract_lesion_mask(const LabelField& lf, const ClassParams& params,
                               const BinaryMask& roi);

// 3x3 square erosion / dilation; out-of-bounds neighbors count as background.
BinaryMask erode3x3(const BinaryMask& mask);
BinaryMask dilate3x3(const BinaryMask& mask);

// Binary opening followed by closing with the 3x3 square element.
BinaryMask morphological_smooth(const BinaryMask& mask);

// Drop 8-connected components with area < min_area (strict, so 0 is the
// identity).
BinaryMask remove_small_components(const BinaryMask& mask, long min_area);

} // namespace ctseg
