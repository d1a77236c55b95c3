#pragma once

#include <cstdint>

#include "ctseg/image.hpp"

namespace ctseg {

struct StripConfig {
    // Dark components smaller than this fraction of the image area are
    // treated as noise rather than lung candidates.
    double min_lung_area_frac = 0.005;
    // Enclosed pockets strictly smaller than this are folded back into the
    // lung region, which is what keeps lesions (brighter than parenchyma,
    // so excluded by the dark-side threshold) inside the roi.
    uint64_t hole_fill_area = 64;
};

// Otsu's bi-level threshold: the t in [0, 254] maximizing between-class
// variance of the split [0, t] / [t+1, 255]; ties resolve to the smallest
// t. Throws DegenerateHistogramError when fewer than two distinct bins are
// occupied.
int otsu_bilevel(const Histogram& hist);

struct StripResult {
    GrayImage lung;      // input with everything outside lung_roi set to 0
    BinaryMask lung_roi; // retained region
};

// Remove bed, cables, body wall and ambient air, keeping the lung fields:
//  1. Otsu threshold over the nonzero-intensity histogram (zero marks
//     already-removed pixels, so it never votes);
//  2. dark-candidate mask = pixels with 0 < I <= t;
//  3. 8-connected components of the candidates;
//  4. drop components touching the image border (ambient air) and those
//     below the minimum area;
//  5. union of survivors, with small enclosed holes filled back in.
// Output intensities are either 0 or the input value. Applying the
// function to its own output is a no-op. Throws EmptyRegionError when no
// lung candidate survives (all-zero/constant images included).
StripResult strip_artifacts(const GrayImage& img, const StripConfig& cfg = {});

} // namespace ctseg
