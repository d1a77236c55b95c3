#pragma once

#include <vector>

#include "ctseg/image.hpp"

namespace ctseg {

// Strictly increasing intensity cut points, each in [1, 254]. k cuts split
// [0, 255] into k+1 classes [0, t1], (t1, t2], ..., (tk, 255].
struct ThresholdSet {
    std::vector<int> cuts;

    static ThresholdSet validated(std::vector<int> cuts);
    int k() const { return int(cuts.size()); }

    bool operator==(const ThresholdSet&) const = default;
};

// Sum over classes of the Shannon entropy of the class-normalized
// distribution. A class with zero mass contributes 0 rather than -inf, so
// the score is defined for every valid cut vector. Nonnegative; 0 exactly
// when every occupied class has all its mass in one bin.
double shannon_objective(const Histogram& hist, const ThresholdSet& t);

struct ExhaustiveResult {
    ThresholdSet cuts;
    double score = 0.0;
};

// Global maximum of shannon_objective over all valid cut vectors, by full
// enumeration. Ties resolve to the lexicographically smallest cut vector.
// Only k <= 3 is enumerable in reasonable time; larger k throws
// OracleScopeError.
ExhaustiveResult exhaustive_optimal(const Histogram& hist, int k);

// Quantized view of the image: every roi pixel is replaced by the rounded
// mean intensity of its class, computed from the roi histogram; a class
// with no roi pixels is represented by its band's lower bound. Non-roi
// pixels become 0.
GrayImage apply_thresholds(const GrayImage& img, const ThresholdSet& t, const BinaryMask& roi);

} // namespace ctseg
