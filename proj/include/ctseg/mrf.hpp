#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctseg/entropy.hpp"
#include "ctseg/image.hpp"

namespace ctseg {

inline constexpr int kNumClasses = 3;

// Per-pixel class assignment, values in [0, kNumClasses).
struct LabelField {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> labels;

    static LabelField create(int width, int height, uint8_t fill = 0);
    size_t index(int x, int y) const { return size_t(y) * size_t(width) + size_t(x); }
    uint8_t at(int x, int y) const { return labels[index(x, y)]; }
    uint8_t& at(int x, int y) { return labels[index(x, y)]; }

    bool operator==(const LabelField&) const = default;
};

// Gaussian observation model per class. weight is the mixing proportion;
// it is reported for diagnostics but plays no part in the energy.
struct ClassParams {
    std::array<double, kNumClasses> mean{};
    std::array<double, kNumClasses> variance{};
    std::array<double, kNumClasses> weight{};
};

struct MrfConfig {
    double beta = 1.0;           // Potts pairwise weight; 0 = independent pixels
    int em_iterations = 10;      // outer parameter/labeling alternations
    int icm_sweeps_per_em = 5;   // raster sweeps per outer iteration
    double rel_tolerance = 1e-4; // stop when |dU|/|U| falls below this
    double variance_floor = 1.0; // keeps single-intensity classes proper

    void validate() const; // throws ConfigError
};

// Band assignment from a 2-cut threshold set: I <= t1 -> class 0,
// t1 < I <= t2 -> class 1, I > t2 -> class 2. Pixels outside the roi get
// class 0 (background band) and are never updated downstream.
LabelField initialize_labels(const GrayImage& img, const ThresholdSet& t, const BinaryMask& roi);

// Midpoints of the threshold bands, used as stand-in parameters for a
// class that has no pixels on the first estimate.
ClassParams band_midpoint_params(const ThresholdSet& t, double variance_floor);

// Maximum-likelihood Gaussian parameters per class over roi pixels
// (population variance, floored). A class with no pixels keeps the values
// from `fallback` (the previous estimate, or band midpoints on the first
// call) and its weight is set to 1e-6 before weights renormalize. Throws
// EmptyRegionError when the roi is empty.
ClassParams estimate_class_params(const GrayImage& img, const LabelField& lf,
                                  const BinaryMask& roi, const ClassParams& fallback,
                                  double variance_floor = 1.0);

// U = sum over roi pixels of (I-mu)^2/(2 sigma^2) + ln(2 pi sigma^2)/2,
// plus beta times the number of unordered 4-neighbor pairs inside the roi
// with differing labels.
double total_energy(const GrayImage& img, const LabelField& lf, const ClassParams& params,
                    double beta, const BinaryMask& roi);

// One raster-order ICM pass. Each roi pixel takes the label minimizing its
// local energy given the current field, seeing in-sweep updates of earlier
// pixels; ties go to the lower class index. Never increases total_energy.
LabelField icm_sweep(const GrayImage& img, const LabelField& lf, const ClassParams& params,
                     double beta, const BinaryMask& roi);

struct SegmentResult {
    LabelField labels;
    ClassParams params;               // parameters the final sweeps ran under
    std::vector<double> energy_trace; // energy after each outer iteration, non-increasing
};

// EM alternation: estimate parameters from the current labels, run ICM
// sweeps, and stop once the relative energy change over an outer iteration
// drops below rel_tolerance (or after em_iterations). `fallback` seeds the
// empty-class parameters on the first estimate; band midpoints over equal
// thirds of the intensity range are used when it is absent.
SegmentResult segment(const GrayImage& img, const LabelField& init, const MrfConfig& cfg,
                      const BinaryMask& roi,
                      const std::optional<ClassParams>& fallback = std::nullopt);

// "iteration,energy" rows, one per outer iteration.
std::string energy_trace_csv(const std::vector<double>& trace);

} // namespace ctseg
