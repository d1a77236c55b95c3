#pragma once

#include <cstdint>
#include <vector>

#include "ctseg/image.hpp"

namespace ctseg {

// Body cross-section: a filled disc of tissue at `intensity`, radius
// `outer`, from which the lung fields are carved. `inner` is the validation
// bound: every lung ellipse must fit inside the inner disc so that a closed
// band of tissue always separates the lungs from the background.
struct RingSpec {
    double cx = 128.0;
    double cy = 128.0;
    double inner = 100.0;
    double outer = 120.0;
    int intensity = 230;
    double sigma = 5.0;
};

struct EllipseSpec {
    double cx = 0.0;
    double cy = 0.0;
    double rx = 0.0;
    double ry = 0.0;
};

// Disc-shaped lesion with its own intensity statistics.
struct BlobSpec {
    double cx = 0.0;
    double cy = 0.0;
    double r = 0.0;
    int intensity = 160;
    double sigma = 12.0;
};

// Synthetic chest-slice description. Defaults give mode separations of at
// least 3 sigma (air ~0, lung 40, lesion 160, tissue 230) so a failed
// segmentation points at the code, not at an unlucky image.
struct PhantomSpec {
    int width = 256;
    int height = 256;
    uint64_t seed = 7;
    double ambient_sigma = 1.0; // air noise outside the body
    RingSpec ring;
    std::vector<EllipseSpec> lungs = {{90.0, 128.0, 20.0, 35.0}, {166.0, 128.0, 20.0, 35.0}};
    int lung_intensity = 40;
    double lung_sigma = 8.0;
    std::vector<BlobSpec> lesions = {{90.0, 106.0, 4.2, 160, 12.0},
                                     {82.0, 128.0, 4.2, 160, 12.0},
                                     {96.0, 150.0, 4.2, 160, 12.0},
                                     {166.0, 106.0, 4.2, 160, 12.0},
                                     {174.0, 128.0, 4.2, 160, 12.0},
                                     {160.0, 150.0, 4.2, 160, 12.0}};

    void validate() const; // throws GeometryError / ConfigError
};

struct PhantomImage {
    GrayImage image;
    BinaryMask lung_truth;   // exact rasterized lung-field geometry
    BinaryMask lesion_truth; // exact rasterized lesion geometry
};

// Deterministic given spec.seed: one Gaussian draw per pixel in row-major
// order, scaled by the owning region's sigma, added to its base intensity
// and clamped to [0,255]. A pixel (integer lattice point) belongs to a
// shape when it lies strictly inside the analytic boundary; region priority
// is lesion > lung > body disc > ambient. Throws GeometryError when a
// rasterized lesion pixel falls outside every lung ellipse.
PhantomImage generate_phantom(const PhantomSpec& spec);

} // namespace ctseg
