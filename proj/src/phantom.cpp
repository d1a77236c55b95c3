#include "ctseg/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctseg/errors.hpp"
#include "ctseg/rng.hpp"

namespace ctseg {

namespace {

bool in_ellipse(double x, double y, const EllipseSpec& e) {
    double dx = (x - e.cx) / e.rx;
    double dy = (y - e.cy) / e.ry;
    return dx * dx + dy * dy < 1.0;
}

bool in_disc(double x, double y, double cx, double cy, double r) {
    double dx = x - cx;
    double dy = y - cy;
    return dx * dx + dy * dy < r * r;
}

void require_intensity(int v, const char* what) {
    if (v < 0 || v > 255)
        throw ConfigError(std::string(what) + " intensity " + std::to_string(v) +
                          " outside [0,255]");
}

void require_sigma(double s, const char* what) {
    if (!(s >= 0.0)) throw ConfigError(std::string(what) + " sigma must be >= 0");
}

} // namespace

void PhantomSpec::validate() const {
    if (width <= 0 || height <= 0) throw ConfigError("phantom dimensions must be positive");
    require_sigma(ambient_sigma, "ambient");
    require_intensity(ring.intensity, "ring");
    require_sigma(ring.sigma, "ring");
    if (!(ring.inner > 0.0) || !(ring.outer >= ring.inner))
        throw GeometryError("body ring needs 0 < inner <= outer");
    require_intensity(lung_intensity, "lung");
    require_sigma(lung_sigma, "lung");
    for (const EllipseSpec& e : lungs) {
        if (!(e.rx > 0.0) || !(e.ry > 0.0))
            throw GeometryError("lung ellipse radii must be positive");
        double dist = std::hypot(e.cx - ring.cx, e.cy - ring.cy);
        if (dist + std::max(e.rx, e.ry) > ring.inner)
            throw GeometryError("lung ellipse is not contained in the inner body disc");
    }
    for (const BlobSpec& b : lesions) {
        if (!(b.r > 0.0)) throw GeometryError("lesion radius must be positive");
        require_intensity(b.intensity, "lesion");
        require_sigma(b.sigma, "lesion");
    }
}

PhantomImage generate_phantom(const PhantomSpec& spec) {
    spec.validate();

    PhantomImage out;
    out.image = GrayImage::create(spec.width, spec.height);
    out.lung_truth = BinaryMask::create(spec.width, spec.height);
    out.lesion_truth = BinaryMask::create(spec.width, spec.height);

    Rng rng(spec.seed);
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            double noise = rng.normal(); // one draw per pixel keeps geometry
                                         // edits from shifting the noise field
            double px = double(x);
            double py = double(y);

            bool in_lung = false;
            for (const EllipseSpec& e : spec.lungs)
                if (in_ellipse(px, py, e)) { in_lung = true; break; }

            const BlobSpec* lesion = nullptr;
            for (const BlobSpec& b : spec.lesions)
                if (in_disc(px, py, b.cx, b.cy, b.r)) { lesion = &b; break; }

            double base;
            double sigma;
            if (lesion) {
                if (!in_lung)
                    throw GeometryError("lesion pixel (" + std::to_string(x) + "," +
                                        std::to_string(y) + ") falls outside the lung fields");
                base = lesion->intensity;
                sigma = lesion->sigma;
                out.lesion_truth.bits[out.lesion_truth.index(x, y)] = 1;
            } else if (in_lung) {
                base = spec.lung_intensity;
                sigma = spec.lung_sigma;
            } else if (in_disc(px, py, spec.ring.cx, spec.ring.cy, spec.ring.outer)) {
                base = spec.ring.intensity;
                sigma = spec.ring.sigma;
            } else {
                base = 0.0;
                sigma = spec.ambient_sigma;
            }
            if (in_lung) out.lung_truth.bits[out.lung_truth.index(x, y)] = 1;

            long long v = std::llround(base + sigma * noise);
            out.image.pixels[out.image.index(x, y)] = uint8_t(std::clamp(v, 0LL, 255LL));
        }
    }
    return out;
}

} // namespace ctseg
