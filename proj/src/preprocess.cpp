#include "ctseg/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "ctseg/errors.hpp"
#include "ctseg/labeling.hpp"

namespace ctseg {

int otsu_bilevel(const Histogram& hist) {
    int distinct = 0;
    for (uint64_t c : hist.counts)
        if (c > 0) ++distinct;
    if (distinct < 2)
        throw DegenerateHistogramError(
            "otsu_bilevel needs at least two distinct occupied bins, found " +
            std::to_string(distinct));

    // Between-class variance w0*w1*(mu0-mu1)^2, scanned once with running
    // moments. A split with an empty side scores 0 and can never win.
    double total_mean = 0.0;
    for (int i = 0; i < kIntensityLevels; ++i) total_mean += i * hist.probabilities[i];

    int best_t = 0;
    double best_var = -1.0;
    double w0 = 0.0;
    double m0 = 0.0; // first moment of the dark side
    for (int t = 0; t < kIntensityLevels - 1; ++t) {
        w0 += hist.probabilities[t];
        m0 += t * hist.probabilities[t];
        double w1 = 1.0 - w0;
        if (w0 <= 0.0 || w1 <= 0.0) continue;
        double mu0 = m0 / w0;
        double mu1 = (total_mean - m0) / w1;
        double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) { // strict: ties keep the smallest t
            best_var = var;
            best_t = t;
        }
    }
    return best_t;
}

StripResult strip_artifacts(const GrayImage& img, const StripConfig& cfg) {
    if (cfg.min_lung_area_frac < 0.0 || cfg.min_lung_area_frac > 1.0)
        throw ConfigError("strip.min_lung_area_frac must be in [0, 1]");

    // Zero is the sentinel for pixels a previous strip already removed.
    // Keeping it out of both the threshold vote and the candidate mask is
    // what makes the operation idempotent: on a stripped image the (lung,
    // background) split re-derives the same region instead of collapsing
    // onto the background spike.
    std::array<uint64_t, kIntensityLevels> counts{};
    for (uint8_t p : img.pixels)
        if (p != 0) ++counts[p];

    int distinct = 0;
    for (int i = 1; i < kIntensityLevels; ++i)
        if (counts[i] > 0) ++distinct;
    if (distinct < 2)
        throw EmptyRegionError("strip_artifacts: no separable lung candidates (" +
                               std::to_string(distinct) + " occupied nonzero bins)");

    int t = otsu_bilevel(Histogram::from_counts(counts));

    BinaryMask candidates = BinaryMask::create(img.width, img.height);
    for (size_t i = 0; i < img.pixels.size(); ++i)
        candidates.bits[i] = (img.pixels[i] > 0 && img.pixels[i] <= t) ? 1 : 0;

    ComponentSet cs = label_components(candidates, 8);
    uint64_t min_area = uint64_t(std::llround(cfg.min_lung_area_frac * double(img.size())));
    if (min_area < 1) min_area = 1;

    std::vector<uint8_t> keep(size_t(cs.count), 0);
    bool any = false;
    for (int c = 0; c < cs.count; ++c) {
        if (!cs.touches_border[size_t(c)] && cs.areas[size_t(c)] >= min_area) {
            keep[size_t(c)] = 1;
            any = true;
        }
    }
    if (!any) throw EmptyRegionError("strip_artifacts: no lung candidate component survived");

    BinaryMask roi = BinaryMask::create(img.width, img.height);
    for (size_t i = 0; i < roi.bits.size(); ++i) {
        int32_t id = cs.labels[i];
        roi.bits[i] = (id >= 0 && keep[size_t(id)]) ? 1 : 0;
    }
    roi = fill_holes(roi, cfg.hole_fill_area);

    StripResult res;
    res.lung = GrayImage::create(img.width, img.height);
    for (size_t i = 0; i < img.pixels.size(); ++i)
        res.lung.pixels[i] = roi.bits[i] ? img.pixels[i] : 0;
    res.lung_roi = std::move(roi);
    return res;
}

} // namespace ctseg
