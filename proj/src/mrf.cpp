#include "ctseg/mrf.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "ctseg/errors.hpp"
#include "ctseg/kernels.hpp"

namespace ctseg {

namespace {

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

double data_term(double intensity, double mean, double variance) {
    double d = intensity - mean;
    return d * d / (2.0 * variance) + 0.5 * std::log(variance) + kHalfLog2Pi;
}

// Per-class lookup of the data term for every intensity, laid out as
// table[class * 256 + intensity] for the reduction kernel.
std::vector<double> data_table(const ClassParams& params) {
    std::vector<double> table(size_t(kNumClasses) * kIntensityLevels);
    for (int c = 0; c < kNumClasses; ++c)
        for (int i = 0; i < kIntensityLevels; ++i)
            table[size_t(c) * kIntensityLevels + size_t(i)] =
                data_term(double(i), params.mean[size_t(c)], params.variance[size_t(c)]);
    return table;
}

void require_two_cuts(const ThresholdSet& t, const char* what) {
    if (t.cuts.size() != 2)
        throw ConfigError(std::string(what) + " requires exactly 2 cuts, got " +
                          std::to_string(t.cuts.size()));
    ThresholdSet::validated(t.cuts); // bounds/ordering check
}

} // namespace

void MrfConfig::validate() const {
    if (beta < 0.0) throw ConfigError("mrf.beta must be >= 0");
    if (em_iterations < 1) throw ConfigError("mrf.em_iterations must be >= 1");
    if (icm_sweeps_per_em < 1) throw ConfigError("mrf.icm_sweeps must be >= 1");
    if (!(rel_tolerance > 0.0)) throw ConfigError("mrf.rel_tolerance must be > 0");
    if (!(variance_floor > 0.0)) throw ConfigError("mrf.variance_floor must be > 0");
}

LabelField LabelField::create(int width, int height, uint8_t fill) {
    if (width <= 0 || height <= 0)
        throw DimensionError("label field dimensions must be positive");
    LabelField lf;
    lf.width = width;
    lf.height = height;
    lf.labels.assign(size_t(width) * size_t(height), fill);
    return lf;
}

LabelField initialize_labels(const GrayImage& img, const ThresholdSet& t, const BinaryMask& roi) {
    require_two_cuts(t, "initialize_labels");
    require_same_shape(img.width, img.height, roi.width, roi.height, "image vs roi");
    LabelField lf = LabelField::create(img.width, img.height, 0);
    const int t1 = t.cuts[0];
    const int t2 = t.cuts[1];
    for (size_t i = 0; i < img.pixels.size(); ++i) {
        if (!roi.bits[i]) continue; // background stays class 0 and is never revisited
        int v = img.pixels[i];
        lf.labels[i] = v <= t1 ? 0 : (v <= t2 ? uint8_t(1) : uint8_t(2));
    }
    return lf;
}

ClassParams band_midpoint_params(const ThresholdSet& t, double variance_floor) {
    require_two_cuts(t, "band_midpoint_params");
    const int t1 = t.cuts[0];
    const int t2 = t.cuts[1];
    ClassParams p;
    p.mean = {0.5 * t1, 0.5 * (t1 + 1 + t2), 0.5 * (t2 + 1 + kIntensityLevels - 1)};
    p.variance.fill(variance_floor);
    p.weight.fill(1.0 / kNumClasses);
    return p;
}

ClassParams estimate_class_params(const GrayImage& img, const LabelField& lf,
                                  const BinaryMask& roi, const ClassParams& fallback,
                                  double variance_floor) {
    require_same_shape(img.width, img.height, lf.width, lf.height, "image vs labels");
    require_same_shape(img.width, img.height, roi.width, roi.height, "image vs roi");

    double count[kNumClasses] = {};
    double sum[kNumClasses] = {};
    double sumsq[kNumClasses] = {};
    size_t total = 0;
    for (size_t i = 0; i < img.pixels.size(); ++i) {
        if (!roi.bits[i]) continue;
        size_t c = lf.labels[i];
        double v = img.pixels[i];
        count[c] += 1.0;
        sum[c] += v;
        sumsq[c] += v * v;
        ++total;
    }
    if (total == 0) throw EmptyRegionError("cannot estimate class parameters: roi is empty");

    ClassParams out;
    double weight_sum = 0.0;
    for (size_t c = 0; c < kNumClasses; ++c) {
        if (count[c] > 0.0) {
            double mean = sum[c] / count[c];
            double var = sumsq[c] / count[c] - mean * mean; // population variance
            if (var < 0.0) var = 0.0;                       // fp cancellation guard
            out.mean[c] = mean;
            out.variance[c] = std::max(var, variance_floor);
            out.weight[c] = count[c] / double(total);
        } else {
            out.mean[c] = fallback.mean[c];
            out.variance[c] = fallback.variance[c];
            out.weight[c] = 1e-6;
        }
        weight_sum += out.weight[c];
    }
    for (double& w : out.weight) w /= weight_sum;
    return out;
}

double total_energy(const GrayImage& img, const LabelField& lf, const ClassParams& params,
                    double beta, const BinaryMask& roi) {
    require_same_shape(img.width, img.height, lf.width, lf.height, "image vs labels");
    require_same_shape(img.width, img.height, roi.width, roi.height, "image vs roi");
    const auto& ops = kernels::active_ops();
    std::vector<double> table = data_table(params);
    double data = ops.masked_table_sum(img.pixels.data(), lf.labels.data(), roi.bits.data(),
                                       img.pixels.size(), table.data());
    uint64_t mismatches = ops.potts_mismatch(lf.labels.data(), roi.bits.data(), img.width,
                                             img.height);
    return data + beta * double(mismatches);
}

LabelField icm_sweep(const GrayImage& img, const LabelField& lf, const ClassParams& params,
                     double beta, const BinaryMask& roi) {
    require_same_shape(img.width, img.height, lf.width, lf.height, "image vs labels");
    require_same_shape(img.width, img.height, roi.width, roi.height, "image vs roi");

    std::vector<double> table = data_table(params);
    LabelField out = lf;
    const int w = img.width;
    const int h = img.height;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            size_t i = out.index(x, y);
            if (!roi.bits[i]) continue;
            // Earlier pixels in this raster pass are already updated; later
            // ones still carry their previous labels.
            int nbr[4];
            int nn = 0;
            if (x > 0 && roi.bits[i - 1]) nbr[nn++] = out.labels[i - 1];
            if (x + 1 < w && roi.bits[i + 1]) nbr[nn++] = out.labels[i + 1];
            if (y > 0 && roi.bits[i - size_t(w)]) nbr[nn++] = out.labels[i - size_t(w)];
            if (y + 1 < h && roi.bits[i + size_t(w)]) nbr[nn++] = out.labels[i + size_t(w)];

            int best = 0;
            double best_e = 0.0;
            for (int c = 0; c < kNumClasses; ++c) {
                double e = table[size_t(c) * kIntensityLevels + img.pixels[i]];
                for (int k = 0; k < nn; ++k)
                    if (nbr[k] != c) e += beta;
                if (c == 0 || e < best_e) { // strict < keeps the lower index on ties
                    best = c;
                    best_e = e;
                }
            }
            out.labels[i] = uint8_t(best);
        }
    }
    return out;
}

SegmentResult segment(const GrayImage& img, const LabelField& init, const MrfConfig& cfg,
                      const BinaryMask& roi, const std::optional<ClassParams>& fallback) {
    cfg.validate();
    require_same_shape(img.width, img.height, init.width, init.height, "image vs labels");
    require_same_shape(img.width, img.height, roi.width, roi.height, "image vs roi");

    ClassParams seed = fallback ? *fallback
                                : band_midpoint_params(ThresholdSet{{85, 170}},
                                                       cfg.variance_floor);

    SegmentResult res;
    res.labels = init;
    res.params = estimate_class_params(img, res.labels, roi, seed, cfg.variance_floor);
    // Reference energy for the convergence test: after the parameter update,
    // before any label updates of the iteration being judged.
    double prev = total_energy(img, res.labels, res.params, cfg.beta, roi);

    for (int iter = 0; iter < cfg.em_iterations; ++iter) {
        for (int s = 0; s < cfg.icm_sweeps_per_em; ++s)
            res.labels = icm_sweep(img, res.labels, res.params, cfg.beta, roi);
        double energy = total_energy(img, res.labels, res.params, cfg.beta, roi);
        res.energy_trace.push_back(energy);
        if (std::abs(prev - energy) < cfg.rel_tolerance * std::abs(prev)) break;
        if (iter + 1 < cfg.em_iterations) {
            res.params = estimate_class_params(img, res.labels, roi, res.params,
                                               cfg.variance_floor);
            prev = total_energy(img, res.labels, res.params, cfg.beta, roi);
        }
    }
    return res;
}

std::string energy_trace_csv(const std::vector<double>& trace) {
    std::string out = "iteration,energy\n";
    char row[64];
    for (size_t i = 0; i < trace.size(); ++i) {
        std::snprintf(row, sizeof(row), "%zu,%.12g\n", i, trace[i]);
        out += row;
    }
    return out;
}

} // namespace ctseg
