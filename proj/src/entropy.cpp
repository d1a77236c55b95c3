#include "ctseg/entropy.hpp"

#include <algorithm>
#include <cmath>

#include "ctseg/errors.hpp"

namespace ctseg {

namespace {

constexpr int kMinCut = 1;
constexpr int kMaxCut = 254;

// Prefix sums of p and p*ln(p). Both the single-evaluation path and the
// exhaustive scan compute class entropies through the same expressions, so
// the two agree exactly and a search result can never appear to beat the
// enumerated optimum by a rounding artifact.
struct EntropyPrefix {
    // index i holds the sum over bins [0, i-1]
    double p[kIntensityLevels + 1];
    double plogp[kIntensityLevels + 1];

    explicit EntropyPrefix(const Histogram& hist) {
        p[0] = 0.0;
        plogp[0] = 0.0;
        for (int i = 0; i < kIntensityLevels; ++i) {
            double q = hist.probabilities[i];
            p[i + 1] = p[i] + q;
            plogp[i + 1] = plogp[i] + (q > 0.0 ? q * std::log(q) : 0.0);
        }
    }

    // Entropy of the class covering bins [lo, hi]:
    //   H = -sum (p/w) ln(p/w) = -S/w + ln(w),  S = sum p ln p, w = sum p
    double class_entropy(int lo, int hi) const {
        double w = p[hi + 1] - p[lo];
        if (w <= 0.0) return 0.0; // empty class contributes nothing
        double s = plogp[hi + 1] - plogp[lo];
        return -s / w + std::log(w);
    }

    double objective(const std::vector<int>& cuts) const {
        double score = 0.0;
        int lo = 0;
        for (size_t c = 0; c <= cuts.size(); ++c) {
            int hi = (c < cuts.size()) ? cuts[c] : kIntensityLevels - 1;
            score += class_entropy(lo, hi);
            lo = hi + 1;
        }
        return score;
    }
};

void require_nonempty(const Histogram& hist) {
    if (hist.total == 0) throw Error("histogram is empty");
}

} // namespace

ThresholdSet ThresholdSet::validated(std::vector<int> cuts) {
    if (cuts.empty()) throw Error("threshold set needs at least one cut");
    for (size_t i = 0; i < cuts.size(); ++i) {
        if (cuts[i] < kMinCut || cuts[i] > kMaxCut)
            throw Error("threshold cut " + std::to_string(cuts[i]) + " outside [1, 254]");
        if (i > 0 && cuts[i] <= cuts[i - 1])
            throw Error("threshold cuts must be strictly increasing");
    }
    ThresholdSet t;
    t.cuts = std::move(cuts);
    return t;
}

double shannon_objective(const Histogram& hist, const ThresholdSet& t) {
    require_nonempty(hist);
    if (t.k() < 1) throw Error("shannon_objective: no cuts");
    EntropyPrefix pre(hist);
    return pre.objective(t.cuts);
}

ExhaustiveResult exhaustive_optimal(const Histogram& hist, int k) {
    require_nonempty(hist);
    if (k < 1) throw Error("exhaustive_optimal: k must be >= 1");
    if (k > 3)
        throw OracleScopeError("exhaustive_optimal handles k <= 3; k=" + std::to_string(k) +
                               " is beyond the enumerable range");

    EntropyPrefix pre(hist);
    std::vector<int> best;
    double best_score = -1.0;

    // Ascending enumeration plus strict improvement keeps the first (and
    // therefore lexicographically smallest) maximizer.
    auto consider = [&](const std::vector<int>& cuts) {
        double s = pre.objective(cuts);
        if (s > best_score) {
            best_score = s;
            best = cuts;
        }
    };

    std::vector<int> cuts(static_cast<size_t>(k));
    if (k == 1) {
        for (int a = kMinCut; a <= kMaxCut; ++a) {
            cuts[0] = a;
            consider(cuts);
        }
    } else if (k == 2) {
        for (int a = kMinCut; a < kMaxCut; ++a) {
            cuts[0] = a;
            for (int b = a + 1; b <= kMaxCut; ++b) {
                cuts[1] = b;
                consider(cuts);
            }
        }
    } else {
        for (int a = kMinCut; a + 1 < kMaxCut; ++a) {
            cuts[0] = a;
            for (int b = a + 1; b < kMaxCut; ++b) {
                cuts[1] = b;
                for (int c = b + 1; c <= kMaxCut; ++c) {
                    cuts[2] = c;
                    consider(cuts);
                }
            }
        }
    }

    ExhaustiveResult res;
    res.cuts = ThresholdSet::validated(best);
    res.score = best_score;
    return res;
}

GrayImage apply_thresholds(const GrayImage& img, const ThresholdSet& t, const BinaryMask& roi) {
    require_same_shape(img.width, img.height, roi.width, roi.height, "apply_thresholds");
    ThresholdSet::validated(t.cuts); // enforce the type invariants

    GrayImage out = GrayImage::create(img.width, img.height, 0);
    if (roi.count() == 0) return out; // nothing selected: all background

    Histogram hist = compute_histogram(img, &roi);

    // Per-class representative: rounded mean of the class's roi
    // intensities, or the band's lower bound when the class is empty.
    std::array<uint8_t, kIntensityLevels> lut{};
    int lo = 0;
    for (int c = 0; c <= t.k(); ++c) {
        int hi = (c < t.k()) ? t.cuts[size_t(c)] : kIntensityLevels - 1;
        uint64_t n = 0;
        uint64_t weighted = 0;
        for (int i = lo; i <= hi; ++i) {
            n += hist.counts[i];
            weighted += hist.counts[i] * uint64_t(i);
        }
        uint8_t rep = uint8_t(lo);
        if (n > 0) rep = uint8_t(std::llround(double(weighted) / double(n)));
        for (int i = lo; i <= hi; ++i) lut[size_t(i)] = rep;
        lo = hi + 1;
    }

    for (size_t i = 0; i < img.pixels.size(); ++i)
        out.pixels[i] = roi.bits[i] ? lut[img.pixels[i]] : 0;
    return out;
}

} // namespace ctseg
