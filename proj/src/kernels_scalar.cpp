#include "ctseg/kernels.hpp"

namespace ctseg::kernels {

namespace {

// ===== 3x3 morphology ===================================================

void erode3x3_scalar(const uint8_t* in, uint8_t* out, int w, int h) {
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            uint8_t v = 1;
            for (int dy = -1; dy <= 1 && v; ++dy) {
                for (int dx = -1; dx <= 1 && v; ++dx) {
                    int nx = x + dx;
                    int ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h || !in[size_t(ny) * w + nx]) v = 0;
                }
            }
            out[size_t(y) * w + x] = v;
        }
    }
}

void dilate3x3_scalar(const uint8_t* in, uint8_t* out, int w, int h) {
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            uint8_t v = 0;
            for (int dy = -1; dy <= 1 && !v; ++dy) {
                for (int dx = -1; dx <= 1 && !v; ++dx) {
                    int nx = x + dx;
                    int ny = y + dy;
                    if (nx >= 0 && ny >= 0 && nx < w && ny < h && in[size_t(ny) * w + nx]) v = 1;
                }
            }
            out[size_t(y) * w + x] = v;
        }
    }
}

// ===== confusion tally ==================================================

void confusion_tally_scalar(const uint8_t* pred, const uint8_t* gt, const uint8_t* scope,
                            size_t n, uint64_t counts[4]) {
    uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (size_t i = 0; i < n; ++i) {
        if (scope && !scope[i]) continue;
        bool p = pred[i] != 0;
        bool g = gt[i] != 0;
        tp += p && g;
        fp += p && !g;
        fn += !p && g;
        tn += !p && !g;
    }
    counts[0] = tp;
    counts[1] = fp;
    counts[2] = fn;
    counts[3] = tn;
}

// ===== masked table reduction ===========================================

// Reference for the fixed-order sum: lane accumulators over the 4-aligned
// body, pairwise combine, scalar tail. Masked-out pixels contribute an
// explicit 0.0 so the SIMD variant (which adds a zeroed lane) matches
// bit for bit.
double masked_table_sum_scalar(const uint8_t* img, const uint8_t* labels, const uint8_t* roi,
                               size_t n, const double* table) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    size_t body = n & ~size_t(3);
    for (size_t i = 0; i < body; i += 4) {
        for (int l = 0; l < 4; ++l) {
            size_t j = i + size_t(l);
            acc[l] += roi[j] ? table[size_t(labels[j]) * 256 + img[j]] : 0.0;
        }
    }
    double tail = 0.0;
    for (size_t i = body; i < n; ++i)
        tail += roi[i] ? table[size_t(labels[i]) * 256 + img[i]] : 0.0;
    return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + tail;
}

// ===== Potts mismatch count =============================================

uint64_t potts_mismatch_scalar(const uint8_t* labels, const uint8_t* roi, int w, int h) {
    uint64_t count = 0;
    for (int y = 0; y < h; ++y) {
        const uint8_t* lrow = labels + size_t(y) * w;
        const uint8_t* rrow = roi + size_t(y) * w;
        for (int x = 0; x + 1 < w; ++x) {
            if (rrow[x] && rrow[x + 1] && lrow[x] != lrow[x + 1]) ++count;
        }
    }
    for (int y = 0; y + 1 < h; ++y) {
        const uint8_t* la = labels + size_t(y) * w;
        const uint8_t* lb = la + w;
        const uint8_t* ra = roi + size_t(y) * w;
        const uint8_t* rb = ra + w;
        for (int x = 0; x < w; ++x) {
            if (ra[x] && rb[x] && la[x] != lb[x]) ++count;
        }
    }
    return count;
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops = {
        "scalar",
        erode3x3_scalar,
        dilate3x3_scalar,
        confusion_tally_scalar,
        masked_table_sum_scalar,
        potts_mismatch_scalar,
    };
    return ops;
}

} // namespace ctseg::kernels
