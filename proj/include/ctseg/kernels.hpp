#pragma once

#include <cstddef>
#include <cstdint>

namespace ctseg::kernels {

// ===== Runtime-dispatched per-pixel kernels =============================
//
// The image-wide inner loops (3x3 morphology, confusion tallies, the MRF
// data-energy reduction and Potts mismatch count) exist in two builds: a
// scalar reference and an AVX2 variant. All variants are bit-exact
// equivalents, and the equivalence suite asserts exact equality on random
// inputs:
//
//   * the byte/tally kernels are integer arithmetic, so equality is free;
//   * masked_table_sum fixes the accumulation order in its contract (four
//     striped accumulators over the 4-aligned body, combined pairwise,
//     then the scalar tail). The scalar reference implements that same
//     order, so the SIMD lanes reproduce it addition for addition.
//
// The sequential passes (ICM raster sweeps, component labeling, the
// firefly search) are order-dependent by contract and stay scalar.

struct Ops {
    const char* name;

    // 3x3 square erosion/dilation on 0/1 byte masks; out-of-bounds
    // neighbors are background.
    void (*erode3x3)(const uint8_t* in, uint8_t* out, int w, int h);
    void (*dilate3x3)(const uint8_t* in, uint8_t* out, int w, int h);

    // Tally tp/fp/fn/tn (counts[0..3]) of 0/1 prediction vs 0/1 truth over
    // n pixels; scope may be null (all pixels) or a 0/1 byte mask.
    void (*confusion_tally)(const uint8_t* pred, const uint8_t* gt, const uint8_t* scope,
                            size_t n, uint64_t counts[4]);

    // Sum of table[labels[i]*256 + img[i]] over pixels with roi[i] != 0,
    // in the striped accumulation order described above. labels[i] must be
    // < 3; table holds 3*256 entries.
    double (*masked_table_sum)(const uint8_t* img, const uint8_t* labels, const uint8_t* roi,
                               size_t n, const double* table);

    // Number of unordered 4-neighbor pixel pairs that are both inside roi
    // and carry different labels.
    uint64_t (*potts_mismatch)(const uint8_t* labels, const uint8_t* roi, int w, int h);
};

// Always-available reference implementation.
const Ops& scalar_ops();

// AVX2 implementation, or nullptr when the binary/CPU lacks it.
const Ops* avx2_ops();

bool avx2_supported();

// Selected implementation. Defaults to the best supported variant; the
// environment variable CTSEG_KERNELS=scalar|avx2|auto overrides (an
// unsupported request falls back to scalar).
const Ops& active_ops();

} // namespace ctseg::kernels
