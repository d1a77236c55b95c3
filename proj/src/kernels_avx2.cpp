// AVX2 variants of the per-pixel kernels. This translation unit is built
// with -mavx2 on x86-64; nothing here may run before the dispatcher has
// checked cpu support. Each kernel is bit-exact against the scalar
// reference (see kernels.hpp for the reduction-order contract).

#include "ctseg/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <bit>
#include <cstring>
#include <vector>

namespace ctseg::kernels {

namespace {

// ===== 3x3 morphology ===================================================
//
// The square structuring element is separable for min/max, so each pass is
// a horizontal 3-tap followed by a vertical 3-tap, 32 pixels per step,
// with scalar edges. Zero padding on both passes reproduces the reference
// out-of-bounds-is-background behavior.

inline uint8_t min3(uint8_t a, uint8_t b, uint8_t c) {
    uint8_t m = a < b ? a : b;
    return m < c ? m : c;
}

inline uint8_t max3(uint8_t a, uint8_t b, uint8_t c) {
    uint8_t m = a > b ? a : b;
    return m > c ? m : c;
}

void horizontal_min(const uint8_t* row, uint8_t* t, int w) {
    if (w == 1) {
        t[0] = 0;
        return;
    }
    t[0] = 0;     // left neighbor is background
    t[w - 1] = 0; // right neighbor is background
    int x = 1;
    for (; x + 32 <= w - 1; x += 32) {
        __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + x - 1));
        __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + x));
        __m256i c = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + x + 1));
        __m256i m = _mm256_min_epu8(_mm256_min_epu8(a, b), c);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(t + x), m);
    }
    for (; x < w - 1; ++x) t[x] = min3(row[x - 1], row[x], row[x + 1]);
}

void horizontal_max(const uint8_t* row, uint8_t* t, int w) {
    if (w == 1) {
        t[0] = row[0];
        return;
    }
    t[0] = row[0] > row[1] ? row[0] : row[1];
    t[w - 1] = row[w - 2] > row[w - 1] ? row[w - 2] : row[w - 1];
    int x = 1;
    for (; x + 32 <= w - 1; x += 32) {
        __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + x - 1));
        __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + x));
        __m256i c = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + x + 1));
        __m256i m = _mm256_max_epu8(_mm256_max_epu8(a, b), c);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(t + x), m);
    }
    for (; x < w - 1; ++x) t[x] = max3(row[x - 1], row[x], row[x + 1]);
}

void vertical_min(const uint8_t* tmp, uint8_t* out, int w, int h, const uint8_t* zrow) {
    for (int y = 0; y < h; ++y) {
        const uint8_t* a = (y > 0) ? tmp + size_t(y - 1) * w : zrow;
        const uint8_t* b = tmp + size_t(y) * w;
        const uint8_t* c = (y + 1 < h) ? tmp + size_t(y + 1) * w : zrow;
        uint8_t* o = out + size_t(y) * w;
        int x = 0;
        for (; x + 32 <= w; x += 32) {
            __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + x));
            __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + x));
            __m256i vc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c + x));
            _mm256_storeu_si256(reinterpret_cast<__m256i*>(o + x),
                                _mm256_min_epu8(_mm256_min_epu8(va, vb), vc));
        }
        for (; x < w; ++x) o[x] = min3(a[x], b[x], c[x]);
    }
}

void vertical_max(const uint8_t* tmp, uint8_t* out, int w, int h, const uint8_t* zrow) {
    for (int y = 0; y < h; ++y) {
        const uint8_t* a = (y > 0) ? tmp + size_t(y - 1) * w : zrow;
        const uint8_t* b = tmp + size_t(y) * w;
        const uint8_t* c = (y + 1 < h) ? tmp + size_t(y + 1) * w : zrow;
        uint8_t* o = out + size_t(y) * w;
        int x = 0;
        for (; x + 32 <= w; x += 32) {
            __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + x));
            __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + x));
            __m256i vc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c + x));
            _mm256_storeu_si256(reinterpret_cast<__m256i*>(o + x),
                                _mm256_max_epu8(_mm256_max_epu8(va, vb), vc));
        }
        for (; x < w; ++x) o[x] = max3(a[x], b[x], c[x]);
    }
}

void erode3x3_avx2(const uint8_t* in, uint8_t* out, int w, int h) {
    std::vector<uint8_t> tmp(size_t(w) * size_t(h));
    std::vector<uint8_t> zrow(size_t(w), 0);
    for (int y = 0; y < h; ++y) horizontal_min(in + size_t(y) * w, tmp.data() + size_t(y) * w, w);
    vertical_min(tmp.data(), out, w, h, zrow.data());
}

void dilate3x3_avx2(const uint8_t* in, uint8_t* out, int w, int h) {
    std::vector<uint8_t> tmp(size_t(w) * size_t(h));
    std::vector<uint8_t> zrow(size_t(w), 0);
    for (int y = 0; y < h; ++y) horizontal_max(in + size_t(y) * w, tmp.data() + size_t(y) * w, w);
    vertical_max(tmp.data(), out, w, h, zrow.data());
}

// ===== confusion tally ==================================================

inline uint32_t mask_bits(__m256i m) { return uint32_t(_mm256_movemask_epi8(m)); }

void confusion_tally_avx2(const uint8_t* pred, const uint8_t* gt, const uint8_t* scope,
                          size_t n, uint64_t counts[4]) {
    const __m256i zero = _mm256_setzero_si256();
    const __m256i ones = _mm256_set1_epi8(char(0xFF));
    uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
    size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i p = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(pred + i));
        __m256i g = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(gt + i));
        __m256i p0 = _mm256_cmpeq_epi8(p, zero); // 0xFF where pred clear
        __m256i g0 = _mm256_cmpeq_epi8(g, zero);
        __m256i s;
        if (scope) {
            __m256i sv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(scope + i));
            s = _mm256_andnot_si256(_mm256_cmpeq_epi8(sv, zero), ones);
        } else {
            s = ones;
        }
        __m256i p1 = _mm256_andnot_si256(p0, s); // pred set, in scope
        __m256i pn = _mm256_and_si256(p0, s);    // pred clear, in scope
        tp += std::popcount(mask_bits(_mm256_andnot_si256(g0, p1)));
        fp += std::popcount(mask_bits(_mm256_and_si256(g0, p1)));
        fn += std::popcount(mask_bits(_mm256_andnot_si256(g0, pn)));
        tn += std::popcount(mask_bits(_mm256_and_si256(g0, pn)));
    }
    for (; i < n; ++i) {
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

inline __m128i load4_epi32(const uint8_t* p) {
    uint32_t word;
    std::memcpy(&word, p, 4);
    return _mm_cvtepu8_epi32(_mm_cvtsi32_si128(int(word)));
}

double masked_table_sum_avx2(const uint8_t* img, const uint8_t* labels, const uint8_t* roi,
                             size_t n, const double* table) {
    __m256d acc = _mm256_setzero_pd();
    const __m128i zero32 = _mm_setzero_si128();
    size_t body = n & ~size_t(3);
    for (size_t i = 0; i < body; i += 4) {
        __m128i iv = load4_epi32(img + i);
        __m128i lv = load4_epi32(labels + i);
        __m128i idx = _mm_add_epi32(_mm_slli_epi32(lv, 8), iv);
        __m256d v = _mm256_i32gather_pd(table, idx, 8);
        __m128i rv = load4_epi32(roi + i);
        __m128i m32 = _mm_cmpgt_epi32(rv, zero32); // all-ones where roi set
        __m256i m64 = _mm256_cvtepi32_epi64(m32);
        v = _mm256_and_pd(v, _mm256_castsi256_pd(m64));
        acc = _mm256_add_pd(acc, v);
    }
    // Combine lanes in the contract order: ((l0 + l1) + (l2 + l3)) + tail.
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    double l0 = _mm_cvtsd_f64(lo);
    double l1 = _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
    double l2 = _mm_cvtsd_f64(hi);
    double l3 = _mm_cvtsd_f64(_mm_unpackhi_pd(hi, hi));
    double tail = 0.0;
    for (size_t i = body; i < n; ++i)
        tail += roi[i] ? table[size_t(labels[i]) * 256 + img[i]] : 0.0;
    return ((l0 + l1) + (l2 + l3)) + tail;
}

// ===== Potts mismatch count =============================================

uint64_t potts_mismatch_avx2(const uint8_t* labels, const uint8_t* roi, int w, int h) {
    const __m256i zero = _mm256_setzero_si256();
    const __m256i ones = _mm256_set1_epi8(char(0xFF));
    uint64_t count = 0;

    for (int y = 0; y < h; ++y) {
        const uint8_t* lrow = labels + size_t(y) * w;
        const uint8_t* rrow = roi + size_t(y) * w;
        int x = 0;
        for (; x + 32 <= w - 1; x += 32) {
            __m256i la = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(lrow + x));
            __m256i lb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(lrow + x + 1));
            __m256i ra = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rrow + x));
            __m256i rb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rrow + x + 1));
            __m256i both = _mm256_and_si256(_mm256_andnot_si256(_mm256_cmpeq_epi8(ra, zero), ones),
                                            _mm256_andnot_si256(_mm256_cmpeq_epi8(rb, zero), ones));
            __m256i m = _mm256_andnot_si256(_mm256_cmpeq_epi8(la, lb), both);
            count += std::popcount(mask_bits(m));
        }
        for (; x + 1 < w; ++x) {
            if (rrow[x] && rrow[x + 1] && lrow[x] != lrow[x + 1]) ++count;
        }
    }

    for (int y = 0; y + 1 < h; ++y) {
        const uint8_t* la = labels + size_t(y) * w;
        const uint8_t* lb = la + w;
        const uint8_t* ra = roi + size_t(y) * w;
        const uint8_t* rb = ra + w;
        int x = 0;
        for (; x + 32 <= w; x += 32) {
            __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(la + x));
            __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(lb + x));
            __m256i sa = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(ra + x));
            __m256i sb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rb + x));
            __m256i both = _mm256_and_si256(_mm256_andnot_si256(_mm256_cmpeq_epi8(sa, zero), ones),
                                            _mm256_andnot_si256(_mm256_cmpeq_epi8(sb, zero), ones));
            __m256i m = _mm256_andnot_si256(_mm256_cmpeq_epi8(va, vb), both);
            count += std::popcount(mask_bits(m));
        }
        for (; x < w; ++x) {
            if (ra[x] && rb[x] && la[x] != lb[x]) ++count;
        }
    }
    return count;
}

} // namespace

const Ops* avx2_ops_impl() {
    static const Ops ops = {
        "avx2",
        erode3x3_avx2,
        dilate3x3_avx2,
        confusion_tally_avx2,
        masked_table_sum_avx2,
        potts_mismatch_avx2,
    };
    return &ops;
}

} // namespace ctseg::kernels

#else // !defined(__AVX2__)

namespace ctseg::kernels {

const Ops* avx2_ops_impl() { return nullptr; }

} // namespace ctseg::kernels

#endif
