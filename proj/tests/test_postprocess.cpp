#include <doctest.h>

#include <vector>

#include "ctseg/errors.hpp"
#include "ctseg/postprocess.hpp"
#include "ctseg/rng.hpp"

using namespace ctseg;

namespace {

BinaryMask random_mask(int w, int h, uint64_t seed, int density_pct = 50) {
    BinaryMask m = BinaryMask::create(w, h);
    Rng r(seed);
    for (auto& b : m.bits) b = (r.next_u64() % 100) < uint64_t(density_pct) ? 1 : 0;
    return m;
}

// Straightforward nested-loop morphology for cross-checking.
BinaryMask naive_erode(const BinaryMask& m) {
    BinaryMask out = BinaryMask::create(m.width, m.height);
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            bool all = true;
            for (int dy = -1; dy <= 1 && all; ++dy)
                for (int dx = -1; dx <= 1 && all; ++dx) {
                    int nx = x + dx, ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= m.width || ny >= m.height || !m.get(nx, ny))
                        all = false;
                }
            out.set(x, y, all);
        }
    }
    return out;
}

BinaryMask naive_dilate(const BinaryMask& m) {
    BinaryMask out = BinaryMask::create(m.width, m.height);
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            bool any = false;
            for (int dy = -1; dy <= 1 && !any; ++dy)
                for (int dx = -1; dx <= 1 && !any; ++dx) {
                    int nx = x + dx, ny = y + dy;
                    if (nx >= 0 && ny >= 0 && nx < m.width && ny < m.height && m.get(nx, ny))
                        any = true;
                }
            out.set(x, y, any);
        }
    }
    return out;
}

bool subset(const BinaryMask& a, const BinaryMask& b) {
    for (size_t i = 0; i < a.bits.size(); ++i)
        if (a.bits[i] && !b.bits[i]) return false;
    return true;
}

} // namespace

TEST_CASE("postprocess: erosion and dilation match the nested-loop reference") {
    for (auto [w, h] : std::vector<std::pair<int, int>>{{1, 1}, {5, 3}, {17, 9}, {40, 33}}) {
        for (uint64_t seed = 1; seed <= 4; ++seed) {
            BinaryMask m = random_mask(w, h, seed * 91 + uint64_t(w));
            CHECK(erode3x3(m) == naive_erode(m));
            CHECK(dilate3x3(m) == naive_dilate(m));
        }
    }
}

TEST_CASE("postprocess: morphology containment ordering") {
    for (uint64_t seed = 11; seed <= 14; ++seed) {
        BinaryMask m = random_mask(25, 19, seed, 60);
        BinaryMask opened = dilate3x3(erode3x3(m));
        CHECK(subset(opened, m));
        CHECK(subset(m, dilate3x3(m)));
        CHECK(subset(erode3x3(m), m));
    }
}

TEST_CASE("postprocess: smoothing removes isolated pixels, keeps solid blocks") {
    BinaryMask lone = BinaryMask::create(9, 9);
    lone.set(4, 4, true);
    CHECK(morphological_smooth(lone).count() == 0);

    BinaryMask block = BinaryMask::create(11, 11);
    for (int y = 3; y <= 7; ++y)
        for (int x = 3; x <= 7; ++x) block.set(x, y, true);
    BinaryMask smoothed = morphological_smooth(block);
    CHECK(smoothed == block); // a 5x5 square is a fixed point

    BinaryMask empty = BinaryMask::create(6, 6);
    CHECK(morphological_smooth(empty).count() == 0);
}

TEST_CASE("postprocess: small-component removal") {
    BinaryMask m = BinaryMask::create(30, 20);
    // component a: 2x2 = 4 px
    for (int y = 2; y <= 3; ++y)
        for (int x = 2; x <= 3; ++x) m.set(x, y, true);
    // component b: 5x4 = 20 px
    for (int y = 10; y <= 13; ++y)
        for (int x = 10; x <= 14; ++x) m.set(x, y, true);

    BinaryMask kept = remove_small_components(m, 10);
    CHECK(kept.count() == 20);
    CHECK_FALSE(kept.get(2, 2));
    CHECK(kept.get(12, 11));

    CHECK(remove_small_components(m, 0) == m);  // identity
    CHECK(remove_small_components(m, 4) == m);  // area >= min survives
    CHECK(remove_small_components(m, 5).count() == 20);
    CHECK(remove_small_components(m, 21).count() == 0);
    CHECK_THROWS_AS(remove_small_components(m, -1), ConfigError);
}

TEST_CASE("postprocess: lesion class is the highest-mean class inside the roi") {
    LabelField lf = LabelField::create(4, 1);
    lf.at(0, 0) = 0;
    lf.at(1, 0) = 2;
    lf.at(2, 0) = 2;
    lf.at(3, 0) = 1;
    BinaryMask roi = BinaryMask::create(4, 1, true);
    roi.set(2, 0, false); // class-2 pixel outside the roi must not leak in

    ClassParams p;
    p.mean = {10.0, 50.0, 200.0};
    p.variance = {1.0, 1.0, 1.0};
    p.weight = {0.3, 0.3, 0.4};
    BinaryMask lesion = extract_lesion_mask(lf, p, roi);
    CHECK(lesion.count() == 1);
    CHECK(lesion.get(1, 0));
    CHECK_FALSE(lesion.get(2, 0));

    // highest mean need not be class 2
    ClassParams rev;
    rev.mean = {200.0, 50.0, 10.0};
    rev.variance = {1.0, 1.0, 1.0};
    rev.weight = {0.4, 0.3, 0.3};
    BinaryMask lesion0 = extract_lesion_mask(lf, rev, roi);
    CHECK(lesion0.count() == 1);
    CHECK(lesion0.get(0, 0));

    ClassParams tie;
    tie.mean = {10.0, 200.0, 200.0};
    tie.variance = {1.0, 1.0, 1.0};
    tie.weight = {0.3, 0.3, 0.4};
    CHECK_THROWS_AS(extract_lesion_mask(lf, tie, roi), AmbiguousClassError);
}
