#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "ctseg/entropy.hpp"
#include "ctseg/errors.hpp"
#include "ctseg/rng.hpp"

using namespace ctseg;

namespace {

Histogram uniform_hist() {
    std::array<uint64_t, kIntensityLevels> c{};
    c.fill(1);
    return Histogram::from_counts(c);
}

Histogram two_delta_hist() {
    std::array<uint64_t, kIntensityLevels> c{};
    c[50] = 1000;
    c[200] = 1000;
    return Histogram::from_counts(c);
}

Histogram random_hist(uint64_t seed, int occupied) {
    std::array<uint64_t, kIntensityLevels> c{};
    Rng r(seed);
    for (int i = 0; i < occupied; ++i)
        c[size_t(r.next_u64() % kIntensityLevels)] += 1 + r.next_u64() % 500;
    return Histogram::from_counts(c);
}

// Textbook form of the objective, summed bin by bin, as an independent
// check on the prefix-sum evaluation.
double direct_objective(const Histogram& h, const std::vector<int>& cuts) {
    double score = 0.0;
    int lo = 0;
    for (size_t c = 0; c <= cuts.size(); ++c) {
        int hi = (c < cuts.size()) ? cuts[size_t(c)] : 255;
        double w = 0.0;
        for (int i = lo; i <= hi; ++i) w += h.probabilities[i];
        if (w > 0.0) {
            double ent = 0.0;
            for (int i = lo; i <= hi; ++i) {
                double q = h.probabilities[i] / w;
                if (q > 0.0) ent -= q * std::log(q);
            }
            score += ent;
        }
        lo = hi + 1;
    }
    return score;
}

} // namespace

TEST_CASE("entropy: threshold set validation") {
    CHECK_NOTHROW(ThresholdSet::validated({1}));
    CHECK_NOTHROW(ThresholdSet::validated({85, 170}));
    CHECK_NOTHROW(ThresholdSet::validated({254}));
    CHECK_THROWS_AS(ThresholdSet::validated({}), Error);
    CHECK_THROWS_AS(ThresholdSet::validated({0}), Error);
    CHECK_THROWS_AS(ThresholdSet::validated({255}), Error);
    CHECK_THROWS_AS(ThresholdSet::validated({90, 90}), Error);
    CHECK_THROWS_AS(ThresholdSet::validated({170, 85}), Error);
}

TEST_CASE("entropy: uniform histogram closed form") {
    // classes of 86/85/85 equiprobable bins: ln 86 + ln 85 + ln 85
    const double expect = std::log(86.0) + 2.0 * std::log(85.0);
    double got = shannon_objective(uniform_hist(), ThresholdSet{{85, 170}});
    CHECK(std::abs(got - expect) < 1e-9);
}

TEST_CASE("entropy: two-delta histogram scores zero at separating cuts") {
    Histogram h = two_delta_hist();
    for (auto cuts : std::vector<std::vector<int>>{{50, 199}, {50, 200}, {125}, {60, 130}}) {
        CHECK(shannon_objective(h, ThresholdSet{cuts}) == 0.0);
    }
    // a non-separating cut leaves one class holding both spikes
    CHECK(shannon_objective(h, ThresholdSet{{210}}) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("entropy: objective matches the direct bin-by-bin formula") {
    Rng pick(777);
    for (uint64_t seed = 1; seed <= 30; ++seed) {
        Histogram h = random_hist(seed, 40);
        int k = 1 + int(pick.next_u64() % 3);
        std::vector<int> cuts;
        int prev = 0;
        for (int i = 0; i < k; ++i) {
            int lo = prev + 1;
            int hi = 254 - (k - 1 - i);
            if (lo > hi) break;
            int c = lo + int(pick.next_u64() % uint64_t(hi - lo + 1));
            cuts.push_back(c);
            prev = c;
        }
        if (cuts.empty()) continue;
        double got = shannon_objective(h, ThresholdSet{cuts});
        double want = direct_objective(h, cuts);
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
        CHECK(got >= -1e-12); // nonnegative up to fp noise
    }
}

TEST_CASE("entropy: scaling every count leaves the objective unchanged") {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        Histogram h = random_hist(seed, 25);
        std::array<uint64_t, kIntensityLevels> scaled{};
        for (int i = 0; i < kIntensityLevels; ++i) scaled[size_t(i)] = h.counts[size_t(i)] * 7;
        Histogram h7 = Histogram::from_counts(scaled);
        ThresholdSet t{{64, 171}};
        // integer/integer division rounds the same real quotient both
        // times, so the probabilities and the scores are identical bits
        CHECK(shannon_objective(h, t) == shannon_objective(h7, t));
    }
}

TEST_CASE("entropy: zero when every occupied class is a single spike") {
    std::array<uint64_t, kIntensityLevels> c{};
    c[10] = 5;
    c[90] = 2;
    c[240] = 9;
    Histogram h = Histogram::from_counts(c);
    // (p ln p)/p only recovers ln p exactly when p is a power of two, so a
    // single-spike class can land an ulp away from zero
    CHECK(std::abs(shannon_objective(h, ThresholdSet{{40, 180}})) < 1e-12);
    // moving a cut so one class holds two spikes makes it positive
    CHECK(shannon_objective(h, ThresholdSet{{40, 250}}) > 0.0);
}

TEST_CASE("entropy: exhaustive optimum on the uniform histogram") {
    ExhaustiveResult r = exhaustive_optimal(uniform_hist(), 2);
    CHECK(r.cuts.cuts == std::vector<int>{84, 169});
    CHECK(std::abs(r.score - (std::log(86.0) + 2.0 * std::log(85.0))) < 1e-9);
}

TEST_CASE("entropy: exhaustive optimum on the two-delta histogram, one cut") {
    // any cut below the first spike lumps both spikes into one class,
    // which scores ln 2 and beats every separating cut's 0
    ExhaustiveResult r = exhaustive_optimal(two_delta_hist(), 1);
    CHECK(r.cuts.cuts == std::vector<int>{1});
    CHECK(r.score == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("entropy: exhaustive beats or ties every random candidate") {
    Rng pick(555);
    for (uint64_t seed = 40; seed < 44; ++seed) {
        Histogram h = random_hist(seed, 60);
        ExhaustiveResult r = exhaustive_optimal(h, 2);
        CHECK(r.score == shannon_objective(h, r.cuts));
        for (int trial = 0; trial < 200; ++trial) {
            int a = 1 + int(pick.next_u64() % 253);
            int b = a + 1 + int(pick.next_u64() % uint64_t(254 - a));
            CHECK(shannon_objective(h, ThresholdSet{{a, b}}) <= r.score + 1e-12);
        }
    }
}

TEST_CASE("entropy: exhaustive scope limit") {
    CHECK_THROWS_AS(exhaustive_optimal(uniform_hist(), 4), OracleScopeError);
    CHECK_THROWS_AS(exhaustive_optimal(Histogram{}, 1), Error);
}

TEST_CASE("entropy: apply_thresholds replaces classes by their rounded means") {
    GrayImage img = GrayImage::create(4, 1);
    img.at(0, 0) = 10;
    img.at(1, 0) = 10;
    img.at(2, 0) = 200;
    img.at(3, 0) = 200;
    BinaryMask all = BinaryMask::create(4, 1, true);
    ThresholdSet t{{85, 170}};

    GrayImage q = apply_thresholds(img, t, all);
    CHECK(q == img); // per-class means coincide with the values

    GrayImage flat = GrayImage::create(3, 2, 100);
    BinaryMask all6 = BinaryMask::create(3, 2, true);
    GrayImage qf = apply_thresholds(flat, t, all6);
    for (auto p : qf.pixels) CHECK(p == 100);

    // half-way means round away from zero
    GrayImage two = GrayImage::create(2, 1);
    two.at(0, 0) = 10;
    two.at(1, 0) = 11;
    BinaryMask both = BinaryMask::create(2, 1, true);
    GrayImage qr = apply_thresholds(two, t, both);
    CHECK(qr.at(0, 0) == 11);
    CHECK(qr.at(1, 0) == 11);
}

TEST_CASE("entropy: apply_thresholds zeroes non-roi pixels") {
    GrayImage img = GrayImage::create(3, 1, 50);
    BinaryMask roi = BinaryMask::create(3, 1);
    roi.set(1, 0, true);
    GrayImage q = apply_thresholds(img, ThresholdSet{{85, 170}}, roi);
    CHECK(q.at(0, 0) == 0);
    CHECK(q.at(1, 0) == 50);
    CHECK(q.at(2, 0) == 0);

    BinaryMask none = BinaryMask::create(3, 1);
    GrayImage qz = apply_thresholds(img, ThresholdSet{{85, 170}}, none);
    for (auto p : qz.pixels) CHECK(p == 0);

    CHECK_THROWS_AS(apply_thresholds(img, ThresholdSet{{300}}, roi), Error);
    CHECK_THROWS_AS(apply_thresholds(img, ThresholdSet{{85, 170}}, BinaryMask::create(2, 1, true)),
                    DimensionError);
}
