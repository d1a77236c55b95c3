#include <doctest.h>

#include <cmath>

#include "ctseg/errors.hpp"
#include "ctseg/metrics.hpp"
#include "ctseg/rng.hpp"

using namespace ctseg;

namespace {

BinaryMask random_mask(int w, int h, uint64_t seed, int density_pct = 40) {
    BinaryMask m = BinaryMask::create(w, h);
    Rng r(seed);
    for (auto& b : m.bits) b = (r.next_u64() % 100) < uint64_t(density_pct) ? 1 : 0;
    return m;
}

ConfusionMatrix naive_confusion(const BinaryMask& pred, const BinaryMask& gt,
                                const BinaryMask* scope) {
    ConfusionMatrix cm;
    for (int y = 0; y < pred.height; ++y) {
        for (int x = 0; x < pred.width; ++x) {
            if (scope && !scope->get(x, y)) continue;
            bool p = pred.get(x, y), g = gt.get(x, y);
            if (p && g)
                ++cm.tp;
            else if (p && !g)
                ++cm.fp;
            else if (!p && g)
                ++cm.fn;
            else
                ++cm.tn;
        }
    }
    return cm;
}

} // namespace

TEST_CASE("metrics: published-style confusion tallies reproduce to two decimals") {
    ConfusionMatrix cm;
    cm.tp = 24988;
    cm.fn = 2527;
    cm.fp = 1066;
    cm.tn = 208076;
    MetricsReport r = compute_metrics(cm);

    auto pct = [](std::optional<double> v) {
        REQUIRE(v.has_value());
        return std::round(*v * 10000.0) / 100.0;
    };
    CHECK(pct(r.sensitivity) == 90.82);
    CHECK(pct(r.specificity) == 99.49);
    CHECK(pct(r.precision) == 95.91);
    CHECK(pct(r.npv) == 98.80);
    CHECK(pct(r.accuracy) == 98.48);
    CHECK(pct(r.jaccard) == 87.43);
    CHECK(pct(r.dice) == 93.29);
}

TEST_CASE("metrics: confusion matches the nested-loop reference") {
    for (uint64_t seed = 1; seed <= 6; ++seed) {
        BinaryMask pred = random_mask(64, 48, seed * 3 + 1);
        BinaryMask gt = random_mask(64, 48, seed * 3 + 2);
        BinaryMask scope = random_mask(64, 48, seed * 3 + 3, 70);

        CHECK(confusion(pred, gt) == naive_confusion(pred, gt, nullptr));
        CHECK(confusion(pred, gt, &scope) == naive_confusion(pred, gt, &scope));
        CHECK(confusion(pred, gt, &scope).total() == scope.count());
        CHECK(confusion(pred, gt).total() == uint64_t(64) * 48);
    }
    BinaryMask a = random_mask(8, 8, 1);
    BinaryMask wrong = random_mask(9, 8, 2);
    CHECK_THROWS_AS(confusion(a, wrong), DimensionError);
}

TEST_CASE("metrics: perfect and inverted predictions") {
    BinaryMask gt = random_mask(32, 32, 50);
    MetricsReport perfect = compute_metrics(confusion(gt, gt));
    CHECK(*perfect.jaccard == 1.0);
    CHECK(*perfect.dice == 1.0);
    CHECK(*perfect.accuracy == 1.0);
    CHECK(*perfect.sensitivity == 1.0);
    CHECK(*perfect.specificity == 1.0);

    BinaryMask inv = gt;
    for (auto& b : inv.bits) b = b ? 0 : 1;
    MetricsReport worst = compute_metrics(confusion(inv, gt));
    CHECK(*worst.jaccard == 0.0);
    CHECK(*worst.dice == 0.0);
    CHECK(*worst.accuracy == 0.0);
}

TEST_CASE("metrics: zero denominators yield absent values, not zeros") {
    ConfusionMatrix cm;
    cm.tn = 100;
    MetricsReport r = compute_metrics(cm);
    CHECK_FALSE(r.jaccard.has_value());
    CHECK_FALSE(r.dice.has_value());
    CHECK_FALSE(r.precision.has_value());
    CHECK_FALSE(r.sensitivity.has_value());
    REQUIRE(r.accuracy.has_value());
    CHECK(*r.accuracy == 1.0);
    CHECK(*r.specificity == 1.0);
    CHECK(*r.npv == 1.0);

    CHECK_THROWS_AS(compute_metrics(ConfusionMatrix{}), EmptyScopeError);
}

TEST_CASE("metrics: swapping prediction and truth swaps the paired ratios") {
    for (uint64_t seed = 21; seed <= 26; ++seed) {
        BinaryMask a = random_mask(40, 30, seed * 7 + 1);
        BinaryMask b = random_mask(40, 30, seed * 7 + 2);
        MetricsReport ab = compute_metrics(confusion(a, b));
        MetricsReport ba = compute_metrics(confusion(b, a));
        CHECK(*ab.precision == *ba.sensitivity);
        CHECK(*ab.sensitivity == *ba.precision);
        CHECK(*ab.specificity == *ba.npv);
        CHECK(*ab.npv == *ba.specificity);
        CHECK(*ab.jaccard == *ba.jaccard);
        CHECK(*ab.dice == *ba.dice);
        CHECK(*ab.accuracy == *ba.accuracy);
    }
}

TEST_CASE("metrics: dice and jaccard satisfy D = 2J/(1+J)") {
    Rng r(808);
    for (int trial = 0; trial < 500; ++trial) {
        ConfusionMatrix cm;
        cm.tp = r.next_u64() % 10000;
        cm.fp = r.next_u64() % 10000;
        cm.fn = r.next_u64() % 10000;
        cm.tn = 1 + r.next_u64() % 10000;
        if (cm.tp + cm.fp + cm.fn == 0) continue;
        MetricsReport m = compute_metrics(cm);
        REQUIRE(m.jaccard.has_value());
        REQUIRE(m.dice.has_value());
        CHECK(std::abs(*m.dice - 2.0 * *m.jaccard / (1.0 + *m.jaccard)) < 1e-12);
    }
}
