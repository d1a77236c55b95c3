#pragma once

#include <cstdint>
#include <optional>

#include "ctseg/image.hpp"

namespace ctseg {

struct ConfusionMatrix {
    uint64_t tp = 0;
    uint64_t tn = 0;
    uint64_t fp = 0;
    uint64_t fn = 0;

    uint64_t total() const { return tp + tn + fp + fn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

// Ratios are absent when their denominator is zero (0/0), which is distinct
// from a measured 0.
struct MetricsReport {
    std::optional<double> jaccard;
    std::optional<double> dice;
    std::optional<double> accuracy;
    std::optional<double> precision;
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    std::optional<double> npv;
};

// Pixel tallies of prediction vs ground truth over the scope mask (whole
// image when scope is null). Positive = set pixel.
ConfusionMatrix confusion(const BinaryMask& pred, const BinaryMask& gt,
                          const BinaryMask* scope = nullptr);

// jaccard tp/(tp+fp+fn), dice 2tp/(2tp+fp+fn), accuracy (tp+tn)/total,
// precision tp/(tp+fp), sensitivity tp/(tp+fn), specificity tn/(tn+fp),
// npv tn/(tn+fn). Throws EmptyScopeError when every count is zero.
MetricsReport compute_metrics(const ConfusionMatrix& cm);

} // namespace ctseg
