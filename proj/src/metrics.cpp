#include "ctseg/metrics.hpp"

#include "ctseg/errors.hpp"
#include "ctseg/kernels.hpp"

namespace ctseg {

namespace {

std::optional<double> ratio(uint64_t num, uint64_t den) {
    if (den == 0) return std::nullopt;
    return double(num) / double(den);
}

} // namespace

ConfusionMatrix confusion(const BinaryMask& pred, const BinaryMask& gt,
                          const BinaryMask* scope) {
    require_same_shape(pred.width, pred.height, gt.width, gt.height, "prediction vs truth");
    if (scope)
        require_same_shape(pred.width, pred.height, scope->width, scope->height,
                           "prediction vs scope");
    uint64_t counts[4] = {0, 0, 0, 0}; // tp, fp, fn, tn
    kernels::active_ops().confusion_tally(pred.bits.data(), gt.bits.data(),
                                          scope ? scope->bits.data() : nullptr,
                                          pred.bits.size(), counts);
    return ConfusionMatrix{counts[0], counts[3], counts[1], counts[2]};
}

MetricsReport compute_metrics(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw EmptyScopeError("confusion matrix has no scored pixels");
    MetricsReport r;
    r.jaccard = ratio(cm.tp, cm.tp + cm.fp + cm.fn);
    r.dice = ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn);
    r.accuracy = ratio(cm.tp + cm.tn, cm.total());
    r.precision = ratio(cm.tp, cm.tp + cm.fp);
    r.sensitivity = ratio(cm.tp, cm.tp + cm.fn);
    r.specificity = ratio(cm.tn, cm.tn + cm.fp);
    r.npv = ratio(cm.tn, cm.tn + cm.fn);
    return r;
}

} // namespace ctseg
