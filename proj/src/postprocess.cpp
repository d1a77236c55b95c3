#include "ctseg/postprocess.hpp"

#include "ctseg/errors.hpp"
#include "ctseg/kernels.hpp"
#include "ctseg/labeling.hpp"

namespace ctseg {

BinaryMask extract_lesion_mask(const LabelField& lf, const ClassParams& params,
                               const BinaryMask& roi) {
    require_same_shape(lf.width, lf.height, roi.width, roi.height, "labels vs roi");

    size_t lesion_class = 0;
    for (size_t c = 1; c < kNumClasses; ++c)
        if (params.mean[c] > params.mean[lesion_class]) lesion_class = c;
    for (size_t c = 0; c < kNumClasses; ++c)
        if (c != lesion_class && params.mean[c] == params.mean[lesion_class])
            throw AmbiguousClassError("two classes share the maximal mean " +
                                      std::to_string(params.mean[lesion_class]) +
                                      "; lesion class is ambiguous");

    BinaryMask out = BinaryMask::create(lf.width, lf.height);
    for (size_t i = 0; i < lf.labels.size(); ++i)
        out.bits[i] = (roi.bits[i] && lf.labels[i] == lesion_class) ? 1 : 0;
    return out;
}

BinaryMask erode3x3(const BinaryMask& mask) {
    BinaryMask out = BinaryMask::create(mask.width, mask.height);
    kernels::active_ops().erode3x3(mask.bits.data(), out.bits.data(), mask.width, mask.height);
    return out;
}

BinaryMask dilate3x3(const BinaryMask& mask) {
    BinaryMask out = BinaryMask::create(mask.width, mask.height);
    kernels::active_ops().dilate3x3(mask.bits.data(), out.bits.data(), mask.width, mask.height);
    return out;
}

BinaryMask morphological_smooth(const BinaryMask& mask) {
    BinaryMask opened = dilate3x3(erode3x3(mask));
    return erode3x3(dilate3x3(opened));
}

BinaryMask remove_small_components(const BinaryMask& mask, long min_area) {
    if (min_area < 0) throw ConfigError("post.min_component_area must be >= 0");
    if (min_area == 0) return mask;
    const uint64_t keep_at = uint64_t(min_area);
    ComponentSet cs = label_components(mask, 8);
    BinaryMask out = BinaryMask::create(mask.width, mask.height);
    for (size_t i = 0; i < mask.bits.size(); ++i) {
        int32_t id = cs.labels[i];
        out.bits[i] = (id >= 0 && cs.areas[size_t(id)] >= keep_at) ? 1 : 0;
    }
    return out;
}

} // namespace ctseg
