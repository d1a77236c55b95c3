#include "ctseg/labeling.hpp"

#include "ctseg/errors.hpp"

namespace ctseg {

namespace {

// Flood fill from seed over set pixels that are still unlabeled, using an
// explicit stack so deep regions cannot overflow the call stack.
void flood(const BinaryMask& mask, std::vector<int32_t>& labels, int32_t id, size_t seed,
           int connectivity, uint64_t& area, bool& touches_border) {
    const int w = mask.width;
    const int h = mask.height;
    std::vector<size_t> stack;
    stack.push_back(seed);
    labels[seed] = id;
    while (!stack.empty()) {
        size_t i = stack.back();
        stack.pop_back();
        int x = int(i % size_t(w));
        int y = int(i / size_t(w));
        ++area;
        if (x == 0 || y == 0 || x == w - 1 || y == h - 1) touches_border = true;

        auto visit = [&](int nx, int ny) {
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) return;
            size_t ni = size_t(ny) * size_t(w) + size_t(nx);
            if (mask.bits[ni] && labels[ni] < 0) {
                labels[ni] = id;
                stack.push_back(ni);
            }
        };
        visit(x - 1, y);
        visit(x + 1, y);
        visit(x, y - 1);
        visit(x, y + 1);
        if (connectivity == 8) {
            visit(x - 1, y - 1);
            visit(x + 1, y - 1);
            visit(x - 1, y + 1);
            visit(x + 1, y + 1);
        }
    }
}

} // namespace

ComponentSet label_components(const BinaryMask& mask, int connectivity) {
    if (connectivity != 4 && connectivity != 8)
        throw Error("label_components: connectivity must be 4 or 8");
    ComponentSet cs;
    cs.labels.assign(mask.bits.size(), -1);
    for (size_t i = 0; i < mask.bits.size(); ++i) {
        if (!mask.bits[i] || cs.labels[i] >= 0) continue;
        uint64_t area = 0;
        bool border = false;
        flood(mask, cs.labels, cs.count, i, connectivity, area, border);
        cs.areas.push_back(area);
        cs.touches_border.push_back(border ? 1 : 0);
        ++cs.count;
    }
    return cs;
}

BinaryMask fill_holes(const BinaryMask& mask, uint64_t max_hole_area) {
    BinaryMask inverted = mask;
    for (auto& b : inverted.bits) b = b ? 0 : 1;
    ComponentSet bg = label_components(inverted, 4);

    BinaryMask out = mask;
    for (size_t i = 0; i < out.bits.size(); ++i) {
        int32_t id = bg.labels[i];
        if (id >= 0 && !bg.touches_border[id] && bg.areas[id] < max_hole_area) out.bits[i] = 1;
    }
    return out;
}

} // namespace ctseg
