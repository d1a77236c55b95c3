#include "ctseg/image.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <limits>

#include "ctseg/errors.hpp"

namespace ctseg {

namespace {

// Dimensions are capped well below anything clinical imagery needs so a
// corrupt header cannot drive a multi-gigabyte allocation.
constexpr long kMaxDim = 1 << 15;

void require_valid_dims(int width, int height) {
    if (width < 1 || height < 1 || width > kMaxDim || height > kMaxDim)
        throw FormatError("invalid raster dimensions " + std::to_string(width) + "x" +
                          std::to_string(height));
}

} // namespace

GrayImage GrayImage::create(int width, int height, uint8_t fill) {
    require_valid_dims(width, height);
    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.assign(size_t(width) * size_t(height), fill);
    return img;
}

BinaryMask BinaryMask::create(int width, int height, bool fill) {
    require_valid_dims(width, height);
    BinaryMask m;
    m.width = width;
    m.height = height;
    m.bits.assign(size_t(width) * size_t(height), fill ? 1 : 0);
    return m;
}

uint64_t BinaryMask::count() const {
    uint64_t n = 0;
    for (uint8_t b : bits) n += b;
    return n;
}

Histogram Histogram::from_counts(const std::array<uint64_t, kIntensityLevels>& counts) {
    Histogram h;
    h.counts = counts;
    for (uint64_t c : counts) h.total += c;
    if (h.total > 0) {
        for (int i = 0; i < kIntensityLevels; ++i)
            h.probabilities[i] = double(counts[i]) / double(h.total);
    }
    return h;
}

void require_same_shape(int aw, int ah, int bw, int bh, const char* what) {
    if (aw != bw || ah != bh)
        throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(aw) + "x" +
                             std::to_string(ah) + " vs " + std::to_string(bw) + "x" +
                             std::to_string(bh));
}

GrayImage load_pgm(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P')
        throw FormatError("not a PGM file (missing magic)");
    if (bytes[1] != '5') {
        if (bytes[1] == '2')
            throw FormatError("ASCII PGM (P2) is not supported, expected binary P5");
        throw FormatError(std::string("unsupported PNM magic P") + char(bytes[1]));
    }

    // Header tokens (width, height, maxval) are separated by whitespace,
    // with '#' comments running to end of line allowed between them.
    size_t pos = 2;
    auto skip_space = [&]() {
        while (pos < bytes.size()) {
            uint8_t c = bytes[pos];
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(c)) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_number = [&](const char* what) -> long {
        skip_space();
        if (pos >= bytes.size() || !std::isdigit(bytes[pos]))
            throw FormatError(std::string("expected ") + what + " in PGM header");
        long v = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos] - '0');
            if (v > std::numeric_limits<int>::max())
                throw FormatError(std::string("overflowing ") + what + " in PGM header");
            ++pos;
        }
        return v;
    };

    long w = read_number("width");
    long h = read_number("height");
    long maxval = read_number("maxval");
    if (maxval != 255)
        throw UnsupportedDepthError("unsupported PGM maxval " + std::to_string(maxval) +
                                    " (only 8-bit, maxval 255, is handled)");
    if (pos >= bytes.size() || !std::isspace(bytes[pos]))
        throw FormatError("missing separator before PGM pixel data");
    ++pos;

    require_valid_dims(int(w), int(h));
    size_t need = size_t(w) * size_t(h);
    if (bytes.size() - pos < need)
        throw SizeError("truncated PGM payload: need " + std::to_string(need) + " bytes, have " +
                        std::to_string(bytes.size() - pos));

    GrayImage img = GrayImage::create(int(w), int(h));
    std::memcpy(img.pixels.data(), bytes.data() + pos, need);
    return img;
}

std::vector<uint8_t> save_pgm(const GrayImage& img) {
    require_valid_dims(img.width, img.height);
    std::string header = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                         "\n255\n";
    std::vector<uint8_t> out;
    out.reserve(header.size() + img.pixels.size());
    out.insert(out.end(), header.begin(), header.end());
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

BinaryMask mask_from_image(const GrayImage& img) {
    BinaryMask m = BinaryMask::create(img.width, img.height);
    for (size_t i = 0; i < img.pixels.size(); ++i) m.bits[i] = img.pixels[i] != 0 ? 1 : 0;
    return m;
}

GrayImage mask_to_image(const BinaryMask& mask) {
    GrayImage img = GrayImage::create(mask.width, mask.height);
    for (size_t i = 0; i < mask.bits.size(); ++i) img.pixels[i] = mask.bits[i] ? 255 : 0;
    return img;
}

std::vector<uint8_t> save_overlay_ppm(const GrayImage& img, const BinaryMask& mask) {
    require_same_shape(img.width, img.height, mask.width, mask.height, "overlay");
    std::string header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                         "\n255\n";
    std::vector<uint8_t> out;
    out.reserve(header.size() + img.pixels.size() * 3);
    out.insert(out.end(), header.begin(), header.end());

    auto inside = [&](int x, int y) {
        return x >= 0 && y >= 0 && x < mask.width && y < mask.height && mask.get(x, y);
    };
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            uint8_t g = img.at(x, y);
            uint8_t rch = g, gch = g, bch = g;
            if (mask.get(x, y) &&
                (!inside(x - 1, y) || !inside(x + 1, y) || !inside(x, y - 1) || !inside(x, y + 1))) {
                rch = 255;
                gch = 0;
                bch = 0;
            }
            out.push_back(rch);
            out.push_back(gch);
            out.push_back(bch);
        }
    }
    return out;
}

Histogram compute_histogram(const GrayImage& img, const BinaryMask* roi) {
    std::array<uint64_t, kIntensityLevels> counts{};
    if (roi != nullptr) {
        require_same_shape(img.width, img.height, roi->width, roi->height, "compute_histogram");
        uint64_t n = 0;
        for (size_t i = 0; i < img.pixels.size(); ++i) {
            if (roi->bits[i]) {
                ++counts[img.pixels[i]];
                ++n;
            }
        }
        if (n == 0) throw EmptyRegionError("compute_histogram: roi selects no pixels");
    } else {
        if (img.pixels.empty()) throw EmptyRegionError("compute_histogram: empty image");
        for (uint8_t p : img.pixels) ++counts[p];
    }
    return Histogram::from_counts(counts);
}

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for reading");
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (f.bad()) throw IoError("read failure on " + path);
    return bytes;
}

void write_file(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!f) throw IoError("write failure on " + path);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f.write(text.data(), std::streamsize(text.size()));
    if (!f) throw IoError("write failure on " + path);
}

} // namespace ctseg
