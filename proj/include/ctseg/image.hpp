#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ctseg {

inline constexpr int kIntensityLevels = 256;

// Row-major 8-bit grayscale raster.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;

    static GrayImage create(int width, int height, uint8_t fill = 0);

    size_t size() const { return pixels.size(); }
    size_t index(int x, int y) const { return size_t(y) * size_t(width) + size_t(x); }
    uint8_t at(int x, int y) const { return pixels[index(x, y)]; }
    uint8_t& at(int x, int y) { return pixels[index(x, y)]; }

    bool operator==(const GrayImage&) const = default;
};

// Row-major binary mask, one byte per pixel, values 0 or 1.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;

    static BinaryMask create(int width, int height, bool fill = false);

    size_t size() const { return bits.size(); }
    size_t index(int x, int y) const { return size_t(y) * size_t(width) + size_t(x); }
    bool get(int x, int y) const { return bits[index(x, y)] != 0; }
    void set(int x, int y, bool v) { bits[index(x, y)] = v ? 1 : 0; }
    uint64_t count() const;

    bool operator==(const BinaryMask&) const = default;
};

// 256-bin intensity histogram with cached total and probabilities.
struct Histogram {
    std::array<uint64_t, kIntensityLevels> counts{};
    uint64_t total = 0;
    std::array<double, kIntensityLevels> probabilities{};

    static Histogram from_counts(const std::array<uint64_t, kIntensityLevels>& counts);
};

// Throws DimensionError unless a and b share a shape. `what` names the
// operands in the message.
void require_same_shape(int aw, int ah, int bw, int bh, const char* what);

// ----- PGM / PPM ------------------------------------------------------

// Binary PGM (P5) decode. Header comments introduced by '#' are tolerated;
// maxval must be 255. Throws FormatError / UnsupportedDepthError / SizeError.
GrayImage load_pgm(const std::vector<uint8_t>& bytes);

// Canonical binary PGM encode: "P5\n<w> <h>\n255\n" followed by the pixel
// payload. No comments are ever emitted, so save/load round-trips are
// byte-exact.
std::vector<uint8_t> save_pgm(const GrayImage& img);

// Masks travel as PGM with the usual convention: any nonzero pixel is set.
BinaryMask mask_from_image(const GrayImage& img);
GrayImage mask_to_image(const BinaryMask& mask); // set -> 255

// Binary PPM (P6) with mask boundary pixels painted pure red over the
// grayscale source. A mask pixel is boundary if any 4-neighbor is outside
// the mask (image edges count as outside).
std::vector<uint8_t> save_overlay_ppm(const GrayImage& img, const BinaryMask& mask);

// ----- histogram ------------------------------------------------------

// Tally intensities over the whole image, or over roi pixels only when a
// roi is given. Throws DimensionError on shape mismatch and
// EmptyRegionError when the roi selects no pixels.
Histogram compute_histogram(const GrayImage& img, const BinaryMask* roi = nullptr);

// ----- small file helpers ---------------------------------------------

std::vector<uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<uint8_t>& bytes);
void write_file(const std::string& path, const std::string& text);

} // namespace ctseg
