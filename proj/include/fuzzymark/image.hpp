#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace fuzzymark {

/// 8-bit grayscale raster, row-major.
class GrayImage {
public:
    GrayImage(int width, int height, std::vector<std::uint8_t> samples);
    GrayImage(int width, int height, std::uint8_t fill = 0);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return samples_.size(); }

    std::uint8_t at(int row, int col) const { return samples_[index(row, col)]; }
    std::uint8_t& at(int row, int col) { return samples_[index(row, col)]; }

    const std::vector<std::uint8_t>& samples() const noexcept { return samples_; }
    std::vector<std::uint8_t>& samples() noexcept { return samples_; }

    bool operator==(const GrayImage&) const = default;

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(col);
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> samples_;
};

/// Binary watermark pattern. Bit 1 is foreground (black in a PBM file).
class BinaryWatermark {
public:
    BinaryWatermark(int width, int height, std::vector<std::uint8_t> bits);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return bits_.size(); }

    std::uint8_t at(int row, int col) const {
        return bits_[static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
                     static_cast<std::size_t>(col)];
    }

    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    bool operator==(const BinaryWatermark&) const = default;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> bits_;
};

/// Real-valued plane used for wavelet coefficients and unrounded reconstructions.
struct Plane {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    Plane() = default;
    Plane(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    double& at(int row, int col) {
        return values[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(col)];
    }
    double at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(col)];
    }
};

Plane to_plane(const GrayImage& img);

/// Round half away from zero and clamp to [0, 255].
GrayImage to_gray(const Plane& plane);

// Netpbm I/O. Hosts are binary PGM (P5, maxval 255); watermarks are PBM (P4 or P1).
GrayImage load_gray(const std::filesystem::path& path);
void store_gray(const GrayImage& img, const std::filesystem::path& path);

BinaryWatermark load_watermark(const std::filesystem::path& path);
/// Always writes the packed P4 form.
void store_watermark(const BinaryWatermark& w, const std::filesystem::path& path);

// In-memory variants used by the file functions; exposed for tests.
GrayImage parse_pgm(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> encode_pgm(const GrayImage& img);
BinaryWatermark parse_pbm(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> encode_pbm(const BinaryWatermark& w);

}  // namespace fuzzymark
